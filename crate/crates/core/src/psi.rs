//! Limit-distribution nuisance parameters of the block-mean comparison.
//!
//! Under the null the test statistic is centered by the average pairwise
//! half-normal mean gap (`pair_centring_term`) and scaled by the limit
//! variance `psi_hat_sq`. The latter has no closed form for a non-constant
//! variance profile; it is estimated by Monte Carlo over the conditioning
//! variable only, with the inner conditional expectation evaluated in closed
//! form (a folded-normal mean), which removes most of the simulation noise.

use crate::error::{Error, Result};
use crate::gauss::normal_cdf;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

fn root_2_over_pi() -> f64 {
    (2.0 / PI).sqrt()
}

/// E|a*z + W| for W ~ N(0, b^2), the mean of a folded normal with location
/// a*z and scale b. Degenerates to |a*z| when b = 0.
pub fn folded_conditional_mean(a: f64, b: f64, z: f64) -> f64 {
    let c = a * z;
    if b == 0.0 {
        return c.abs();
    }
    b * root_2_over_pi() * (-c * c / (2.0 * b * b)).exp() + c * (2.0 * normal_cdf(c / b) - 1.0)
}

/// Average over all ordered pairs j != k of sqrt(s_j^2 + s_k^2) * sqrt(2/pi):
/// the centring term of the studentized statistic. Requires at least two
/// entries.
pub fn pair_centring_term(sigma_hats: &[f64]) -> Result<f64> {
    let b = sigma_hats.len();
    if b < 2 {
        return Err(Error::Input(format!(
            "centring term needs at least 2 scale estimates, got {b}"
        )));
    }
    let mut total = 0.0;
    for (j, &sj) in sigma_hats.iter().enumerate() {
        for &sk in &sigma_hats[j + 1..] {
            total += 2.0 * (sj * sj + sk * sk).sqrt();
        }
    }
    Ok(total * root_2_over_pi() / (b as f64 * (b - 1) as f64))
}

/// Monte Carlo estimate of the limit variance, with provenance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PsiEstimate {
    pub value: f64,
    pub mc_reps: usize,
    pub seed: u64,
}

/// Limit variance of the statistic, estimated from the blockwise scale
/// estimates. For each standard normal draw z and each block j,
///
///   A_j(z) = (1/(b-1)) * sum_{k != j} [ E(|s_j Z - s_k Z'| given Z = z)
///                                       - sqrt(s_j^2 + s_k^2) sqrt(2/pi) ]
///
/// and the returned value is 4 times the average over draws of
/// (1/b) sum_j A_j(z)^2. Deterministic given the seed.
///
/// Equal scale estimates are grouped, so each draw costs O(u^2) for u unique
/// values instead of O(b^2); the regrouping is algebraically exact.
pub fn psi_hat_sq(sigma_hats: &[f64], mc_reps: usize, seed: u64) -> Result<PsiEstimate> {
    let b = sigma_hats.len();
    if b < 2 {
        return Err(Error::Input(format!(
            "limit variance needs at least 2 scale estimates, got {b}"
        )));
    }
    if mc_reps == 0 {
        return Err(Error::Config(
            "Monte Carlo replication count must be at least 1".into(),
        ));
    }
    if sigma_hats.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::Input(
            "scale estimates must be finite and non-negative".into(),
        ));
    }
    if sigma_hats.iter().all(|&s| s == 0.0) {
        return Err(Error::Degenerate(
            "all scale estimates are zero; the limit variance vanishes".into(),
        ));
    }

    // Unique values with multiplicities. Exact equality is the right notion:
    // merging equal values changes nothing algebraically.
    let mut sorted = sigma_hats.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite by validation"));
    let mut uniq: Vec<(f64, f64)> = Vec::new();
    for &s in &sorted {
        match uniq.last_mut() {
            Some((v, m)) if *v == s => *m += 1.0,
            _ => uniq.push((s, 1.0)),
        }
    }

    let k2pi = root_2_over_pi();
    // Unconditional pair means sqrt(v_a^2 + v_b^2) * sqrt(2/pi), precomputed.
    let uncond: Vec<Vec<f64>> = uniq
        .iter()
        .map(|&(va, _)| {
            uniq.iter()
                .map(|&(vb, _)| (va * va + vb * vb).sqrt() * k2pi)
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bm1 = (b - 1) as f64;
    let mut acc = 0.0;
    let mut g = vec![0.0; uniq.len()];
    for _ in 0..mc_reps {
        let z: f64 = StandardNormal.sample(&mut rng);
        let mut s_z = 0.0;
        for (ai, &(va, ma)) in uniq.iter().enumerate() {
            let mut row = 0.0;
            for (bi, &(vb, mb)) in uniq.iter().enumerate() {
                g[bi] = folded_conditional_mean(va, vb, z) - uncond[ai][bi];
                row += mb * g[bi];
            }
            let a_j = (row - g[ai]) / bm1;
            s_z += ma * a_j * a_j;
        }
        acc += s_z / b as f64;
    }

    Ok(PsiEstimate {
        value: 4.0 * acc / mc_reps as f64,
        mc_reps,
        seed,
    })
}

/// Closed form of the limit variance when the scale profile is constant:
/// sigma^2 * (4/3 + (8/pi)(sqrt(3) - 2)).
pub fn psi_sq_constant(sigma: f64) -> f64 {
    sigma * sigma * (4.0 / 3.0 + (8.0 / PI) * (3.0f64.sqrt() - 2.0))
}
