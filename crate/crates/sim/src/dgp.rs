//! Stationary noise generators rescaled to unit long-run variance.
//!
//! Every generator draws its innovations from a `ChaCha8` stream seeded with
//! the caller's seed, so a (kind, burn-in, length, seed) tuple pins the
//! output bit for bit. Recursions are started well before the kept stretch
//! and the warm-up samples are discarded; the remaining values are divided
//! by the square root of the recursion's long-run variance, which makes the
//! long-run variance of the emitted series exactly one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use trendtest_core::{Error, Result, TimeSeries};

/// Warm-up length used for recursive generators when none is requested.
pub const DEFAULT_BURN_IN: usize = 1000;

/// The lambda value for which the nonlinear autoregression's rescaling
/// constant has been calibrated.
pub const NONLINEAR_LAMBDA: f64 = 0.5;

/// Long-run variance of the nonlinear autoregression
/// y_i = 0.5 * y_{i-1} * cos(y_{i-1}) + e_i with standard normal innovations.
/// No closed form is available; the value is a batch-means estimate over
/// 16 independent runs of 4e7 samples each (batch length 2000, standard
/// error about 3e-3). The ignored test `rederive_nonlinear_scaling` below
/// reproduces it.
const NONLINEAR_LRV_LAMBDA_HALF: f64 = 1.0528;

/// Noise recursions available to the simulation harness. All innovations are
/// standard normal except `IidExp`, which uses centred unit exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpKind {
    IidNormal,
    IidExp,
    /// y_i = phi * y_{i-1} + e_i.
    Ar1 { phi: f64 },
    /// y_i = ar1*y_{i-1} + ar2*y_{i-2} + e_i + ma1*e_{i-1} + ma2*e_{i-2}.
    Arma22 {
        #[serde(default = "defaults::arma_ar1")]
        ar1: f64,
        #[serde(default = "defaults::arma_ar2")]
        ar2: f64,
        #[serde(default = "defaults::arma_ma1")]
        ma1: f64,
        #[serde(default = "defaults::arma_ma2")]
        ma2: f64,
    },
    /// y_i = s_i * e_i with s_i^2 = omega + alpha*y_{i-1}^2 + beta*s_{i-1}^2.
    Garch11 {
        #[serde(default = "defaults::garch_omega")]
        omega: f64,
        #[serde(default = "defaults::garch_alpha")]
        alpha: f64,
        #[serde(default = "defaults::garch_beta")]
        beta: f64,
    },
    /// y_i = lambda * y_{i-1} * cos(y_{i-1}) + e_i, a bounded-drift
    /// autoregression whose rescaling constant is calibrated numerically.
    NonlinearAr1 {
        #[serde(default = "defaults::nonlinear_lambda")]
        lambda: f64,
    },
}

mod defaults {
    pub fn arma_ar1() -> f64 {
        0.8
    }
    pub fn arma_ar2() -> f64 {
        -0.4
    }
    pub fn arma_ma1() -> f64 {
        0.5
    }
    pub fn arma_ma2() -> f64 {
        0.34
    }
    pub fn garch_omega() -> f64 {
        0.1
    }
    pub fn garch_alpha() -> f64 {
        0.1
    }
    pub fn garch_beta() -> f64 {
        0.8
    }
    pub fn nonlinear_lambda() -> f64 {
        super::NONLINEAR_LAMBDA
    }
}

impl DgpKind {
    /// The ARMA(2,2) parameter set used throughout the bundled scenarios.
    pub fn standard_arma22() -> Self {
        DgpKind::Arma22 {
            ar1: defaults::arma_ar1(),
            ar2: defaults::arma_ar2(),
            ma1: defaults::arma_ma1(),
            ma2: defaults::arma_ma2(),
        }
    }

    /// The GARCH(1,1) parameter set used throughout the bundled scenarios.
    pub fn standard_garch11() -> Self {
        DgpKind::Garch11 {
            omega: defaults::garch_omega(),
            alpha: defaults::garch_alpha(),
            beta: defaults::garch_beta(),
        }
    }

    /// Whether the generator carries state between steps; stateless kinds
    /// need no warm-up.
    pub fn is_recursive(&self) -> bool {
        !matches!(self, DgpKind::IidNormal | DgpKind::IidExp)
    }

    /// Compact label for table rows, for example `ar1(0.7)`.
    pub fn label(&self) -> String {
        match *self {
            DgpKind::IidNormal => "iid_normal".to_string(),
            DgpKind::IidExp => "iid_exp".to_string(),
            DgpKind::Ar1 { phi } => format!("ar1({phi})"),
            DgpKind::Arma22 { ar1, ar2, ma1, ma2 } => {
                format!("arma22({ar1},{ar2},{ma1},{ma2})")
            }
            DgpKind::Garch11 { omega, alpha, beta } => {
                format!("garch11({omega},{alpha},{beta})")
            }
            DgpKind::NonlinearAr1 { lambda } => format!("nonlinear_ar1({lambda})"),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match *self {
            DgpKind::IidNormal | DgpKind::IidExp => Ok(()),
            DgpKind::Ar1 { phi } => {
                if !phi.is_finite() || phi.abs() >= 1.0 {
                    return bad(format!("ar1 coefficient must satisfy |phi| < 1, got {phi}"));
                }
                Ok(())
            }
            DgpKind::Arma22 { ar1, ar2, ma1, ma2 } => {
                if ![ar1, ar2, ma1, ma2].iter().all(|p| p.is_finite()) {
                    return bad("arma22 parameters must be finite".to_string());
                }
                // Stationarity region of the AR(2) part.
                if ar2.abs() >= 1.0 || ar1 + ar2 >= 1.0 || ar2 - ar1 >= 1.0 {
                    return bad(format!(
                        "arma22 autoregressive part is not stationary: ar1={ar1}, ar2={ar2}"
                    ));
                }
                if (1.0 + ma1 + ma2).abs() < 1e-12 {
                    return bad(
                        "arma22 moving-average weights sum to -1; the long-run variance \
                         vanishes and the series cannot be rescaled"
                            .to_string(),
                    );
                }
                Ok(())
            }
            DgpKind::Garch11 { omega, alpha, beta } => {
                if !(omega.is_finite() && alpha.is_finite() && beta.is_finite()) {
                    return bad("garch11 parameters must be finite".to_string());
                }
                if omega <= 0.0 {
                    return bad(format!("garch11 needs omega > 0, got {omega}"));
                }
                if alpha < 0.0 || beta < 0.0 || alpha + beta >= 1.0 {
                    return bad(format!(
                        "garch11 needs alpha, beta >= 0 and alpha + beta < 1, got \
                         alpha={alpha}, beta={beta}"
                    ));
                }
                Ok(())
            }
            DgpKind::NonlinearAr1 { lambda } => {
                if !lambda.is_finite() || lambda.abs() >= 1.0 {
                    return bad(format!(
                        "nonlinear autoregression needs |lambda| < 1, got {lambda}"
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A noise recursion together with the number of warm-up samples discarded
/// before the kept stretch begins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpSpec {
    pub kind: DgpKind,
    pub burn_in: usize,
}

impl DgpSpec {
    /// Wraps a kind with the default warm-up: none for i.i.d. kinds,
    /// [`DEFAULT_BURN_IN`] for recursive ones.
    pub fn new(kind: DgpKind) -> Self {
        let burn_in = if kind.is_recursive() {
            DEFAULT_BURN_IN
        } else {
            0
        };
        DgpSpec { kind, burn_in }
    }

    pub fn with_burn_in(kind: DgpKind, burn_in: usize) -> Self {
        DgpSpec { kind, burn_in }
    }

    pub fn validate(&self) -> Result<()> {
        self.kind.validate()
    }
}

/// Long-run variance of the raw (unscaled) recursion. [`generate_noise`]
/// divides by the square root of this value, so its output has long-run
/// variance one.
pub fn lrv_theoretical(spec: &DgpSpec) -> Result<f64> {
    spec.validate()?;
    match spec.kind {
        DgpKind::IidNormal | DgpKind::IidExp => Ok(1.0),
        DgpKind::Ar1 { phi } => Ok(1.0 / ((1.0 - phi) * (1.0 - phi))),
        DgpKind::Arma22 { ar1, ar2, ma1, ma2 } => {
            let transfer = (1.0 + ma1 + ma2) / (1.0 - ar1 - ar2);
            Ok(transfer * transfer)
        }
        DgpKind::Garch11 { omega, alpha, beta } => {
            // Uncorrelated increments: the long-run variance equals the
            // stationary variance.
            Ok(omega / (1.0 - alpha - beta))
        }
        DgpKind::NonlinearAr1 { lambda } => {
            if lambda == NONLINEAR_LAMBDA {
                Ok(NONLINEAR_LRV_LAMBDA_HALF)
            } else {
                Err(Error::Config(format!(
                    "the nonlinear autoregression's rescaling constant is calibrated \
                     for lambda = {NONLINEAR_LAMBDA} only, got {lambda}"
                )))
            }
        }
    }
}

/// Generates `n` values of the requested recursion, discards the warm-up,
/// and rescales the kept stretch to unit long-run variance. Deterministic in
/// `(spec, n, seed)`.
pub fn generate_noise(spec: &DgpSpec, n: usize, seed: u64) -> Result<TimeSeries> {
    if n == 0 {
        return Err(Error::Input(
            "cannot generate an empty noise series".to_string(),
        ));
    }
    let scale = 1.0 / lrv_theoretical(spec)?.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let burn = spec.burn_in;
    let mut out = Vec::with_capacity(n);

    match spec.kind {
        DgpKind::IidNormal => {
            for i in 0..burn + n {
                let e: f64 = rng.sample(StandardNormal);
                if i >= burn {
                    out.push(scale * e);
                }
            }
        }
        DgpKind::IidExp => {
            for i in 0..burn + n {
                let e: f64 = rng.sample(Exp1);
                if i >= burn {
                    out.push(scale * (e - 1.0));
                }
            }
        }
        DgpKind::Ar1 { phi } => {
            let mut y = 0.0;
            for i in 0..burn + n {
                let e: f64 = rng.sample(StandardNormal);
                y = phi * y + e;
                if i >= burn {
                    out.push(scale * y);
                }
            }
        }
        DgpKind::Arma22 { ar1, ar2, ma1, ma2 } => {
            let (mut y1, mut y2) = (0.0, 0.0);
            let (mut e1, mut e2) = (0.0, 0.0);
            for i in 0..burn + n {
                let e: f64 = rng.sample(StandardNormal);
                let y = ar1 * y1 + ar2 * y2 + e + ma1 * e1 + ma2 * e2;
                (y2, y1) = (y1, y);
                (e2, e1) = (e1, e);
                if i >= burn {
                    out.push(scale * y);
                }
            }
        }
        DgpKind::Garch11 { omega, alpha, beta } => {
            // Start at the stationary variance so the warm-up only has to
            // wash out the first innovation, not a drifting variance level.
            let mut s2 = omega / (1.0 - alpha - beta);
            let e0: f64 = rng.sample(StandardNormal);
            let mut y = s2.sqrt() * e0;
            for i in 0..burn + n {
                if i >= burn {
                    out.push(scale * y);
                }
                let e: f64 = rng.sample(StandardNormal);
                s2 = omega + alpha * y * y + beta * s2;
                y = s2.sqrt() * e;
            }
        }
        DgpKind::NonlinearAr1 { lambda } => {
            let mut y = 0.0;
            for i in 0..burn + n {
                let e: f64 = rng.sample(StandardNormal);
                y = lambda * y * y.cos() + e;
                if i >= burn {
                    out.push(scale * y);
                }
            }
        }
    }
    TimeSeries::new(out)
}

/// Batch-means estimate of the long-run variance: the batch length times the
/// sample variance of consecutive batch means. Used to check that generated
/// noise really has long-run variance one.
///
/// Panics unless the input holds at least two full batches.
pub fn batch_means_lrv(values: &[f64], batch_len: usize) -> f64 {
    assert!(
        batch_len >= 1 && values.len() >= 2 * batch_len,
        "batch-means estimate needs at least two full batches"
    );
    let b = values.len() / batch_len;
    let means: Vec<f64> = (0..b)
        .map(|j| values[j * batch_len..(j + 1) * batch_len].iter().sum::<f64>() / batch_len as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / b as f64;
    let var = means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (b - 1) as f64;
    batch_len as f64 * var
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(kind: DgpKind) -> DgpSpec {
        DgpSpec::new(kind)
    }

    #[test]
    fn rescaling_constants_match_standard_identities() {
        assert_relative_eq!(
            lrv_theoretical(&spec(DgpKind::IidNormal)).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            lrv_theoretical(&spec(DgpKind::IidExp)).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            lrv_theoretical(&spec(DgpKind::Ar1 { phi: 0.4 })).unwrap(),
            1.0 / 0.36,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            lrv_theoretical(&spec(DgpKind::standard_arma22())).unwrap(),
            (1.84f64 / 0.6).powi(2),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            lrv_theoretical(&spec(DgpKind::standard_garch11())).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        for kind in [
            DgpKind::Ar1 { phi: 1.0 },
            DgpKind::Ar1 { phi: f64::NAN },
            DgpKind::Arma22 {
                ar1: 0.6,
                ar2: 0.4,
                ma1: 0.0,
                ma2: 0.0,
            },
            DgpKind::Arma22 {
                ar1: 0.0,
                ar2: 0.0,
                ma1: -0.5,
                ma2: -0.5,
            },
            DgpKind::Garch11 {
                omega: 0.0,
                alpha: 0.1,
                beta: 0.8,
            },
            DgpKind::Garch11 {
                omega: 0.1,
                alpha: 0.5,
                beta: 0.5,
            },
            DgpKind::NonlinearAr1 { lambda: 1.0 },
        ] {
            assert!(
                spec(kind).validate().is_err(),
                "expected rejection of {kind:?}"
            );
        }
    }

    #[test]
    fn nonlinear_scaling_is_pinned_to_the_calibrated_lambda() {
        let err = lrv_theoretical(&spec(DgpKind::NonlinearAr1 { lambda: 0.3 })).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(
            lrv_theoretical(&spec(DgpKind::NonlinearAr1 {
                lambda: NONLINEAR_LAMBDA
            }))
            .unwrap()
                > 0.0
        );
    }

    #[test]
    fn default_burn_in_depends_on_recursiveness() {
        assert_eq!(spec(DgpKind::IidNormal).burn_in, 0);
        assert_eq!(spec(DgpKind::IidExp).burn_in, 0);
        assert_eq!(spec(DgpKind::Ar1 { phi: 0.4 }).burn_in, DEFAULT_BURN_IN);
        assert_eq!(spec(DgpKind::standard_garch11()).burn_in, DEFAULT_BURN_IN);
    }

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let s = spec(DgpKind::standard_arma22());
        let a = generate_noise(&s, 64, 7).unwrap();
        let b = generate_noise(&s, 64, 7).unwrap();
        let c = generate_noise(&s, 64, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn burn_in_shifts_the_kept_stretch() {
        let with = generate_noise(&DgpSpec::with_burn_in(DgpKind::IidNormal, 5), 16, 3).unwrap();
        let without = generate_noise(&DgpSpec::with_burn_in(DgpKind::IidNormal, 0), 21, 3).unwrap();
        assert_eq!(with.values(), &without.values()[5..]);
    }

    #[test]
    fn rescaled_ar1_has_the_implied_variance_and_autocorrelation() {
        // After rescaling by (1 - phi), the variance of the AR(1) output is
        // (1 - phi) / (1 + phi) while the autocorrelation stays phi.
        let phi = 0.7;
        let x = generate_noise(&spec(DgpKind::Ar1 { phi }), 200_000, 11).unwrap();
        let v = x.values();
        let mean = x.mean();
        let var = v.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / v.len() as f64;
        assert_relative_eq!(var, (1.0 - phi) / (1.0 + phi), max_relative = 0.03);
        let cov1 = v
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / (v.len() - 1) as f64;
        assert!((cov1 / var - phi).abs() < 0.015);
    }

    #[test]
    fn centred_exponential_noise_has_mean_zero_unit_variance_and_a_floor() {
        let x = generate_noise(&spec(DgpKind::IidExp), 200_000, 5).unwrap();
        let v = x.values();
        let mean = x.mean();
        assert!(mean.abs() < 0.01, "mean {mean}");
        let var = v.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / v.len() as f64;
        assert_relative_eq!(var, 1.0, max_relative = 0.03);
        assert!(v.iter().all(|y| *y >= -1.0));
    }

    #[test]
    fn garch_noise_has_unit_variance_and_no_autocorrelation() {
        let x = generate_noise(&spec(DgpKind::standard_garch11()), 200_000, 13).unwrap();
        let v = x.values();
        let mean = x.mean();
        let var = v.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / v.len() as f64;
        assert_relative_eq!(var, 1.0, max_relative = 0.05);
        let cov1 = v
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / (v.len() - 1) as f64;
        assert!((cov1 / var).abs() < 0.02);
    }

    #[test]
    fn empty_requests_are_rejected() {
        assert!(matches!(
            generate_noise(&spec(DgpKind::IidNormal), 0, 1),
            Err(Error::Input(_))
        ));
    }

    /// Rederives the calibrated rescaling constant of the nonlinear
    /// autoregression. Slow; run with --ignored when the constant needs to
    /// be checked.
    #[test]
    #[ignore]
    fn rederive_nonlinear_scaling() {
        let lambda = NONLINEAR_LAMBDA;
        let runs = 16;
        let n = 40_000_000usize;
        let mut total = 0.0;
        for seed in 0..runs {
            let mut rng = ChaCha8Rng::seed_from_u64(1_000_003 + seed);
            let mut y = 0.0f64;
            for _ in 0..DEFAULT_BURN_IN {
                let e: f64 = rng.sample(StandardNormal);
                y = lambda * y * y.cos() + e;
            }
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                let e: f64 = rng.sample(StandardNormal);
                y = lambda * y * y.cos() + e;
                values.push(y);
            }
            total += batch_means_lrv(&values, 2000);
        }
        let estimate = total / runs as f64;
        println!("nonlinear autoregression long-run variance estimate: {estimate:.5}");
        assert!(
            (estimate - NONLINEAR_LRV_LAMBDA_HALF).abs() < 0.005,
            "calibrated constant {NONLINEAR_LRV_LAMBDA_HALF} vs fresh estimate {estimate}"
        );
    }
}
