//! Subsampling estimation of the long-run standard deviation.
//!
//! The estimator is mean-robust: each subsampling block sum is centered by
//! the average of the observations in a window of `c0` block lengths to each
//! side, so slow drifts in the mean cancel locally instead of inflating the
//! estimate. Absolute centered block sums are then averaged and rescaled by
//! the half-normal constant sqrt(pi/2) and a finite-window correction
//! sqrt(2*c0 / (1 + 2*c0)).

use crate::blocks::{local_block_variances, BlockScheme};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Partition of an n-point series into short subsampling blocks of length
/// `floor(n^q)`, plus the neighbor radius `c0` (in block lengths) used for
/// local centering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsamplingScheme {
    n: usize,
    sub_len: usize,
    sub_count: usize,
    c0: f64,
}

impl SubsamplingScheme {
    /// Subsampling block length `floor(n^q)` with `q` in (0, 1), and
    /// neighbor radius `c0` with `1 <= c0 < b` where `b` is the number of
    /// complete blocks. Fails if fewer than two blocks fit.
    pub fn new(n: usize, q: f64, c0: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Config(format!(
                "subsampling exponent must lie strictly in (0, 1), got {q}"
            )));
        }
        if n == 0 {
            return Err(Error::Input("empty series".into()));
        }
        let sub_len = (n as f64).powf(q).floor() as usize;
        let sub_count = n / sub_len;
        if sub_count < 2 {
            return Err(Error::Input(format!(
                "series of length {n} with exponent {q} yields subsampling \
                 block length {sub_len}: fewer than two complete blocks"
            )));
        }
        if !(c0 >= 1.0 && c0 < sub_count as f64) {
            return Err(Error::Config(format!(
                "neighbor radius c0 must satisfy 1 <= c0 < {sub_count} \
                 (the subsampling block count), got {c0}"
            )));
        }
        Ok(Self {
            n,
            sub_len,
            sub_count,
            c0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Observations per subsampling block.
    pub fn sub_len(&self) -> usize {
        self.sub_len
    }

    /// Number of complete subsampling blocks.
    pub fn sub_count(&self) -> usize {
        self.sub_count
    }

    /// Neighbor radius in block lengths (possibly fractional).
    pub fn c0(&self) -> f64 {
        self.c0
    }
}

/// Long-run standard deviation of the raw series, estimated from locally
/// centered subsampling block sums. Non-negative; exactly 0 for a constant
/// series. Panics if the scheme was built for a different series length.
///
/// Each block of length `l` contributes |block sum - l * (neighbor mean)|,
/// where the neighbor window holds the `c0 * l` observations adjacent to the
/// block on each side. A fractional `c0 * l` gives the outermost observation
/// proportional weight; observations outside 1..=n contribute neither value
/// nor weight, so the neighbor mean is always over what actually exists.
pub fn kappa_tilde_x(x: &TimeSeries, sub: &SubsamplingScheme) -> f64 {
    assert_eq!(x.len(), sub.n(), "subsampling scheme does not match series");
    let v = x.values();
    let l = sub.sub_len();
    let window = sub.c0() * l as f64;
    let full = window.floor() as usize;
    let frac = window - window.floor();

    let mut total_abs = 0.0;
    for j in 0..sub.sub_count() {
        let start = j * l;
        let end = start + l;
        let block_sum: f64 = v[start..end].iter().sum();

        // Weighted sum and weight of the available neighbor observations.
        let mut nsum = 0.0;
        let mut weight = 0.0;
        let mut add = |idx_left: Option<usize>, idx_right: usize, w: f64| {
            if let Some(i) = idx_left {
                nsum += w * v[i];
                weight += w;
            }
            if idx_right < v.len() {
                nsum += w * v[idx_right];
                weight += w;
            }
        };
        for k in 1..=full {
            add(start.checked_sub(k), end + k - 1, 1.0);
        }
        if frac > 0.0 {
            add(start.checked_sub(full + 1), end + full, frac);
        }

        let s_j = block_sum - l as f64 * (nsum / weight);
        total_abs += s_j.abs();
    }

    let c0 = sub.c0();
    (2.0 * c0 / (1.0 + 2.0 * c0)).sqrt()
        * (std::f64::consts::PI / 2.0).sqrt()
        * total_abs
        / (sub.sub_count() as f64 * (l as f64).sqrt())
}

/// Long-run standard deviation of the underlying noise: `kappa_tilde_x`
/// divided by the average local standard deviation (square roots of the
/// main-scheme block variances). Fails as degenerate when every block is
/// constant.
pub fn kappa_hat(x: &TimeSeries, sub: &SubsamplingScheme, sch: &BlockScheme) -> Result<f64> {
    let numer = kappa_tilde_x(x, sub);
    let vars = local_block_variances(x, sch);
    let mean_sd = vars.iter().map(|&w| w.sqrt()).sum::<f64>() / vars.len() as f64;
    if mean_sd == 0.0 {
        return Err(Error::Degenerate(
            "every block has zero variance; cannot normalize the long-run \
             standard deviation"
                .into(),
        ));
    }
    Ok(numer / mean_sd)
}
