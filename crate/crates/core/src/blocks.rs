//! Blocking of the series and blockwise summary statistics.
//!
//! The series is cut into `b` consecutive blocks of equal length `l`, with
//! `l = floor(n^s)` and `b = floor(n / l)`; any trailing observations that do
//! not fill a block are discarded. The dispersion of the block means is
//! measured by their Gini mean difference, the average absolute pairwise
//! gap, which is the raw material of the constancy test.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Partition of an n-point series into equal-length consecutive blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockScheme {
    n: usize,
    block_len: usize,
    block_count: usize,
}

impl BlockScheme {
    /// Block length `l = floor(n^s)` and count `b = floor(n / l)` for a
    /// series of length `n`. Requires `n >= 4` and `s` strictly between
    /// 0.5 and 1; fails if fewer than two blocks fit.
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if !(s > 0.5 && s < 1.0) {
            return Err(Error::Config(format!(
                "block exponent must lie strictly in (0.5, 1), got {s}"
            )));
        }
        if n < 4 {
            return Err(Error::Input(format!(
                "series too short to block: need at least 4 observations, got {n}"
            )));
        }
        let block_len = (n as f64).powf(s).floor() as usize;
        let block_count = n / block_len;
        if block_count < 2 {
            return Err(Error::Input(format!(
                "series of length {n} with exponent {s} yields block length \
                 {block_len}: fewer than two complete blocks"
            )));
        }
        Ok(Self {
            n,
            block_len,
            block_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Observations per block, `l`.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Number of complete blocks, `b`.
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Trailing observations not covered by any block.
    pub fn tail_len(&self) -> usize {
        self.n - self.block_count * self.block_len
    }

    /// Half-open 0-based index range of block `j` (0-based).
    fn block_range(&self, j: usize) -> std::ops::Range<usize> {
        let start = j * self.block_len;
        start..start + self.block_len
    }
}

/// Mean of each block, in order. Panics if the scheme was built for a
/// different series length.
pub fn local_block_means(x: &TimeSeries, scheme: &BlockScheme) -> Vec<f64> {
    assert_eq!(x.len(), scheme.n(), "block scheme does not match series");
    let v = x.values();
    (0..scheme.block_count())
        .map(|j| {
            let block = &v[scheme.block_range(j)];
            block.iter().sum::<f64>() / scheme.block_len() as f64
        })
        .collect()
}

/// Centered second moment of each block, normalized by the block length
/// (not by length minus one). Panics on scheme/series length mismatch.
pub fn local_block_variances(x: &TimeSeries, scheme: &BlockScheme) -> Vec<f64> {
    assert_eq!(x.len(), scheme.n(), "block scheme does not match series");
    let v = x.values();
    let means = local_block_means(x, scheme);
    (0..scheme.block_count())
        .map(|j| {
            let block = &v[scheme.block_range(j)];
            let m = means[j];
            block.iter().map(|&xi| (xi - m) * (xi - m)).sum::<f64>() / scheme.block_len() as f64
        })
        .collect()
}

/// Gini mean difference of `v`: the average of |v_j - v_k| over all ordered
/// pairs j != k. Computed through the sorted identity
/// sum_{j<k} (v_(k) - v_(j)) = sum_i (2i - 1 - m) v_(i) (1-based ranks),
/// which is exact and O(m log m).
pub fn gini_mean_difference(v: &[f64]) -> Result<f64> {
    let m = v.len();
    if m < 2 {
        return Err(Error::Input(format!(
            "Gini mean difference needs at least 2 values, got {m}"
        )));
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in gini input"));
    let mf = m as f64;
    let sum: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &vi)| ((2 * (i + 1)) as f64 - 1.0 - mf) * vi)
        .sum();
    Ok(2.0 * sum / (mf * (mf - 1.0)))
}

/// Gini mean difference of the block means.
pub fn u_statistic(x: &TimeSeries, scheme: &BlockScheme) -> Result<f64> {
    gini_mean_difference(&local_block_means(x, scheme))
}

#[cfg(test)]
pub(crate) fn gini_naive(v: &[f64]) -> f64 {
    // O(m^2) double sum over ordered pairs, kept only as a test oracle.
    let m = v.len() as f64;
    let mut total = 0.0;
    for (j, &a) in v.iter().enumerate() {
        for (k, &b) in v.iter().enumerate() {
            if j != k {
                total += (a - b).abs();
            }
        }
    }
    total / (m * (m - 1.0))
}
