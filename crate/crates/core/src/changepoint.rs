//! Change-point localization via recursive splitting.
//!
//! When the constancy test rejects on a segment, the dominant change is
//! localized in two steps: the pair of adjacent blocks with the largest
//! block-mean gap is found first, then the split point inside those two
//! blocks that maximizes the left/right sample-mean gap. The segment is cut
//! there and both halves are re-tested, recursing until every segment is
//! accepted or too short to test.

use crate::blocks::{local_block_means, BlockScheme};
use crate::error::{Error, Result};
use crate::mean_test::{test_mean_constancy, TestConfig, TestOutcome};
use crate::seed::derive_seed;
use crate::series::TimeSeries;

/// One accepted split during the recursion: the tested segment (1-based
/// inclusive global bounds), the chosen break, and the test outcome that
/// justified it (always a rejection).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SplitRecord {
    pub start: usize,
    pub end: usize,
    pub break_index: usize,
    pub outcome: TestOutcome,
}

/// Result of the recursive segmentation.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ChangePointSet {
    /// Strictly increasing 1-based indices; a break at t means the mean is
    /// taken constant on ..=t and from t+1 onward.
    pub break_indices: Vec<usize>,
    /// Sample mean of each segment between consecutive breaks
    /// (break count + 1 entries).
    pub segment_means: Vec<f64>,
    /// Every split that was made, in depth-first order.
    pub splits: Vec<SplitRecord>,
}

/// Finds the split index t* (1-based, the last index of the left part) with
/// the largest sample-mean gap, searching the two adjacent blocks whose
/// block means differ most. Candidates within `ceil(exclusion_fraction *
/// 2l)` positions of either end of that window are excluded to keep both
/// candidate means stable. Ties resolve to the smallest index.
pub fn locate_dominant_change(
    x: &TimeSeries,
    sch: &BlockScheme,
    exclusion_fraction: f64,
) -> Result<usize> {
    if !(0.0..0.5).contains(&exclusion_fraction) {
        return Err(Error::Config(format!(
            "exclusion fraction must lie in [0, 0.5), got {exclusion_fraction}"
        )));
    }
    let means = local_block_means(x, sch);
    let l = sch.block_len();

    // First adjacent pair with the largest block-mean gap (1-based j*).
    let mut j_star = 1;
    let mut best_gap = f64::NEG_INFINITY;
    for j in 1..means.len() {
        let gap = (means[j - 1] - means[j]).abs();
        if gap > best_gap {
            best_gap = gap;
            j_star = j;
        }
    }

    // Candidate window: all of blocks j* and j*+1, minus the margin. A split
    // at t keeps t inside the window, so t ranges over [lo, hi-1] before the
    // margin is removed.
    let lo = (j_star - 1) * l + 1;
    let hi = (j_star + 1) * l;
    let margin = (exclusion_fraction * (2 * l) as f64).ceil() as usize;
    let (from, to) = (lo + margin, hi - 1 - margin);
    if from > to {
        return Err(Error::Input(format!(
            "no candidate split points remain in a window of {} after \
             excluding {margin} from each side",
            2 * l - 1
        )));
    }

    let v = x.values();
    let window_start = lo; // left part of every candidate starts here
    let mut best_t = from;
    let mut best = f64::NEG_INFINITY;
    // Running sums keep the scan linear in the window length.
    let mut left_sum: f64 = v[window_start - 1..from - 1].iter().sum();
    let total: f64 = v[window_start - 1..hi].iter().sum();
    for t in from..=to {
        left_sum += v[t - 1];
        let left_n = (t - window_start + 1) as f64;
        let right_n = (hi - t) as f64;
        let gap = (left_sum / left_n - (total - left_sum) / right_n).abs();
        if gap > best {
            best = gap;
            best_t = t;
        }
    }
    Ok(best_t)
}

/// Piecewise-constant fit: each segment between consecutive breaks is
/// replaced by its sample mean. Breaks must be strictly increasing 1-based
/// indices in [1, n-1] (a break at t ends a segment at t); panics otherwise.
pub fn piecewise_mean(x: &TimeSeries, breaks: &[usize]) -> Vec<f64> {
    let n = x.len();
    let v = x.values();
    let mut out = Vec::with_capacity(n);
    let mut start = 1usize;
    let mut ends: Vec<usize> = breaks.to_vec();
    ends.push(n);
    for (k, &end) in ends.iter().enumerate() {
        assert!(
            start <= end && end <= n && (k + 1 == ends.len() || end < n),
            "break indices must be strictly increasing and lie in [1, n-1]"
        );
        let seg = &v[start - 1..end];
        let mean = seg.iter().sum::<f64>() / seg.len() as f64;
        out.extend(std::iter::repeat_n(mean, end - start + 1));
        start = end + 1;
    }
    out
}

/// Recursively splits the series at localized change points until the
/// constancy test no longer rejects. Segments shorter than `min_segment`
/// are accepted untested, and a split is only made when both parts would
/// reach `min_segment`. A degenerate segment (for example constant) is
/// accepted as having no change. Each recursion node derives its own Monte
/// Carlo seed from `cfg.seed` and the segment bounds, so results are
/// reproducible and independent of traversal order.
pub fn segment_recursively(
    x: &TimeSeries,
    cfg: &TestConfig,
    min_segment: usize,
    exclusion_fraction: f64,
) -> Result<ChangePointSet> {
    cfg.validate()?;
    if min_segment < 4 {
        return Err(Error::Config(format!(
            "minimum segment length must be at least 4, got {min_segment}"
        )));
    }
    if !(0.0..0.5).contains(&exclusion_fraction) {
        return Err(Error::Config(format!(
            "exclusion fraction must lie in [0, 0.5), got {exclusion_fraction}"
        )));
    }

    let mut breaks = Vec::new();
    let mut splits = Vec::new();
    descend(
        x,
        cfg,
        min_segment,
        exclusion_fraction,
        1,
        x.len(),
        &mut breaks,
        &mut splits,
    )?;
    breaks.sort_unstable();

    Ok(ChangePointSet {
        segment_means: segment_means(x, &breaks),
        break_indices: breaks,
        splits,
    })
}

#[allow(clippy::too_many_arguments)]
fn descend(
    x: &TimeSeries,
    cfg: &TestConfig,
    min_segment: usize,
    exclusion_fraction: f64,
    start: usize,
    end: usize,
    breaks: &mut Vec<usize>,
    splits: &mut Vec<SplitRecord>,
) -> Result<()> {
    let len = end - start + 1;
    if len < min_segment {
        return Ok(());
    }
    let segment = x.slice(start, end)?;
    let node_cfg = TestConfig {
        seed: derive_seed(cfg.seed, start as u64, end as u64),
        ..*cfg
    };
    let outcome: TestOutcome = match test_mean_constancy(&segment, &node_cfg) {
        Ok(out) => out,
        // No usable noise in this segment means no evidence of change.
        Err(Error::Degenerate(_)) => return Ok(()),
        Err(e) => return Err(e),
    };
    if !outcome.reject {
        return Ok(());
    }

    let sch = BlockScheme::new(len, node_cfg.s)?;
    let local_t = locate_dominant_change(&segment, &sch, exclusion_fraction)?;
    let t = start - 1 + local_t;
    if t - start + 1 < min_segment || end - t < min_segment {
        return Ok(());
    }

    breaks.push(t);
    splits.push(SplitRecord {
        start,
        end,
        break_index: t,
        outcome,
    });
    descend(
        x,
        cfg,
        min_segment,
        exclusion_fraction,
        start,
        t,
        breaks,
        splits,
    )?;
    descend(
        x,
        cfg,
        min_segment,
        exclusion_fraction,
        t + 1,
        end,
        breaks,
        splits,
    )
}

fn segment_means(x: &TimeSeries, breaks: &[usize]) -> Vec<f64> {
    let v = x.values();
    let mut out = Vec::with_capacity(breaks.len() + 1);
    let mut start = 1usize;
    for &end in breaks.iter().chain(std::iter::once(&x.len())) {
        let seg = &v[start - 1..end];
        out.push(seg.iter().sum::<f64>() / seg.len() as f64);
        start = end + 1;
    }
    out
}
