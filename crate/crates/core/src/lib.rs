//! Blockwise test for constancy of the mean of a dependent, possibly
//! heteroscedastic time series.
//!
//! The observed series is modelled as a smooth (or piecewise constant) mean
//! plus a short-range dependent noise term whose variance may itself drift
//! over time. The test splits the sample into non-overlapping blocks,
//! compares block means through their Gini mean difference, and standardizes
//! with nuisance estimates that are consistent under both the null and the
//! alternative. On top of the plain test the crate offers recursive
//! change-point localization and polynomial-trend / seasonal-difference
//! preprocessing.

pub mod blocks;
pub mod changepoint;
pub mod error;
pub mod gauss;
pub mod lrv;
pub mod psi;
pub mod seed;
pub mod series;
pub mod trend;

pub use blocks::BlockScheme;
pub use changepoint::{
    locate_dominant_change, piecewise_mean, segment_recursively, ChangePointSet, SplitRecord,
};
pub use error::{Error, Result};
pub use lrv::SubsamplingScheme;
pub use mean_test::{test_mean_constancy, TestConfig, TestOutcome, Variant};
pub use series::TimeSeries;
pub use trend::{fit_polynomial_trend, seasonal_difference, TrendFit};
