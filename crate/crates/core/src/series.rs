//! Time-series container enforcing the basic data contract.

use crate::error::{Error, Result};

/// An observed series x_1, ..., x_n in time order.
///
/// Invariants: n >= 1 and every value is finite.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    /// Validates and wraps raw observations.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("series is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite value at position {}",
                i + 1
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sub-series over the 1-based inclusive positions [start, end].
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start < 1 || start > end || end > self.values.len() {
            return Err(Error::Input(format!(
                "invalid slice [{start}, {end}] of a series of length {}",
                self.values.len()
            )));
        }
        Ok(Self {
            values: self.values[start - 1..end].to_vec(),
        })
    }

    /// Sample mean of the whole series.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}
