//! Mean and standard-deviation curves evaluated on the grid i/n, i = 1..n.
//!
//! Mean curves come with a magnitude theta that either shrinks with the
//! sample size (so detection stays equally hard as n grows), stays at the
//! fixed reference value, or is given outright. Standard-deviation curves
//! integrate to one over [0, 1], so switching them on changes the shape of
//! the noise level but not its average size.

use serde::{Deserialize, Serialize};
use trendtest_core::{Error, Result};

/// Shape of the mean curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    /// Identically zero; the null case.
    Flat,
    /// Linear increase theta * x.
    Ramp,
    /// Two full sine periods, (theta / 2) * sin(4 pi x).
    Sine,
    /// One jump of height theta at x = 1/2 (the right half is raised).
    StepHalf,
    /// theta on the middle third [1/3, 2/3).
    MidBump,
    /// theta on [0.2, 0.4) and on [0.6, 0.8); four jumps in total.
    DoubleBump,
}

impl MeanKind {
    pub fn label(&self) -> &'static str {
        match self {
            MeanKind::Flat => "flat",
            MeanKind::Ramp => "ramp",
            MeanKind::Sine => "sine",
            MeanKind::StepHalf => "step_half",
            MeanKind::MidBump => "mid_bump",
            MeanKind::DoubleBump => "double_bump",
        }
    }
}

/// Shape of the standard-deviation curve; every shape integrates to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdKind {
    /// Identically one, whatever the magnitude.
    Constant,
    /// Linear increase from 1 - theta/2 to 1 + theta/2.
    Ramp,
    /// 1 + (theta / 2) * sin(4 pi x).
    Sine,
    /// 1 - theta/2 on [0, 1/2), 1 + theta/2 on [1/2, 1].
    StepHalf,
}

impl SdKind {
    pub fn label(&self) -> &'static str {
        match self {
            SdKind::Constant => "constant",
            SdKind::Ramp => "ramp",
            SdKind::Sine => "sine",
            SdKind::StepHalf => "step_half",
        }
    }
}

/// How the mean magnitude theta is chosen for a scenario of length n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MagnitudeRepr", into = "MagnitudeRepr")]
pub enum MeanMagnitude {
    /// [`local_magnitude`]: shrinks like 1/sqrt(n), anchored at 0.3 for
    /// n = 1000.
    Local,
    /// [`fixed_magnitude`]: the n = 500 local value, held fixed.
    Fixed,
    /// An explicit magnitude.
    Value(f64),
}

impl MeanMagnitude {
    /// The concrete theta for a series of length n.
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            MeanMagnitude::Local => local_magnitude(n),
            MeanMagnitude::Fixed => fixed_magnitude(),
            MeanMagnitude::Value(v) => v,
        }
    }
}

/// Serialized form of [`MeanMagnitude`]: the strings "local" / "fixed" or a
/// bare number.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MagnitudeRepr {
    Name(String),
    Number(f64),
}

impl TryFrom<MagnitudeRepr> for MeanMagnitude {
    type Error = String;

    fn try_from(repr: MagnitudeRepr) -> std::result::Result<Self, String> {
        match repr {
            MagnitudeRepr::Name(s) if s == "local" => Ok(MeanMagnitude::Local),
            MagnitudeRepr::Name(s) if s == "fixed" => Ok(MeanMagnitude::Fixed),
            MagnitudeRepr::Name(s) => Err(format!(
                "mean magnitude must be \"local\", \"fixed\", or a number, got \"{s}\""
            )),
            MagnitudeRepr::Number(v) => Ok(MeanMagnitude::Value(v)),
        }
    }
}

impl From<MeanMagnitude> for MagnitudeRepr {
    fn from(m: MeanMagnitude) -> Self {
        match m {
            MeanMagnitude::Local => MagnitudeRepr::Name("local".to_string()),
            MeanMagnitude::Fixed => MagnitudeRepr::Name("fixed".to_string()),
            MeanMagnitude::Value(v) => MagnitudeRepr::Number(v),
        }
    }
}

/// Sample-size dependent magnitude 0.3 * sqrt(1000 / n); exactly 0.3 at
/// n = 1000. Mean changes of this size keep the same detection difficulty
/// across sample sizes.
pub fn local_magnitude(n: usize) -> f64 {
    0.3 * (1000.0 / n as f64).sqrt()
}

/// The local magnitude at n = 500, 0.3 * sqrt(2), used when the mean change
/// should not shrink as n grows.
pub fn fixed_magnitude() -> f64 {
    0.3 * std::f64::consts::SQRT_2
}

/// Evaluates the mean curve at x = i/n for i = 1..n.
pub fn mean_profile(kind: MeanKind, theta: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Input("profile length must be positive".to_string()));
    }
    if !theta.is_finite() {
        return Err(Error::Config(format!(
            "mean magnitude must be finite, got {theta}"
        )));
    }
    let curve = |x: f64| -> f64 {
        match kind {
            MeanKind::Flat => 0.0,
            MeanKind::Ramp => theta * x,
            MeanKind::Sine => 0.5 * theta * (4.0 * std::f64::consts::PI * x).sin(),
            MeanKind::StepHalf => {
                if x >= 0.5 {
                    theta
                } else {
                    0.0
                }
            }
            MeanKind::MidBump => {
                if (1.0 / 3.0..2.0 / 3.0).contains(&x) {
                    theta
                } else {
                    0.0
                }
            }
            MeanKind::DoubleBump => {
                if (0.2..0.4).contains(&x) || (0.6..0.8).contains(&x) {
                    theta
                } else {
                    0.0
                }
            }
        }
    };
    Ok(grid(n).map(curve).collect())
}

/// Evaluates the standard-deviation curve at x = i/n for i = 1..n. The
/// magnitude is the total spread of the curve and must stay below 2 so the
/// values remain positive.
pub fn sd_profile(kind: SdKind, theta: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Input("profile length must be positive".to_string()));
    }
    if !theta.is_finite() || !(0.0..2.0).contains(&theta) {
        return Err(Error::Config(format!(
            "standard-deviation magnitude must lie in [0, 2), got {theta}"
        )));
    }
    let half = 0.5 * theta;
    let curve = |x: f64| -> f64 {
        match kind {
            SdKind::Constant => 1.0,
            SdKind::Ramp => (1.0 - half) + theta * x,
            SdKind::Sine => 1.0 + half * (4.0 * std::f64::consts::PI * x).sin(),
            SdKind::StepHalf => {
                if x >= 0.5 {
                    1.0 + half
                } else {
                    1.0 - half
                }
            }
        }
    };
    Ok(grid(n).map(curve).collect())
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (1..=n).map(move |i| i as f64 / n as f64)
}
