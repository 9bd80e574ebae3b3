//! Scenario descriptions and the observed-series composition x = mean + sd * noise.
//!
//! A scenario bundles a noise recursion with a mean curve, a
//! standard-deviation curve, their magnitudes, and a length. Scenario lists
//! are read from a small TOML document so batch runs are reproducible from a
//! checked-in file plus one master seed.

use serde::{Deserialize, Serialize};
use trendtest_core::{Error, Result, TimeSeries};

use crate::dgp::{generate_noise, DgpKind, DgpSpec};
use crate::profiles::{
    fixed_magnitude, mean_profile, sd_profile, MeanKind, MeanMagnitude, SdKind,
};

/// One fully specified data-generating setup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    /// Optional human-readable label used in table rows.
    pub name: Option<String>,
    pub dgp: DgpSpec,
    pub mean: MeanKind,
    pub sd: SdKind,
    pub mean_magnitude: MeanMagnitude,
    /// Total spread of the standard-deviation curve; must lie in [0, 2).
    pub sd_magnitude: f64,
    pub n: usize,
}

impl ScenarioSpec {
    /// A convenience constructor with the common defaults: flat mean,
    /// constant unit standard deviation, sample-size dependent mean
    /// magnitude, and the reference spread for the sd curve.
    pub fn new(dgp: DgpKind, n: usize) -> Self {
        ScenarioSpec {
            name: None,
            dgp: DgpSpec::new(dgp),
            mean: MeanKind::Flat,
            sd: SdKind::Constant,
            mean_magnitude: MeanMagnitude::Local,
            sd_magnitude: fixed_magnitude(),
            n,
        }
    }

    pub fn with_mean(mut self, mean: MeanKind, magnitude: MeanMagnitude) -> Self {
        self.mean = mean;
        self.mean_magnitude = magnitude;
        self
    }

    pub fn with_sd(mut self, sd: SdKind, magnitude: f64) -> Self {
        self.sd = sd;
        self.sd_magnitude = magnitude;
        self
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// The row label: the explicit name if set, otherwise a compact
    /// description of the pieces.
    pub fn label(&self) -> String {
        match &self.name {
            Some(name) => name.clone(),
            None => format!(
                "{} mean={} sd={} n={}",
                self.dgp.kind.label(),
                self.mean.label(),
                self.sd.label(),
                self.n
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dgp.validate()?;
        if self.n == 0 {
            return Err(Error::Input(
                "scenario length must be positive".to_string(),
            ));
        }
        let theta = self.mean_magnitude.resolve(self.n);
        if !theta.is_finite() {
            return Err(Error::Config(format!(
                "resolved mean magnitude must be finite, got {theta}"
            )));
        }
        if !self.sd_magnitude.is_finite() || self.sd_magnitude < 0.0 || self.sd_magnitude >= 2.0 {
            return Err(Error::Config(format!(
                "standard-deviation magnitude must lie in [0, 2), got {}",
                self.sd_magnitude
            )));
        }
        Ok(())
    }
}

/// Elementwise mean[i] + sd[i] * noise[i]. Exposed separately so tests can
/// inject hand-built noise (for example all zeros to inspect the
/// deterministic part).
pub fn compose(mean: &[f64], sd: &[f64], noise: &[f64]) -> Result<TimeSeries> {
    if mean.len() != sd.len() || mean.len() != noise.len() {
        return Err(Error::Input(format!(
            "profile and noise lengths differ: mean {}, sd {}, noise {}",
            mean.len(),
            sd.len(),
            noise.len()
        )));
    }
    let values = mean
        .iter()
        .zip(sd)
        .zip(noise)
        .map(|((m, s), y)| m + s * y)
        .collect();
    TimeSeries::new(values)
}

/// Draws the scenario's noise with the given seed and composes the observed
/// series. Deterministic in (scenario, seed).
pub fn synthesize(scn: &ScenarioSpec, seed: u64) -> Result<TimeSeries> {
    scn.validate()?;
    let theta = scn.mean_magnitude.resolve(scn.n);
    let means = mean_profile(scn.mean, theta, scn.n)?;
    let sds = sd_profile(scn.sd, scn.sd_magnitude, scn.n)?;
    let noise = generate_noise(&scn.dgp, scn.n, seed)?;
    compose(&means, &sds, noise.values())
}

/// Which table a batch run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMode {
    /// Fraction of replications on which the constancy test rejects.
    Rejection,
    /// Bias and root mean squared error of the long-run scale estimator.
    Lrv,
}

/// A parsed scenario file: the table to compute, the replication count, and
/// the scenario list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationPlan {
    pub mode: TableMode,
    pub replications: usize,
    pub scenarios: Vec<ScenarioSpec>,
}

/// On-disk shape of a plan. Kept separate from [`ScenarioSpec`] so optional
/// keys get their documented defaults.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanDoc {
    mode: TableMode,
    replications: usize,
    scenarios: Vec<ScenarioRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioRow {
    name: Option<String>,
    dgp: DgpKind,
    /// Warm-up override; defaults to the kind's standard warm-up.
    burn_in: Option<usize>,
    #[serde(default = "default_mean")]
    mean: MeanKind,
    #[serde(default = "default_sd")]
    sd: SdKind,
    #[serde(default = "default_mean_magnitude")]
    mean_magnitude: MeanMagnitude,
    #[serde(default = "fixed_magnitude")]
    sd_magnitude: f64,
    n: usize,
}

fn default_mean() -> MeanKind {
    MeanKind::Flat
}

fn default_sd() -> SdKind {
    SdKind::Constant
}

fn default_mean_magnitude() -> MeanMagnitude {
    MeanMagnitude::Local
}

impl ScenarioRow {
    fn into_spec(self) -> ScenarioSpec {
        let dgp = match self.burn_in {
            Some(b) => DgpSpec::with_burn_in(self.dgp, b),
            None => DgpSpec::new(self.dgp),
        };
        ScenarioSpec {
            name: self.name,
            dgp,
            mean: self.mean,
            sd: self.sd,
            mean_magnitude: self.mean_magnitude,
            sd_magnitude: self.sd_magnitude,
            n: self.n,
        }
    }
}

impl SimulationPlan {
    /// Parses and validates a scenario file.
    ///
    /// The expected shape is:
    ///
    /// ```toml
    /// mode = "rejection"          # or "lrv"
    /// replications = 4000
    ///
    /// [[scenarios]]
    /// name = "baseline"           # optional row label
    /// dgp = { kind = "iid_normal" }
    /// mean = "flat"               # flat | ramp | sine | step_half | mid_bump | double_bump
    /// sd = "constant"             # constant | ramp | sine | step_half
    /// mean_magnitude = "local"    # "local", "fixed", or a number
    /// sd_magnitude = 0.42         # optional, defaults to 0.3 * sqrt(2)
    /// n = 500
    /// ```
    ///
    /// Dgp kinds: `iid_normal`, `iid_exp`, `ar1` (requires `phi`), `arma22`,
    /// `garch11`, `nonlinear_ar1`; the last three default to their standard
    /// parameter sets. An optional `burn_in` key overrides the warm-up.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: PlanDoc = toml::from_str(text)
            .map_err(|e| Error::Input(format!("scenario file does not parse: {e}")))?;
        if doc.replications == 0 {
            return Err(Error::Config(
                "scenario file must request at least one replication".to_string(),
            ));
        }
        if doc.scenarios.is_empty() {
            return Err(Error::Input(
                "scenario file lists no scenarios".to_string(),
            ));
        }
        let plan = SimulationPlan {
            mode: doc.mode,
            replications: doc.replications,
            scenarios: doc.scenarios.into_iter().map(|r| r.into_spec()).collect(),
        };
        for scn in &plan.scenarios {
            scn.validate()?;
        }
        Ok(plan)
    }
}
