//! Command dispatch: each subcommand builds one JSON document.
//!
//! Documents share an envelope (version, command, seed, resolved config,
//! result) and are rendered fully in memory before anything is written.

use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use trendtest_core::blocks::{local_block_means, local_block_variances};
use trendtest_core::lrv::{kappa_hat, kappa_tilde_x};
use trendtest_core::{
    fit_polynomial_trend, piecewise_mean, seasonal_difference, segment_recursively,
    test_mean_constancy, BlockScheme, Error, Result, SubsamplingScheme, TestConfig, TimeSeries,
};
use trendtest_sim::{lrv_accuracy_table, rejection_rate_table, SimulationPlan, TableMode};

use crate::args::{
    Cli, Command, InputArgs, LrvArgs, PreprocessArgs, SegmentArgs, SimulateArgs, StatArgs,
    TestArgs,
};
use crate::input::read_series_csv;
use crate::output::render;

/// A fully rendered document plus its destination.
pub struct Rendered {
    pub doc: String,
    pub output: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<Rendered> {
    match cli.command {
        Command::Test(args) => run_test(args),
        Command::Segment(args) => run_segment(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Lrv(args) => run_lrv(args),
    }
}

/// Resolves the statistic flags, rejecting illegal values before any data
/// is read.
fn build_config(stat: &StatArgs) -> Result<TestConfig> {
    let cfg = TestConfig {
        s: stat.s,
        q: stat.q,
        c0: stat.c0,
        alpha: stat.alpha,
        psi_mc_reps: stat.psi_reps,
        seed: stat.seed,
        variant: stat.variant.into(),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Applies the preprocessing flags in order (difference, then detrend) and
/// describes what was done for the config block.
fn preprocess(
    x: TimeSeries,
    pre: &PreprocessArgs,
    cfg: &TestConfig,
) -> Result<(TimeSeries, Value)> {
    let mut x = x;
    if let Some(lag) = pre.diff_lag {
        x = seasonal_difference(&x, lag)?;
    }
    let mut coefficients = Value::Null;
    if let Some(degree) = pre.detrend_degree {
        let fit = fit_polynomial_trend(&x, degree, cfg)?;
        let residuals: Vec<f64> = x
            .values()
            .iter()
            .zip(&fit.fitted)
            .map(|(xi, fi)| xi - fi)
            .collect();
        coefficients = json!(fit.coefficients);
        x = TimeSeries::new(residuals)?;
    }
    let described = json!({
        "diff_lag": pre.diff_lag,
        "detrend_degree": pre.detrend_degree,
        "trend_coefficients": coefficients,
    });
    Ok((x, described))
}

fn envelope(command: &str, seed: u64, config: Value, result: Value) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "config": config,
        "result": result,
    })
}

fn stat_config_json(stat: &StatArgs, input: &InputArgs, preprocessing: Value) -> Value {
    json!({
        "s": stat.s,
        "q": stat.q,
        "c0": stat.c0,
        "alpha": stat.alpha,
        "variant": stat.variant.label(),
        "psi_reps": stat.psi_reps,
        "seed": stat.seed,
        "input": input.input.display().to_string(),
        "column": input.column,
        "preprocessing": preprocessing,
    })
}

fn run_test(args: TestArgs) -> Result<Rendered> {
    let cfg = build_config(&args.stat)?;
    let raw = read_series_csv(&args.input.input, &args.input.column)?;
    let (x, pre_json) = preprocess(raw, &args.pre, &cfg)?;

    let outcome = test_mean_constancy(&x, &cfg)?;
    let scheme = BlockScheme::new(x.len(), cfg.s)?;
    let block_means = local_block_means(&x, &scheme);
    let block_sds: Vec<f64> = local_block_variances(&x, &scheme)
        .iter()
        .map(|v| v.sqrt())
        .collect();

    let mut result = serde_json::to_value(outcome).expect("outcome serializes");
    result["n"] = json!(x.len());
    result["block_means"] = json!(block_means);
    result["block_sds"] = json!(block_sds);

    let config = stat_config_json(&args.stat, &args.input, pre_json);
    Ok(Rendered {
        doc: render(&envelope("test", cfg.seed, config, result)),
        output: args.output,
    })
}

fn run_segment(args: SegmentArgs) -> Result<Rendered> {
    let cfg = build_config(&args.stat)?;
    let raw = read_series_csv(&args.input.input, &args.input.column)?;
    let (x, pre_json) = preprocess(raw, &args.pre, &cfg)?;

    let found = segment_recursively(&x, &cfg, args.min_segment, args.exclusion)?;
    let step = piecewise_mean(&x, &found.break_indices);

    let mut result = serde_json::to_value(&found).expect("change points serialize");
    result["n"] = json!(x.len());
    result["piecewise_mean"] = json!(step);

    let mut config = stat_config_json(&args.stat, &args.input, pre_json);
    config["min_segment"] = json!(args.min_segment);
    config["exclusion"] = json!(args.exclusion);
    Ok(Rendered {
        doc: render(&envelope("segment", cfg.seed, config, result)),
        output: args.output,
    })
}

fn run_simulate(args: SimulateArgs) -> Result<Rendered> {
    let cfg = build_config(&args.stat)?;
    let text = fs::read_to_string(&args.scenario).map_err(|e| {
        Error::Input(format!("cannot read {}: {e}", args.scenario.display()))
    })?;
    let plan = SimulationPlan::from_toml_str(&text)?;

    let rows = match plan.mode {
        TableMode::Rejection => serde_json::to_value(rejection_rate_table(
            &plan.scenarios,
            &cfg,
            plan.replications,
            args.stat.seed,
        )?),
        TableMode::Lrv => serde_json::to_value(lrv_accuracy_table(
            &plan.scenarios,
            &cfg,
            plan.replications,
            args.stat.seed,
        )?),
    }
    .expect("table rows serialize");

    let result = json!({
        "mode": serde_json::to_value(plan.mode).expect("mode serializes"),
        "replications": plan.replications,
        "rows": rows,
    });
    let mut config = json!({
        "s": args.stat.s,
        "q": args.stat.q,
        "c0": args.stat.c0,
        "alpha": args.stat.alpha,
        "variant": args.stat.variant.label(),
        "psi_reps": args.stat.psi_reps,
        "seed": args.stat.seed,
    });
    config["scenario"] = json!(args.scenario.display().to_string());
    Ok(Rendered {
        doc: render(&envelope("simulate", args.stat.seed, config, result)),
        output: args.output,
    })
}

fn run_lrv(args: LrvArgs) -> Result<Rendered> {
    // The long-run scale estimate is deterministic; the config carries the
    // statistic defaults so the embedded detrend fit is reproducible.
    let cfg = TestConfig {
        s: args.s,
        q: args.q,
        c0: args.c0,
        ..TestConfig::default()
    };
    cfg.validate()?;
    let raw = read_series_csv(&args.input.input, &args.input.column)?;
    let (x, pre_json) = preprocess(raw, &args.pre, &cfg)?;

    let sub = SubsamplingScheme::new(x.len(), cfg.q, cfg.c0)?;
    let scheme = BlockScheme::new(x.len(), cfg.s)?;
    let result = json!({
        "n": x.len(),
        "kappa_tilde_x": kappa_tilde_x(&x, &sub),
        "kappa_hat": kappa_hat(&x, &sub, &scheme)?,
        "sub_len": sub.sub_len(),
        "sub_count": sub.sub_count(),
        "block_len": scheme.block_len(),
        "block_count": scheme.block_count(),
    });
    let config = json!({
        "s": args.s,
        "q": args.q,
        "c0": args.c0,
        "input": args.input.input.display().to_string(),
        "column": args.input.column,
        "preprocessing": pre_json,
    });
    Ok(Rendered {
        doc: render(&envelope("lrv", 0, config, result)),
        output: args.output,
    })
}
