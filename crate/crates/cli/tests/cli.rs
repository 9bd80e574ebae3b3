//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn trendtest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trendtest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Deterministic mean-constant wiggle: two incommensurate frequencies so
/// block means stay near zero while block variances stay positive.
fn wiggle(i: usize) -> f64 {
    0.4 * (2.7 * i as f64).sin() + 0.3 * (7.3 * i as f64).sin()
}

fn write_series(dir: &Path, name: &str, header: Option<&str>, values: &[f64]) -> String {
    let mut text = String::new();
    if let Some(h) = header {
        text.push_str(h);
        text.push('\n');
    }
    for v in values {
        text.push_str(&format!("{v:.10}\n"));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn test_command_emits_a_deterministic_document() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..300).map(wiggle).collect();
    let input = write_series(dir.path(), "series.csv", Some("value"), &values);
    let args = [
        "test", "--input", &input, "--column", "value", "--psi-reps", "400",
    ];

    let one = trendtest(&args);
    let two = trendtest(&args);
    assert_eq!(one.stdout, two.stdout, "reruns must be byte-identical");

    let doc = stdout_json(&one);
    assert_eq!(doc["command"], "test");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["seed"], 0);
    let config = &doc["config"];
    assert_eq!(config["s"].as_f64().unwrap(), 0.7);
    assert_eq!(config["q"].as_f64().unwrap(), 0.4);
    assert_eq!(config["c0"].as_f64().unwrap(), 10.0);
    assert_eq!(config["alpha"].as_f64().unwrap(), 0.05);
    assert_eq!(config["variant"], "full");
    assert_eq!(config["psi_reps"], 400);

    let result = &doc["result"];
    for field in [
        "statistic",
        "p_value",
        "u_value",
        "kappa_hat",
        "centring",
        "psi_hat_sq",
    ] {
        assert!(result[field].is_f64(), "missing float field {field}");
    }
    assert!(result["reject"].is_boolean());
    assert_eq!(result["n"], 300);
    let b = result["block_count"].as_u64().unwrap() as usize;
    assert_eq!(result["block_means"].as_array().unwrap().len(), b);
    assert_eq!(result["block_sds"].as_array().unwrap().len(), b);
    // A mean-constant series is accepted.
    assert_eq!(result["reject"], false);
}

#[test]
fn printed_floats_reparse_to_the_printed_value() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..200).map(wiggle).collect();
    let input = write_series(dir.path(), "series.csv", None, &values);
    let out = trendtest(&["test", "--input", &input, "--psi-reps", "300"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    stdout_json(&out);

    let mut floats_checked = 0;
    for raw in text
        .split([' ', ',', '\n', '[', ']'])
        .filter(|t| {
            t.contains('e')
                && !t.contains('"')
                && t.starts_with(|c: char| c.is_ascii_digit() || c == '-')
        })
    {
        let parsed: f64 = raw.parse().expect(raw);
        assert_eq!(format!("{parsed:.16e}"), raw, "not a fixed point of parse+print");
        floats_checked += 1;
    }
    assert!(floats_checked > 10, "only {floats_checked} floats found");
}

#[test]
fn column_selection_by_name_and_index_agree() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("year,temp\n");
    for i in 0..150 {
        text.push_str(&format!("{},{:.10}\n", 1900 + i, wiggle(i)));
    }
    let path = dir.path().join("two_col.csv");
    fs::write(&path, text).unwrap();
    let input = path.display().to_string();

    let by_name = stdout_json(&trendtest(&[
        "test", "--input", &input, "--column", "temp", "--psi-reps", "300",
    ]));
    let by_index = stdout_json(&trendtest(&[
        "test", "--input", &input, "--column", "1", "--psi-reps", "300",
    ]));
    assert_eq!(by_name["result"], by_index["result"]);

    // The year column is a deterministic ramp: strongly rejected.
    let years = stdout_json(&trendtest(&[
        "test", "--input", &input, "--column", "0", "--psi-reps", "300",
    ]));
    assert_eq!(years["result"]["reject"], true);
}

#[test]
fn headerless_single_column_defaults_to_column_zero() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..120).map(wiggle).collect();
    let input = write_series(dir.path(), "plain.csv", None, &values);
    let doc = stdout_json(&trendtest(&["test", "--input", &input, "--psi-reps", "300"]));
    assert_eq!(doc["result"]["n"], 120);
}

#[test]
fn failures_exit_with_the_documented_codes() {
    let dir = TempDir::new().unwrap();

    let missing = trendtest(&["test", "--input", "/nonexistent/nowhere.csv"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr_text(&missing).contains("cannot open"));

    let short = write_series(dir.path(), "short.csv", None, &[1.0, 2.0, 3.0]);
    let short_run = trendtest(&["test", "--input", &short]);
    assert_eq!(short_run.status.code(), Some(2));
    assert!(stderr_text(&short_run).contains("at least 4"));

    let bad_path = dir.path().join("bad.csv");
    fs::write(&bad_path, "v\n1\n2\nabc\n4\n5\n6\n7\n8\n9\n10\n").unwrap();
    let bad = trendtest(&["test", "--input", &bad_path.display().to_string(), "--column", "v"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(
        stderr_text(&bad).contains("row 4"),
        "error must name the offending row: {}",
        stderr_text(&bad)
    );

    let two_col = dir.path().join("cols.csv");
    fs::write(&two_col, "a,b\n1,2\n3,4\n5,6\n7,8\n").unwrap();
    let no_col = trendtest(&["test", "--input", &two_col.display().to_string(), "--column", "zzz"]);
    assert_eq!(no_col.status.code(), Some(2));
    assert!(stderr_text(&no_col).contains("not found"));

    let ok = write_series(dir.path(), "ok.csv", None, &(0..100).map(wiggle).collect::<Vec<_>>());
    let bad_s = trendtest(&["test", "--input", &ok, "--s", "0.4"]);
    assert_eq!(bad_s.status.code(), Some(4));
    let bad_alpha = trendtest(&["test", "--input", &ok, "--alpha", "1.5"]);
    assert_eq!(bad_alpha.status.code(), Some(4));

    let constant = write_series(dir.path(), "const.csv", None, &vec![5.0; 200]);
    let degenerate = trendtest(&["test", "--input", &constant]);
    assert_eq!(degenerate.status.code(), Some(3));
    assert!(stderr_text(&degenerate).contains("degenerate"));

    let unknown_flag = trendtest(&["test", "--input", &ok, "--frobnicate"]);
    assert_eq!(unknown_flag.status.code(), Some(2));

    let help = trendtest(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn output_flag_writes_the_whole_document_or_nothing() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..200).map(wiggle).collect();
    let input = write_series(dir.path(), "series.csv", None, &values);
    let out_path = dir.path().join("result.json");

    let run = trendtest(&[
        "test", "--input", &input, "--psi-reps", "300",
        "--output", &out_path.display().to_string(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty(), "--output diverts stdout");
    let written = fs::read(&out_path).unwrap();
    let direct = trendtest(&["test", "--input", &input, "--psi-reps", "300"]);
    assert_eq!(written, direct.stdout, "file and stdout forms agree");

    // A failing run must not create the output file.
    let fail_path = dir.path().join("never.json");
    let bad = trendtest(&[
        "test", "--input", "/nonexistent/nowhere.csv",
        "--output", &fail_path.display().to_string(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!fail_path.exists(), "no partial output on error");
}

#[test]
fn segment_reports_breaks_splits_and_step_function() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..400)
        .map(|i| if i >= 200 { 3.0 } else { 0.0 } + 0.5 * wiggle(i))
        .collect();
    let input = write_series(dir.path(), "step.csv", Some("v"), &values);
    let doc = stdout_json(&trendtest(&[
        "segment", "--input", &input, "--column", "v",
        "--psi-reps", "400", "--min-segment", "40",
    ]));

    assert_eq!(doc["command"], "segment");
    assert_eq!(doc["config"]["min_segment"], 40);
    let result = &doc["result"];
    let breaks: Vec<i64> = result["break_indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .collect();
    assert!(!breaks.is_empty());
    assert!(
        breaks.iter().any(|&b| (b - 200).abs() <= 20),
        "no break near 200 in {breaks:?}"
    );
    assert_eq!(
        result["segment_means"].as_array().unwrap().len(),
        breaks.len() + 1
    );
    assert_eq!(result["piecewise_mean"].as_array().unwrap().len(), 400);
    assert!(!result["splits"].as_array().unwrap().is_empty());
}

#[test]
fn simulate_runs_rejection_and_accuracy_plans() {
    let dir = TempDir::new().unwrap();
    let rejection = dir.path().join("rates.toml");
    fs::write(
        &rejection,
        r#"
mode = "rejection"
replications = 30

[[scenarios]]
name = "calm"
dgp = { kind = "iid_normal" }
n = 150

[[scenarios]]
name = "stepped"
dgp = { kind = "iid_normal" }
mean = "step_half"
mean_magnitude = 2.0
n = 150
"#,
    )
    .unwrap();
    let args = [
        "simulate", "--scenario", &rejection.display().to_string(),
        "--psi-reps", "200", "--seed", "99",
    ];
    let one = trendtest(&args);
    let two = trendtest(&args);
    assert_eq!(one.stdout, two.stdout);
    let doc = stdout_json(&one);
    assert_eq!(doc["seed"], 99);
    assert_eq!(doc["result"]["mode"], "rejection");
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["scenario"], "calm");
    let calm = rows[0]["rejection_rate"].as_f64().unwrap();
    let stepped = rows[1]["rejection_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&calm));
    assert!(stepped > calm, "step power {stepped} vs size {calm}");

    let accuracy = dir.path().join("accuracy.toml");
    fs::write(
        &accuracy,
        r#"
mode = "lrv"
replications = 30

[[scenarios]]
dgp = { kind = "ar1", phi = 0.4 }
n = 300
"#,
    )
    .unwrap();
    let doc = stdout_json(&trendtest(&[
        "simulate", "--scenario", &accuracy.display().to_string(),
    ]));
    assert_eq!(doc["result"]["mode"], "lrv");
    let row = &doc["result"]["rows"][0];
    assert!(row["bias"].is_f64());
    assert!(row["rmse"].as_f64().unwrap() >= 0.0);

    let broken = dir.path().join("broken.toml");
    fs::write(&broken, "mode = \"rejection\"\n").unwrap();
    let fail = trendtest(&["simulate", "--scenario", &broken.display().to_string()]);
    assert_eq!(fail.status.code(), Some(2));
}

#[test]
fn preprocessing_differences_and_detrends_before_testing() {
    let dir = TempDir::new().unwrap();

    // Differencing shortens the series by the lag; the block layout follows.
    let seasonal: Vec<f64> = (0..300)
        .map(|i| 2.0 * ((i % 12) as f64) + 0.3 * wiggle(i))
        .collect();
    let input = write_series(dir.path(), "seasonal.csv", None, &seasonal);
    let doc = stdout_json(&trendtest(&[
        "test", "--input", &input, "--psi-reps", "300", "--diff-lag", "12",
    ]));
    assert_eq!(doc["result"]["n"], 288);
    assert_eq!(doc["config"]["preprocessing"]["diff_lag"], 12);

    // Detrending: a strong linear trend is rejected raw and accepted after a
    // degree-1 fit, whose coefficients are reported.
    let trended: Vec<f64> = (1..=400)
        .map(|i| 6.0 * (i as f64 / 400.0) + 0.5 * wiggle(i))
        .collect();
    let input = write_series(dir.path(), "trended.csv", None, &trended);
    let raw = stdout_json(&trendtest(&["test", "--input", &input, "--psi-reps", "400"]));
    assert_eq!(raw["result"]["reject"], true);

    let detrended = stdout_json(&trendtest(&[
        "test", "--input", &input, "--psi-reps", "400", "--detrend-degree", "1",
    ]));
    assert_eq!(detrended["result"]["reject"], false);
    let coeffs: Vec<f64> = detrended["config"]["preprocessing"]["trend_coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(coeffs.len(), 2);
    assert!((coeffs[1] - 6.0).abs() < 0.5, "slope estimate {}", coeffs[1]);
}

#[test]
fn lrv_command_reports_both_estimators_and_schemes() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..500).map(wiggle).collect();
    let input = write_series(dir.path(), "series.csv", None, &values);
    let doc = stdout_json(&trendtest(&["lrv", "--input", &input]));
    assert_eq!(doc["command"], "lrv");
    let result = &doc["result"];
    assert!(result["kappa_tilde_x"].as_f64().unwrap() > 0.0);
    assert!(result["kappa_hat"].as_f64().unwrap() > 0.0);
    assert_eq!(result["n"], 500);
    assert_eq!(result["sub_len"], 12); // floor(500^0.4)
    assert_eq!(result["sub_count"], 41);
    assert_eq!(result["block_len"], 77); // floor(500^0.7)
    assert_eq!(result["block_count"], 6);
}
