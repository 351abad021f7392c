use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_a5bound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("a5bound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lambda0_prints_known_prefixes() {
    let out = run(&["lambda0", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let results = doc["results"].as_array().unwrap();
    let value = |n: &str| {
        results.iter().find(|r| r["name"] == n).unwrap()["value"]
            .as_f64()
            .unwrap()
    };
    assert!(value("lambda0").to_string().starts_with("0.400436"));
    assert!(value("ps_threshold").to_string().starts_with("0.356789"));
}

#[test]
fn verify_small_run_is_clean() {
    let out = run(&[
        "verify",
        "--lambda",
        "1.0",
        "--samples",
        "1000",
        "--seed",
        "1",
        "--no-timestamp",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let doc = json(&out);
    assert_eq!(doc["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn sweep_csv_shape() {
    let out = run(&[
        "sweep",
        "--lambda",
        "0.45:1.0:12",
        "--format",
        "csv",
        "--starts",
        "4",
        "--budget",
        "500",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,max_a5,bound,gap"));
    assert_eq!(lines.count(), 12);
}

#[test]
fn sweep_gaps_vanish_above_threshold() {
    let out = run(&[
        "sweep",
        "--lambda",
        "0.45,0.7,1.0",
        "--starts",
        "16",
        "--budget",
        "5000",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for row in json(&out)["results"].as_array().unwrap() {
        let gap = row["gap"].as_f64().unwrap();
        assert!(gap.abs() <= 1e-6, "{row}");
    }
}

#[test]
fn sweep_below_threshold_reports_data() {
    let out = run(&[
        "sweep",
        "--lambda",
        "0.2",
        "--starts",
        "8",
        "--budget",
        "2000",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let row = &doc["results"][0];
    assert!(row["max_a5"].as_f64().unwrap().is_finite());
    assert!(row["bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--bogus"][..],
        &["nonsense"][..],
        &["sweep", "--lambda", "1.5"][..],
        &["search", "--starts", "0"][..],
        &["ps-check", "--mu", "1"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_reproducible_without_timestamp() {
    let args = [
        "search",
        "--lambda",
        "0.6",
        "--starts",
        "6",
        "--budget",
        "800",
        "--seed",
        "9",
        "--no-timestamp",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("lambda0.csv");
    let out = run(&[
        "lambda0",
        "--format",
        "csv",
        "--no-timestamp",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("name,value,residual\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn more_starts_never_lower_the_best() {
    let best = |starts: &str| {
        let out = run(&[
            "search",
            "--lambda",
            "0.5",
            "--starts",
            starts,
            "--budget",
            "600",
            "--seed",
            "4",
            "--no-timestamp",
        ]);
        assert_eq!(out.status.code(), Some(0));
        json(&out)["results"][0]["max_a5"].as_f64().unwrap()
    };
    let values: Vec<f64> = ["1", "2", "4", "8"].iter().map(|s| best(s)).collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0]), "{values:?}");
}
