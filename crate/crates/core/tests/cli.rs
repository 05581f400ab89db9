use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liouville-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify_reports_certificate() {
    let out = run(&["classify", "--eq", "G", "--N", "9", "--alpha", "0", "--beta", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,alpha,beta,p,verdict,certificate_t,threshold,witness"));
    assert_eq!(lines.next(), Some("9,0,0,,NONEXIST,1.875,8,"));
}

#[test]
fn classify_existence_has_witness_summary() {
    let out = run(&["classify", "--N", "11"]);
    assert_eq!(code(&out), 0);
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 8);
    assert_eq!(fields[4], "EXIST");
    assert!(fields[7].contains("u=-1*ln(1+r^2)"), "{row}");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["classify", "--eq", "L", "--p", "0.5", "--N", "3"],
        vec!["classify", "--eq", "X", "--N", "3"],
        vec!["classify", "--N", "abc"],
        vec!["classify"],
        vec!["sweep", "--N-range", "5:3:1"],
        vec!["sweep", "--N-range", "1:3:0"],
        vec!["sweep", "--N-range", "1:3"],
        vec!["sweep", "--N", "3"],
        vec!["witness", "--N", "9", "--verify"],
        vec!["rates", "--kind", "QQ", "--N", "3", "--t", "1"],
        vec!["rates", "--kind", "IG", "--N", "3", "--t", "5"],
        vec!["hardy", "--N", "3", "--t", "1"],
        vec!["stability", "--N", "11", "--ladder", "10,-1"],
        vec!["frobnicate"],
        vec!["classify", "--N", "3", "--config", "/nonexistent/liouville.cfg"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["sweep", "--help"])), 0);
}

#[test]
fn sweep_flips_at_gelfand_boundary() {
    let out = run(&["sweep", "--eq", "G", "--N-range", "3:15:1", "--jobs", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let verdicts: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    let expected: Vec<&str> = (3..=15)
        .map(|n| match n {
            ..=9 => "NONEXIST",
            10 => "UNDET",
            _ => "EXIST",
        })
        .collect();
    assert_eq!(verdicts, expected);
}

#[test]
fn sweep_output_is_deterministic_across_job_counts() {
    let base = ["sweep", "--N", "10", "--alpha-range", "-3:3:0.5", "--beta-range", "-3:3:0.5"];
    let one = run(&[&base[..], &["--jobs", "1"]].concat());
    let four = run(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(stdout(&one).lines().count(), 1 + 13 * 13);
    assert!(stdout(&one).starts_with("alpha,beta,verdict,threshold,certificate_t\n"));
    let json_a = run(&[&base[..], &["--format", "json", "--jobs", "2"]].concat());
    let json_b = run(&[&base[..], &["--format", "json", "--jobs", "3"]].concat());
    let json_c = run(&[&base[..], &["--format", "json", "--jobs", "3"]].concat());
    assert_eq!(json_b.stdout, json_c.stdout);
    // the config block echoes --jobs; everything else must match
    let a: Value = serde_json::from_slice(&json_a.stdout).unwrap();
    let b: Value = serde_json::from_slice(&json_b.stdout).unwrap();
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["checks"], b["checks"]);
}

#[test]
fn sweep_boundary_follows_threshold_line() {
    // N + α − 2 = 4(β − α + 2) with N = 10 is β = (5α)/4
    let out = run(&["sweep", "--N", "10", "--alpha-range", "-3:3:1", "--beta-range", "-3:3:0.25"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (a, b): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let expected = if b < 1.25 * a - 1e-12 {
            if b - a + 2.0 == 0.0 { "UNDET" } else { "EXIST" }
        } else if b > 1.25 * a + 1e-12 {
            "NONEXIST"
        } else {
            "UNDET"
        };
        assert_eq!(f[2], expected, "{line}");
    }
}

#[test]
fn json_report_layout() {
    let out = run(&["classify", "--N", "9", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["checks", "config", "results"]);
    assert_eq!(v["results"]["certificate_t"], 1.875);
    assert_eq!(v["results"]["verdict"], "NONEXIST");
    assert_eq!(v["config"]["N"], "9");
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch_dir("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# experiment\neq = G\nN = 11\nalpha = 0\n").unwrap();
    let from_file = run(&["classify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&from_file), 0);
    assert!(stdout(&from_file).contains("EXIST"));
    let overridden = run(&["classify", "--config", cfg.to_str().unwrap(), "--N", "9"]);
    assert_eq!(stdout(&overridden).lines().nth(1), Some("9,0,0,,NONEXIST,1.875,8,"));
    std::fs::write(&cfg, "N 11\n").unwrap();
    assert_eq!(code(&run(&["classify", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn witness_verify_passes() {
    let out = run(&["witness", "--eq", "G", "--N", "11", "--alpha", "0", "--beta", "0", "--verify", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["results"]["max_relative_residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn rates_slope_and_failing_tolerance() {
    let out = run(&["rates", "--kind", "IG", "--N", "3", "--alpha", "0", "--beta", "0", "--t", "1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let slope = v["results"]["report"]["fitted_slope"].as_f64().unwrap();
    assert!((slope + 3.0).abs() < 0.05, "{slope}");
    assert_eq!(v["results"]["report"]["predicted_exponent"], -3.0);
    // a zero tolerance cannot be met by a numerical fit
    let strict = run(&["rates", "--kind", "IG", "--N", "3", "--alpha", "1", "--beta", "0.5", "--t", "1", "--tol", "0"]);
    assert_eq!(code(&strict), 2);
    // J vanishes identically for α = 0
    assert_eq!(code(&run(&["rates", "--kind", "JG", "--N", "3", "--t", "1"])), 0);
}

#[test]
fn hardy_suites_pass() {
    let out = run(&["hardy", "--corollary", "--alpha", "0", "--t", "0.5", "--N", "3", "--bumps", "100"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 101);
    let lemma = run(&["hardy", "--lemma", "--N", "3", "--tau", "1", "--e-power", "0.5", "--seed", "4"]);
    assert_eq!(code(&lemma), 0);
    let again = run(&["hardy", "--lemma", "--N", "3", "--tau", "1", "--e-power", "0.5", "--seed", "4"]);
    assert_eq!(lemma.stdout, again.stdout);
}

#[test]
fn stability_pair_certificate_and_witness_evidence() {
    let out = run(&["stability", "--N", "11"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().skip(1).all(|l| l.ends_with("StableEvidence")));
    let pair = run(&["stability", "--N", "8", "--pair", "--ladder", "10,100,1000,10000", "--format", "json"]);
    assert_eq!(code(&pair), 0);
    let v: Value = serde_json::from_slice(&pair.stdout).unwrap();
    assert_eq!(v["results"]["verdict"], "UnstableCertificate");
}

#[test]
fn out_file_and_gnuplot_script() {
    let dir = scratch_dir("gnuplot");
    let csv = dir.join("region.csv");
    let out = run(&["sweep", "--N-range", "3:12:1", "--alpha-range", "0:1:0.5", "--out", csv.to_str().unwrap(), "--gnuplot"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let data = std::fs::read_to_string(&csv).unwrap();
    assert!(data.starts_with("N,alpha,verdict,threshold,certificate_t\n"));
    let script = std::fs::read_to_string(dir.join("region.csv.gp")).unwrap();
    assert!(script.contains(csv.to_str().unwrap()));
    assert!(!script.contains("{data}"));
}

#[test]
fn repeated_flags_take_the_last_value() {
    let out = run(&["classify", "--N", "11", "--N", "9"]);
    assert_eq!(stdout(&out).lines().nth(1), Some("9,0,0,,NONEXIST,1.875,8,"));
}
