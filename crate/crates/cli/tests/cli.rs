//! End-to-end tests against the compiled binary: output formats, exit codes,
//! manifests, and replay byte-identity.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mixregime::filter::brute_force_posterior;
use mixregime::process::{parse_bit_string, ModelParams};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixregime"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn exit_code(args: &[&str]) -> i32 {
    bin()
        .args(args)
        .output()
        .expect("binary runs")
        .status
        .code()
        .expect("exit code")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

fn field(line: &str, idx: usize) -> &str {
    line.split(',').nth(idx).unwrap()
}

#[test]
fn filter_trace_matches_enumeration_oracle() {
    let out = run_ok(&[
        "filter-trace",
        "--tokens",
        "0101",
        "--rho",
        "0.9",
        "--pi-init",
        "0.5",
    ]);
    let lines = stdout_lines(&out);
    assert_eq!(
        lines[0],
        "t,token,pi0,p_alt,mixture_entropy,gap,pointwise_mi"
    );
    assert_eq!(lines.len(), 5);
    let final_pi0: f64 = field(&lines[4], 2).parse().unwrap();

    let params = ModelParams::new(0.9, 0.5, 0.9).unwrap();
    let tokens = parse_bit_string("0101").unwrap();
    let oracle = brute_force_posterior(&params, &tokens).unwrap();
    assert!((final_pi0 - oracle.pi0()).abs() <= 1e-12);
}

#[test]
fn filter_trace_single_token_row() {
    let out = run_ok(&["filter-trace", "--tokens", "0", "--pi-init", "0.3"]);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(field(&lines[1], 0), "1");
    assert_eq!(field(&lines[1], 2), "0.3");
}

#[test]
fn filter_trace_broken_alternation_drops() {
    let out = run_ok(&["filter-trace", "--tokens", "00", "--rho", "0.9"]);
    let lines = stdout_lines(&out);
    let pi0: f64 = field(&lines[2], 2).parse().unwrap();
    assert!((pi0 - 0.1).abs() < 1e-12);
}

#[test]
fn malformed_tokens_are_usage_errors_with_position() {
    let out = bin()
        .args(["filter-trace", "--tokens", "01a1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("position 3"), "stderr: {stderr}");
}

#[test]
fn gap_sweep_spot_values() {
    let out = run_ok(&["sweep", "gap", "--values", "0,0.5,1"]);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "pi0,p_alt,h_marginal,gap");
    let gaps: Vec<f64> = lines[1..]
        .iter()
        .map(|l| field(l, 3).parse().unwrap())
        .collect();
    assert_eq!(gaps[0], 0.0);
    assert!((gaps[1] - 0.18872187554086714).abs() < 1e-12);
    assert_eq!(gaps[2], 1.0);
}

#[test]
fn gamma_sweep_reversal_column_flips_at_pi0() {
    let out = run_ok(&[
        "sweep",
        "gamma",
        "--pi0",
        "0.9",
        "--values",
        "0.5,0.8,0.9,0.91,1.0",
    ]);
    let lines = stdout_lines(&out);
    let reversal: Vec<&str> = lines[1..].iter().map(|l| field(l, 5)).collect();
    assert_eq!(reversal, ["false", "false", "false", "true", "true"]);
}

#[test]
fn temperature_sweep_spot_values() {
    let out = run_ok(&[
        "sweep",
        "temperature",
        "--alpha",
        "0.75",
        "--values",
        "0.5,1,2",
    ]);
    let lines = stdout_lines(&out);
    let eps: Vec<f64> = lines[1..]
        .iter()
        .map(|l| field(l, 2).parse().unwrap())
        .collect();
    assert!((eps[0] - 0.1).abs() < 1e-12);
    assert_eq!(eps[1], 0.25);
    assert!((eps[2] - 0.36602540378443865).abs() < 1e-12);
}

#[test]
fn sweep_usage_errors() {
    // pi0 outside the dominant-prior band
    assert_eq!(exit_code(&["sweep", "gamma", "--pi0", "0.4"]), 2);
    // inverted grid bounds
    assert_eq!(
        exit_code(&["sweep", "gap", "--min", "0.9", "--max", "0.1"]),
        2
    );
}

#[test]
fn file_output_gets_a_manifest_and_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("gamma.csv");
    run_ok(&[
        "sweep",
        "gamma",
        "--pi0",
        "0.9",
        "--values",
        "0.6,0.95",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let manifest_path = dir.path().join("gamma.csv.manifest.json");
    assert!(manifest_path.exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "sweep");
    assert_eq!(manifest["kind"], "gamma");
    assert_eq!(manifest["pi0"], 0.9);

    let replay_path = dir.path().join("replayed.csv");
    run_ok(&[
        "replay",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--out",
        replay_path.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(&out_path).unwrap(),
        fs::read(&replay_path).unwrap()
    );
}

fn mc_dir_files(dir: &Path) -> (String, String, serde_json::Value) {
    let csv_text = fs::read_to_string(dir.join("records.csv")).unwrap();
    let jsonl = fs::read_to_string(dir.join("records.jsonl")).unwrap();
    let manifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    (csv_text, jsonl, manifest)
}

#[test]
fn montecarlo_threshold_runs_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    run_ok(&[
        "montecarlo",
        "threshold",
        "--n-trajectories",
        "40",
        "--trajectory-length",
        "201",
        "--workers",
        "1",
        "--out-dir",
        out_a.to_str().unwrap(),
    ]);
    let (csv_a, jsonl_a, manifest) = mc_dir_files(&out_a);
    assert!(csv_a.starts_with("experiment,param,value,samples"));
    assert_eq!(manifest["experiment"], "threshold");
    assert_eq!(manifest["config"]["n_trajectories"], 40);

    // different worker count: byte-identical records
    let out_b = dir.path().join("b");
    run_ok(&[
        "montecarlo",
        "threshold",
        "--n-trajectories",
        "40",
        "--trajectory-length",
        "201",
        "--workers",
        "4",
        "--out-dir",
        out_b.to_str().unwrap(),
    ]);
    let (csv_b, jsonl_b, _) = mc_dir_files(&out_b);
    assert_eq!(csv_a, csv_b);
    assert_eq!(jsonl_a, jsonl_b);

    // replay from the manifest reproduces the records byte for byte
    let out_c = dir.path().join("c");
    run_ok(&[
        "replay",
        "--manifest",
        out_a.join("manifest.json").to_str().unwrap(),
        "--out-dir",
        out_c.to_str().unwrap(),
    ]);
    let (csv_c, jsonl_c, _) = mc_dir_files(&out_c);
    assert_eq!(csv_a, csv_c);
    assert_eq!(jsonl_a, jsonl_c);
}

#[test]
fn montecarlo_calibration_with_zero_prior_passes() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "montecarlo",
        "calibration",
        "--pi-init",
        "0",
        "--n-trajectories",
        "50",
        "--trajectory-length",
        "201",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
}

#[test]
fn montecarlo_grounded_perfect_oracle_removes_divergence() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "montecarlo",
        "false-authority",
        "--gamma",
        "1",
        "--predictor",
        "grounded",
        "--n-trajectories",
        "50",
        "--trajectory-length",
        "201",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let (csv_text, _, _) = mc_dir_files(dir.path());
    // base row (cut 0.5): mean confidence collapses to the fair coin
    let base = csv_text.lines().nth(1).unwrap();
    let aux: f64 = field(base, 11).parse().unwrap();
    assert_eq!(aux, 0.5);
}

#[test]
fn montecarlo_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    fs::write(
        &config_path,
        r#"{"n_trajectories": 30, "trajectory_length": 101, "master_seed": 4242}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    run_ok(&[
        "montecarlo",
        "calibration",
        "--config",
        config_path.to_str().unwrap(),
        "--master-seed",
        "7",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    let (_, _, manifest) = mc_dir_files(&out_dir);
    assert_eq!(manifest["config"]["n_trajectories"], 30); // from file
    assert_eq!(manifest["config"]["master_seed"], 7); // flag wins
}

#[test]
fn montecarlo_temperature_smoke() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "montecarlo",
        "temperature",
        "--n-trajectories",
        "150",
        "--trajectory-length",
        "201",
        "--sweep-values",
        "1,2,4",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let (csv_text, _, _) = mc_dir_files(dir.path());
    let rates: Vec<f64> = csv_text
        .lines()
        .skip(1)
        .map(|l| field(l, 4).parse().unwrap())
        .collect();
    assert!(rates[0] < rates[1] && rates[1] < rates[2]);
}

#[test]
fn failed_sigma_band_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "montecarlo",
            "calibration",
            "--sigma-band",
            "0.0001",
            "--n-trajectories",
            "50",
            "--trajectory-length",
            "201",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL"), "stderr: {stderr}");
    // outputs are still written so the failure can be inspected
    assert!(dir.path().join("records.csv").exists());
}

#[test]
fn montecarlo_usage_errors() {
    assert_eq!(exit_code(&["montecarlo", "nonsense"]), 2);
    assert_eq!(exit_code(&["montecarlo", "calibration", "--rho", "0.3"]), 2);
    // threshold requires a gamma sweep; removing it must fail
    assert_eq!(
        exit_code(&[
            "montecarlo",
            "threshold",
            "--sweep-param",
            "temperature",
            "--sweep-values",
            "1,2",
        ]),
        2
    );
}

#[test]
fn oracle_check_passes_and_enforces_bound() {
    let out = run_ok(&["oracle-check", "--max-length", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"), "{text}");
    // length 1 has no updates: trivially equal on both routes
    let out = run_ok(&["oracle-check", "--max-length", "1"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("PASS"));
    assert_eq!(exit_code(&["oracle-check", "--max-length", "21"]), 2);
}

#[test]
fn stdout_stays_pure_csv() {
    let out = run_ok(&["sweep", "gap", "--values", "0.25,0.75"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.records().count(), 2);
}
