//! The `montecarlo`, `oracle-check`, and `replay` subcommands.

use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use mixregime::filter::{brute_force_posterior, filter_prefix};
use mixregime::montecarlo::{
    all_records_pass, records_to_csv, records_to_jsonl, run_experiment, Experiment,
    ExperimentConfig,
};
use mixregime::process::ModelParams;

use crate::manifest::{emit_csv, RunManifest, RunSpec};
use crate::tables::render_sweep;
use crate::{AppError, AppResult, McArgs, OracleArgs, ReplayArgs};

/// Every key a montecarlo config file may carry (flat, mirroring the flags).
const CONFIG_KEYS: [&str; 12] = [
    "rho",
    "pi_init",
    "gamma",
    "n_trajectories",
    "trajectory_length",
    "master_seed",
    "sweep_param",
    "sweep_values",
    "predictor",
    "sigma_band",
    "min_bin_samples",
    "workers",
];

fn to_object(value: Value) -> AppResult<Map<String, Value>> {
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(AppError::Usage("config must be a JSON object".into())),
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .expect("finite flag value")
}

/// Resolve the effective config: experiment defaults, then file keys, then
/// flag overrides. Returns the config and the worker count.
fn resolve_config(experiment: Experiment, args: &McArgs) -> AppResult<(ExperimentConfig, usize)> {
    let defaults = serde_json::to_value(experiment.default_config())
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    let mut merged = to_object(defaults)?;
    let mut workers = args.workers;

    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)?;
        let file: Value = serde_json::from_str(&text).map_err(|e| {
            AppError::Usage(format!("config {} does not parse: {e}", path.display()))
        })?;
        for (key, value) in to_object(file)? {
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(AppError::Usage(format!(
                    "unknown config key '{key}' in {}",
                    path.display()
                )));
            }
            if key == "workers" {
                workers = value
                    .as_u64()
                    .ok_or_else(|| AppError::Usage("workers must be an integer".into()))?
                    as usize;
            } else {
                merged.insert(key, value);
            }
        }
    }

    // flags override the file
    if args.workers != 0 {
        workers = args.workers;
    }
    if let Some(v) = args.rho {
        merged.insert("rho".into(), number(v));
    }
    if let Some(v) = args.pi_init {
        merged.insert("pi_init".into(), number(v));
    }
    if let Some(v) = args.gamma {
        merged.insert("gamma".into(), number(v));
    }
    if let Some(v) = args.n_trajectories {
        merged.insert("n_trajectories".into(), Value::from(v));
    }
    if let Some(v) = args.trajectory_length {
        merged.insert("trajectory_length".into(), Value::from(v));
    }
    if let Some(v) = args.master_seed {
        merged.insert("master_seed".into(), Value::from(v));
    }
    if let Some(v) = &args.sweep_param {
        merged.insert("sweep_param".into(), Value::from(v.clone()));
    }
    if let Some(v) = &args.sweep_values {
        merged.insert(
            "sweep_values".into(),
            Value::Array(v.iter().map(|x| number(*x)).collect()),
        );
    }
    if let Some(v) = &args.predictor {
        merged.insert("predictor".into(), Value::from(v.clone()));
    }
    if let Some(v) = args.sigma_band {
        merged.insert("sigma_band".into(), number(v));
    }
    if let Some(v) = args.min_bin_samples {
        merged.insert("min_bin_samples".into(), Value::from(v));
    }

    let config: ExperimentConfig = serde_json::from_value(Value::Object(merged))
        .map_err(|e| AppError::Usage(format!("invalid config: {e}")))?;
    config.validate(experiment)?;
    Ok((config, workers))
}

pub fn montecarlo(args: &McArgs) -> AppResult<bool> {
    let experiment = Experiment::from_name(&args.experiment).ok_or_else(|| {
        AppError::Usage(format!(
            "unknown experiment '{}'; expected calibration | false-authority | threshold | temperature",
            args.experiment
        ))
    })?;
    let (config, workers) = resolve_config(experiment, args)?;
    execute_montecarlo(experiment, &config, workers, &args.out_dir)
}

/// Run the experiment and write records.csv, records.jsonl, and the manifest
/// into `out_dir`. True iff every sigma-band check passed.
pub fn execute_montecarlo(
    experiment: Experiment,
    config: &ExperimentConfig,
    workers: usize,
    out_dir: &Path,
) -> AppResult<bool> {
    let records = run_experiment(experiment, config, workers)?;

    fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join("records.csv");
    let jsonl_path = out_dir.join("records.jsonl");
    fs::write(&csv_path, records_to_csv(&records, config))?;
    fs::write(&jsonl_path, records_to_jsonl(&records, config))?;

    let manifest = RunManifest::new(
        RunSpec::Montecarlo {
            experiment: experiment.name().to_string(),
            workers,
            config: config.clone(),
        },
        vec![
            csv_path.display().to_string(),
            jsonl_path.display().to_string(),
        ],
    );
    manifest.write(&out_dir.join("manifest.json"))?;

    let passed = all_records_pass(&records);
    let flagged = records.iter().filter(|r| r.flag.is_some()).count();
    eprintln!(
        "{experiment}: {} records ({} flagged) -> {}",
        records.len(),
        flagged,
        out_dir.display()
    );
    if !passed {
        for r in records.iter().filter(|r| !r.pass) {
            eprintln!(
                "FAIL {}={}: estimate {:?} vs prediction {:?} (deviation {:?}, band {} x {:?})",
                r.param, r.value, r.estimate, r.prediction, r.deviation, r.sigma_band, r.std_error
            );
        }
    }
    Ok(passed)
}

pub fn oracle_check(args: &OracleArgs) -> AppResult<bool> {
    if args.max_length > 20 {
        return Err(AppError::Usage(format!(
            "--max-length {} exceeds the enumeration bound of 20",
            args.max_length
        )));
    }
    if args.max_length == 0 {
        return Err(AppError::Usage("--max-length must be at least 1".into()));
    }
    let mut max_dev = 0.0f64;
    let mut checked = 0u64;
    for &rho in &args.rhos {
        for &pi_init in &args.pi_inits {
            let params = ModelParams::new(rho, pi_init, 0.9)?;
            for len in 1..=args.max_length {
                for mask in 0u64..(1u64 << len) {
                    let tokens: Vec<u8> = (0..len).map(|i| ((mask >> i) & 1) as u8).collect();
                    let filtered = filter_prefix(&params, &tokens)?;
                    let oracle = brute_force_posterior(&params, &tokens)?;
                    let dev = (filtered.last().unwrap().pi0() - oracle.pi0()).abs();
                    if dev > max_dev {
                        max_dev = dev;
                    }
                    checked += 1;
                }
            }
        }
    }
    let passed = max_dev <= 1e-12;
    println!(
        "oracle-check: {checked} prefixes up to length {}, max deviation {max_dev:e} -> {}",
        args.max_length,
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(passed)
}

pub fn replay(args: &ReplayArgs) -> AppResult<bool> {
    let manifest = RunManifest::read(&args.manifest)?;
    match manifest.spec {
        RunSpec::FilterTrace {
            ref tokens,
            rho,
            pi_init,
            gamma,
        } => {
            let csv_text = crate::tables::render_filter_trace(tokens, rho, pi_init, gamma)?;
            emit_csv(&csv_text, args.out.as_deref(), manifest.spec.clone())?;
            Ok(true)
        }
        RunSpec::Sweep { .. } => {
            let csv_text = render_sweep(&manifest.spec)?;
            emit_csv(&csv_text, args.out.as_deref(), manifest.spec.clone())?;
            Ok(true)
        }
        RunSpec::Montecarlo {
            ref experiment,
            workers,
            ref config,
        } => {
            let experiment = Experiment::from_name(experiment).ok_or_else(|| {
                AppError::Usage(format!("manifest names unknown experiment '{experiment}'"))
            })?;
            execute_montecarlo(experiment, config, workers, &args.out_dir)
        }
    }
}
