//! Closed-form tables: the filter trace and the four sweep kinds.
//!
//! All numeric CSV output uses round-trip decimal formatting; every file
//! output gets a manifest and can be replayed byte-identically.

use mixregime::filter::filter_prefix;
use mixregime::infotheory::{
    entropy_after_grounding, expected_residual_mi, pointwise_mutual_info, sufficiency_gap,
};
use mixregime::predictor::{
    dominance_threshold, grounded_posterior, marginal_predictive, structural_error_prob,
};
use mixregime::process::{parse_bit_string, ModelParams};

use crate::manifest::{emit_csv, RunSpec};
use crate::{
    AppError, AppResult, GammaSweepArgs, GridArgs, SweepCommand, TemperatureSweepArgs, TraceArgs,
};

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> AppResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    for row in rows {
        writer
            .write_record(row)
            .map_err(|e| AppError::Runtime(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| AppError::Runtime(e.to_string()))
}

pub fn filter_trace(args: &TraceArgs) -> AppResult<bool> {
    let spec = RunSpec::FilterTrace {
        tokens: args.tokens.clone(),
        rho: args.rho,
        pi_init: args.pi_init,
        gamma: args.gamma,
    };
    let csv_text = render_filter_trace(&args.tokens, args.rho, args.pi_init, args.gamma)?;
    emit_csv(&csv_text, args.out.as_deref(), spec)?;
    Ok(true)
}

pub fn render_filter_trace(tokens: &str, rho: f64, pi_init: f64, gamma: f64) -> AppResult<String> {
    let params = ModelParams::new(rho, pi_init, gamma)?;
    let bits = parse_bit_string(tokens)?;
    let states = filter_prefix(&params, &bits)?;
    let rows: Vec<Vec<String>> = states
        .iter()
        .zip(bits.iter())
        .map(|(state, token)| {
            let pi0 = state.pi0();
            let p_alt = marginal_predictive(pi0)?.p_alt();
            let report = sufficiency_gap(pi0)?;
            Ok(vec![
                state.position().to_string(),
                token.to_string(),
                fmt(pi0),
                fmt(p_alt),
                fmt(report.h_marginal),
                fmt(report.gap),
                fmt(pointwise_mutual_info(pi0)?),
            ])
        })
        .collect::<AppResult<_>>()?;
    csv_table(
        &[
            "t",
            "token",
            "pi0",
            "p_alt",
            "mixture_entropy",
            "gap",
            "pointwise_mi",
        ],
        &rows,
    )
}

/// Resolve a grid: explicit values win; otherwise min/max/count linspace;
/// otherwise the kind's default.
fn resolve_grid(grid: &GridArgs, default: &[f64]) -> AppResult<Vec<f64>> {
    if let Some(values) = &grid.values {
        if values.is_empty() {
            return Err(AppError::Usage("--values must be non-empty".into()));
        }
        return Ok(values.clone());
    }
    match (grid.min, grid.max) {
        (Some(min), Some(max)) => {
            if grid.count < 2 {
                return Err(AppError::Usage("--count must be at least 2".into()));
            }
            if min.is_nan() || max.is_nan() || min >= max {
                return Err(AppError::Usage(format!(
                    "--min {min} must be below --max {max}"
                )));
            }
            let n = grid.count;
            Ok((0..n)
                .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
                .collect())
        }
        (None, None) => Ok(default.to_vec()),
        _ => Err(AppError::Usage(
            "--min and --max must be given together".into(),
        )),
    }
}

pub fn sweep(kind: &SweepCommand) -> AppResult<bool> {
    match kind {
        SweepCommand::Gap(grid) => sweep_gap(grid),
        SweepCommand::Temperature(args) => sweep_temperature(args),
        SweepCommand::Gamma(args) => sweep_gamma(args),
        SweepCommand::ResidualMi(args) => sweep_residual_mi(args),
    }
}

fn sweep_gap(grid_args: &GridArgs) -> AppResult<bool> {
    let default: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let grid = resolve_grid(grid_args, &default)?;
    let spec = RunSpec::Sweep {
        kind: "gap".to_string(),
        values: grid.clone(),
        alpha: None,
        pi0: None,
    };
    let csv_text = render_sweep(&spec)?;
    emit_csv(&csv_text, grid_args.out.as_deref(), spec)?;
    Ok(true)
}

fn sweep_temperature(args: &TemperatureSweepArgs) -> AppResult<bool> {
    let grid = resolve_grid(&args.grid, &[0.25, 0.5, 1.0, 2.0, 4.0, 8.0])?;
    let spec = RunSpec::Sweep {
        kind: "temperature".to_string(),
        values: grid.clone(),
        alpha: Some(args.alpha),
        pi0: None,
    };
    let csv_text = render_sweep(&spec)?;
    emit_csv(&csv_text, args.grid.out.as_deref(), spec)?;
    Ok(true)
}

fn sweep_gamma(args: &GammaSweepArgs) -> AppResult<bool> {
    let default: Vec<f64> = (0..=50).map(|i| 0.5 + i as f64 / 100.0).collect();
    let grid = resolve_grid(&args.grid, &default)?;
    let spec = RunSpec::Sweep {
        kind: "gamma".to_string(),
        values: grid.clone(),
        alpha: None,
        pi0: Some(args.pi0),
    };
    let csv_text = render_sweep(&spec)?;
    emit_csv(&csv_text, args.grid.out.as_deref(), spec)?;
    Ok(true)
}

fn sweep_residual_mi(args: &GammaSweepArgs) -> AppResult<bool> {
    let default: Vec<f64> = (0..=50).map(|i| 0.5 + i as f64 / 100.0).collect();
    let grid = resolve_grid(&args.grid, &default)?;
    let spec = RunSpec::Sweep {
        kind: "residual-mi".to_string(),
        values: grid.clone(),
        alpha: None,
        pi0: Some(args.pi0),
    };
    let csv_text = render_sweep(&spec)?;
    emit_csv(&csv_text, args.grid.out.as_deref(), spec)?;
    Ok(true)
}

/// Render any resolved sweep spec (also the replay entry point).
pub fn render_sweep(spec: &RunSpec) -> AppResult<String> {
    let RunSpec::Sweep {
        kind,
        values,
        alpha,
        pi0,
    } = spec
    else {
        return Err(AppError::Usage("not a sweep spec".into()));
    };
    match kind.as_str() {
        "gap" => {
            let rows = values
                .iter()
                .map(|&pi0| {
                    let report = sufficiency_gap(pi0)?;
                    Ok(vec![
                        fmt(pi0),
                        fmt(marginal_predictive(pi0)?.p_alt()),
                        fmt(report.h_marginal),
                        fmt(report.gap),
                    ])
                })
                .collect::<AppResult<Vec<_>>>()?;
            csv_table(&["pi0", "p_alt", "h_marginal", "gap"], &rows)
        }
        "temperature" => {
            let alpha = alpha.ok_or_else(|| AppError::Usage("missing alpha".into()))?;
            let rows = values
                .iter()
                .map(|&t| {
                    Ok(vec![
                        fmt(t),
                        fmt(alpha),
                        fmt(structural_error_prob(alpha, t)?),
                    ])
                })
                .collect::<AppResult<Vec<_>>>()?;
            csv_table(&["temperature", "alpha", "epsilon"], &rows)
        }
        "gamma" => {
            let pi0 = pi0.ok_or_else(|| AppError::Usage("missing pi0".into()))?;
            let threshold = dominance_threshold(pi0)?;
            let rows = values
                .iter()
                .map(|&gamma| {
                    let q = grounded_posterior(pi0, gamma, 1)?;
                    Ok(vec![
                        fmt(gamma),
                        fmt(pi0),
                        fmt(q),
                        fmt((1.0 + q) / 2.0),
                        fmt(entropy_after_grounding(pi0, gamma)?),
                        (gamma > threshold).to_string(),
                    ])
                })
                .collect::<AppResult<Vec<_>>>()?;
            csv_table(
                &[
                    "gamma",
                    "pi0",
                    "q",
                    "p_alt",
                    "entropy_after_grounding",
                    "reversal",
                ],
                &rows,
            )
        }
        "residual-mi" => {
            let pi0 = pi0.ok_or_else(|| AppError::Usage("missing pi0".into()))?;
            let baseline = pointwise_mutual_info(pi0)?;
            let rows = values
                .iter()
                .map(|&gamma| {
                    Ok(vec![
                        fmt(gamma),
                        fmt(pi0),
                        fmt(expected_residual_mi(pi0, gamma)?),
                        fmt(baseline),
                    ])
                })
                .collect::<AppResult<Vec<_>>>()?;
            csv_table(&["gamma", "pi0", "residual_mi", "pointwise_mi"], &rows)
        }
        other => Err(AppError::Usage(format!("unknown sweep kind {other}"))),
    }
}
