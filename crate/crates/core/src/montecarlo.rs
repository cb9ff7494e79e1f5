//! Statistical verification harness.
//!
//! Each experiment samples trajectories from the generative process, runs the
//! exact filter along them, and compares an empirical frequency against the
//! matching closed form. Comparisons are stated as sigma multiples (binomial
//! standard errors), never bare epsilons, and the acceptance band defaults to
//! four sigma so seeded CI runs stay deterministic and non-flaky.
//!
//! Reproducibility contract: per-trajectory seeds derive from
//! `(master_seed, index)` and partial statistics merge in trajectory order,
//! so results are identical for any worker count or scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{filter_init, filter_step};
use crate::predictor::{
    dominance_threshold, grounded_posterior, marginal_predictive, structural_error_prob,
};
use crate::process::{
    derive_seed, sample_trajectory, stream_rng, ModelParams, Trajectory, DECODE_STREAM_BASE,
};
use rand::Rng;

/// The four verification experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    /// Binned reliability of the predicted alternation probability.
    Calibration,
    /// Confident predictions against a fair coin: the measured divergence.
    FalseAuthority,
    /// Posterior-odds reversal against the per-step dominance rule.
    Threshold,
    /// Invalid-token rate under temperature-scaled decoding.
    Temperature,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [
        Experiment::Calibration,
        Experiment::FalseAuthority,
        Experiment::Threshold,
        Experiment::Temperature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Calibration => "calibration",
            Experiment::FalseAuthority => "false-authority",
            Experiment::Threshold => "threshold",
            Experiment::Temperature => "temperature",
        }
    }

    pub fn from_name(name: &str) -> Option<Experiment> {
        Experiment::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Fully materialized default configuration for this experiment.
    pub fn default_config(self) -> ExperimentConfig {
        let params = ModelParams::new(0.9, 0.5, 0.9).expect("default params are valid");
        let base = ExperimentConfig {
            params,
            n_trajectories: 1000,
            trajectory_length: 1001,
            master_seed: 20_260_810,
            sweep: None,
            predictor: PredictorKind::Marginal,
            sigma_band: 4.0,
            min_bin_samples: 100,
        };
        match self {
            Experiment::Calibration | Experiment::FalseAuthority => base,
            Experiment::Threshold => ExperimentConfig {
                n_trajectories: 200,
                trajectory_length: 501,
                sweep: Some(SweepSpec {
                    param: SweepParam::Gamma,
                    values: vec![0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0],
                }),
                ..base
            },
            Experiment::Temperature => ExperimentConfig {
                n_trajectories: 2000,
                sweep: Some(SweepSpec {
                    param: SweepParam::Temperature,
                    values: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
                }),
                ..base
            },
        }
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which predictive distribution the experiment scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictorKind {
    /// Text-only marginal `(1 + pi0) / 2`.
    #[default]
    Marginal,
    /// Signal-aware grounded predictor `(1 + q) / 2`.
    Grounded,
}

/// The parameter a sweep ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Gamma,
    Temperature,
}

/// A named value grid; serialized flat as `sweep_param` / `sweep_values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(rename = "sweep_param")]
    pub param: SweepParam,
    #[serde(rename = "sweep_values")]
    pub values: Vec<f64>,
}

fn default_sigma_band() -> f64 {
    4.0
}

fn default_min_bin_samples() -> u64 {
    100
}

/// One experiment run, fully specified. Serializes with flat keys mirroring
/// the CLI flag names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub params: ModelParams,
    pub n_trajectories: usize,
    pub trajectory_length: usize,
    pub master_seed: u64,
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub predictor: PredictorKind,
    #[serde(default = "default_sigma_band")]
    pub sigma_band: f64,
    #[serde(default = "default_min_bin_samples")]
    pub min_bin_samples: u64,
}

impl ExperimentConfig {
    /// Validate the configuration against the experiment that will run it.
    pub fn validate(&self, experiment: Experiment) -> Result<()> {
        if self.n_trajectories < 1 {
            return Err(Error::Config("n_trajectories must be at least 1".into()));
        }
        if self.trajectory_length < 2 {
            return Err(Error::Config("trajectory_length must be at least 2".into()));
        }
        if self.sigma_band.is_nan() || self.sigma_band <= 0.0 {
            return Err(Error::Config(format!(
                "sigma_band must be positive, got {}",
                self.sigma_band
            )));
        }
        let required = match experiment {
            Experiment::Threshold => Some(SweepParam::Gamma),
            Experiment::Temperature => Some(SweepParam::Temperature),
            _ => None,
        };
        match (&self.sweep, required) {
            (None, Some(p)) => {
                return Err(Error::Config(format!(
                    "{experiment} requires a {p:?} sweep"
                )));
            }
            (Some(s), Some(p)) if s.param != p => {
                return Err(Error::Config(format!(
                    "{experiment} requires a {p:?} sweep, got {:?}",
                    s.param
                )));
            }
            (Some(_), None) => {
                return Err(Error::Config(format!("{experiment} does not take a sweep")));
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::Config("sweep_values must be non-empty".into()));
            }
            for v in &sweep.values {
                let ok = match sweep.param {
                    SweepParam::Gamma => (0.5..=1.0).contains(v),
                    SweepParam::Temperature => v.is_finite() && *v > 0.0,
                };
                if !ok {
                    return Err(Error::Config(format!(
                        "sweep value {v} is outside the legal range for {:?}",
                        sweep.param
                    )));
                }
            }
        }
        if experiment == Experiment::Temperature && self.predictor != PredictorKind::Marginal {
            return Err(Error::Config(
                "the temperature experiment decodes from the marginal predictor".into(),
            ));
        }
        Ok(())
    }
}

/// One row of an experiment result.
///
/// `aux` carries the experiment-specific extra quantity: the mean predicted
/// confidence for false-authority rows, the per-step rule agreement fraction
/// for threshold rows, and the mean alternation probability for temperature
/// rows. Flagged rows (insufficient or empty conditioned sets) keep
/// `pass = true` so they do not fail the run; the flag marks them as skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub param: String,
    pub value: f64,
    pub samples: u64,
    pub estimate: Option<f64>,
    pub std_error: Option<f64>,
    pub prediction: Option<f64>,
    pub deviation: Option<f64>,
    pub sigma_band: f64,
    pub pass: bool,
    pub flag: Option<String>,
    pub aux: Option<f64>,
}

/// Binomial standard error with a Jeffreys-adjusted frequency, so the error
/// stays positive even at degenerate counts (0 or n successes).
fn binomial_std_error(successes: u64, n: u64) -> f64 {
    let p = (successes as f64 + 0.5) / (n as f64 + 1.0);
    (p * (1.0 - p) / n as f64).sqrt()
}

/// True iff every non-flagged record meets its acceptance band.
pub fn all_records_pass(records: &[ExperimentRecord]) -> bool {
    records.iter().all(|r| r.pass)
}

/// One prediction step observed while walking a trajectory through the filter.
struct PredictionStep {
    /// Posterior that Regime 0 governs the upcoming token.
    pi0: f64,
    /// The regime that actually governs it.
    regime: u8,
    /// Whether the emitted token alternated.
    alternated: bool,
    /// Oracle signal for this step, when sampled.
    signal: Option<u8>,
}

/// Run the filter along a trajectory, visiting every governed emission with
/// the pre-emission posterior.
fn walk_predictions<F>(params: &ModelParams, traj: &Trajectory, mut visit: F) -> Result<()>
where
    F: FnMut(&PredictionStep) -> Result<()>,
{
    let tokens = traj.tokens();
    let signals = traj.signals();
    let mut state = filter_init(params);
    for (j, regime) in traj.regimes().iter().enumerate() {
        let prev = tokens[j];
        let next = tokens[j + 1];
        visit(&PredictionStep {
            pi0: state.pi0(),
            regime: *regime,
            alternated: next == 1 - prev,
            signal: signals.map(|s| s[j]),
        })?;
        state = filter_step(&state, prev, next, params)?;
    }
    Ok(())
}

/// Predicted alternation probability for one step under the configured
/// predictor.
fn predicted_p_alt(config: &ExperimentConfig, step: &PredictionStep) -> Result<f64> {
    match config.predictor {
        PredictorKind::Marginal => Ok(marginal_predictive(step.pi0)?.p_alt()),
        PredictorKind::Grounded => {
            let signal = step
                .signal
                .expect("grounded predictor requires sampled signals");
            let q = grounded_posterior(step.pi0, config.params.gamma(), signal)?;
            Ok((1.0 + q) / 2.0)
        }
    }
}

/// Map trajectories to partial statistics in parallel, then merge them in
/// trajectory order so the result is independent of scheduling.
fn map_reduce<P, M>(config: &ExperimentConfig, map: M) -> Result<Vec<P>>
where
    P: Send,
    M: Fn(u64) -> Result<P> + Sync,
{
    let partials: Result<Vec<P>> = (0..config.n_trajectories as u64)
        .into_par_iter()
        .map(|i| map(derive_seed(config.master_seed, i)))
        .collect();
    partials
}

const N_BINS: usize = 10;

fn bin_for(p_alt: f64) -> usize {
    (((p_alt - 0.5) / 0.05) as usize).min(N_BINS - 1)
}

fn bin_edge(b: usize) -> f64 {
    0.5 + 0.05 * b as f64
}

#[derive(Clone, Copy, Default)]
struct BinTally {
    n: u64,
    alternated: u64,
    sum_p: f64,
}

impl BinTally {
    fn merge(&mut self, other: &BinTally) {
        self.n += other.n;
        self.alternated += other.alternated;
        self.sum_p += other.sum_p;
    }
}

/// Reliability of the predicted alternation probability, by decile bins of
/// the prediction.
///
/// The predicted probability is the exact conditional law of the process, so
/// per-bin empirical alternation frequencies must match the mean prediction
/// within binomial noise. Bins with too few samples are emitted flagged and
/// skipped by the pass gate.
pub fn run_calibration(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate(Experiment::Calibration)?;
    let with_signals = config.predictor == PredictorKind::Grounded;

    let partials = map_reduce(config, |seed| {
        let traj = sample_trajectory(&config.params, config.trajectory_length, seed, with_signals)?;
        let mut bins = [BinTally::default(); N_BINS];
        walk_predictions(&config.params, &traj, |step| {
            let p = predicted_p_alt(config, step)?;
            let b = &mut bins[bin_for(p)];
            b.n += 1;
            b.alternated += u64::from(step.alternated);
            b.sum_p += p;
            Ok(())
        })?;
        Ok(bins)
    })?;

    let mut merged = [BinTally::default(); N_BINS];
    for part in &partials {
        for (m, p) in merged.iter_mut().zip(part.iter()) {
            m.merge(p);
        }
    }

    Ok(merged
        .iter()
        .enumerate()
        .map(|(b, tally)| {
            frequency_record(
                config,
                Experiment::Calibration,
                "p_alt_bin",
                bin_edge(b),
                tally,
                None,
            )
        })
        .collect())
}

/// Build a frequency-vs-prediction record from one tally.
///
/// `fixed_prediction` overrides the tally's mean prediction (used when the
/// closed form is a constant, like the fair-coin 1/2).
fn frequency_record(
    config: &ExperimentConfig,
    experiment: Experiment,
    param: &str,
    value: f64,
    tally: &BinTally,
    fixed_prediction: Option<f64>,
) -> ExperimentRecord {
    let mut record = ExperimentRecord {
        experiment: experiment.name().to_string(),
        param: param.to_string(),
        value,
        samples: tally.n,
        estimate: None,
        std_error: None,
        prediction: fixed_prediction,
        deviation: None,
        sigma_band: config.sigma_band,
        pass: true,
        flag: None,
        aux: None,
    };
    if tally.n == 0 {
        record.flag = Some("empty".to_string());
        return record;
    }
    let estimate = tally.alternated as f64 / tally.n as f64;
    let mean_p = tally.sum_p / tally.n as f64;
    let prediction = fixed_prediction.unwrap_or(mean_p);
    let std_error = binomial_std_error(tally.alternated, tally.n);
    let deviation = (estimate - prediction).abs();
    record.estimate = Some(estimate);
    record.std_error = Some(std_error);
    record.prediction = Some(prediction);
    record.deviation = Some(deviation);
    if fixed_prediction.is_some() {
        record.aux = Some(mean_p);
    }
    if tally.n < config.min_bin_samples {
        record.flag = Some("insufficient_samples".to_string());
    } else {
        record.pass = deviation <= config.sigma_band * std_error;
    }
    record
}

/// The false-authority measurement.
///
/// Restricted to steps whose true regime is the fair coin, the empirical
/// alternation frequency must sit at 1/2 no matter how confident the
/// predictor is; the row's `aux` column reports that confidence (mean
/// predicted alternation probability above each cut). The gap between `aux`
/// and 1/2 is the measured false authority. Cuts are the decile lower edges;
/// a step enters the cut-`c` row when its prediction is at least `c`, so the
/// 0.5 row is the unconditioned baseline.
pub fn run_false_authority(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate(Experiment::FalseAuthority)?;
    let with_signals = config.predictor == PredictorKind::Grounded;

    let partials = map_reduce(config, |seed| {
        let traj = sample_trajectory(&config.params, config.trajectory_length, seed, with_signals)?;
        let mut cuts = [BinTally::default(); N_BINS];
        walk_predictions(&config.params, &traj, |step| {
            if step.regime != 1 {
                return Ok(());
            }
            let p = predicted_p_alt(config, step)?;
            for (c, tally) in cuts.iter_mut().enumerate() {
                if p >= bin_edge(c) {
                    tally.n += 1;
                    tally.alternated += u64::from(step.alternated);
                    tally.sum_p += p;
                }
            }
            Ok(())
        })?;
        Ok(cuts)
    })?;

    let mut merged = [BinTally::default(); N_BINS];
    for part in &partials {
        for (m, p) in merged.iter_mut().zip(part.iter()) {
            m.merge(p);
        }
    }

    Ok(merged
        .iter()
        .enumerate()
        .map(|(c, tally)| {
            frequency_record(
                config,
                Experiment::FalseAuthority,
                "confidence_cut",
                bin_edge(c),
                tally,
                Some(0.5),
            )
        })
        .collect())
}

#[derive(Clone, Copy, Default)]
struct ThresholdTally {
    n: u64,
    reversals: u64,
    rule: u64,
    agree: u64,
}

impl ThresholdTally {
    fn merge(&mut self, other: &ThresholdTally) {
        self.n += other.n;
        self.reversals += other.reversals;
        self.rule += other.rule;
        self.agree += other.agree;
    }
}

/// Posterior-odds reversal across a gamma sweep.
///
/// Conditioning on steps with a dominant misleading posterior, true regime 1,
/// and a corrective signal, the grounded posterior drops below 1/2 exactly
/// when gamma exceeds that step's own pi0. The comparison is deterministic
/// given pi0, so the record demands 100% per-step agreement between the
/// computed reversal and the rule; the trajectories exercise the pipeline
/// end to end rather than estimating a rate.
///
/// The chain draws live on a separate RNG stream from the signal draws, so
/// every gamma in the sweep sees the same tokens and regimes.
pub fn run_threshold_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate(Experiment::Threshold)?;
    let sweep = config.sweep.as_ref().expect("validated");

    let mut records = Vec::with_capacity(sweep.values.len());
    for &gamma in &sweep.values {
        let params = config.params.with_gamma(gamma)?;
        let partials = map_reduce(config, |seed| {
            let traj = sample_trajectory(&params, config.trajectory_length, seed, true)?;
            let mut tally = ThresholdTally::default();
            walk_predictions(&params, &traj, |step| {
                if step.pi0 <= 0.5 || step.regime != 1 || step.signal != Some(1) {
                    return Ok(());
                }
                let q = grounded_posterior(step.pi0, gamma, 1)?;
                let reversal = q < 0.5;
                let rule = gamma > dominance_threshold(step.pi0)?;
                tally.n += 1;
                tally.reversals += u64::from(reversal);
                tally.rule += u64::from(rule);
                tally.agree += u64::from(reversal == rule);
                Ok(())
            })?;
            Ok(tally)
        })?;

        let mut merged = ThresholdTally::default();
        for part in &partials {
            merged.merge(part);
        }

        let mut record = ExperimentRecord {
            experiment: Experiment::Threshold.name().to_string(),
            param: "gamma".to_string(),
            value: gamma,
            samples: merged.n,
            estimate: None,
            std_error: None,
            prediction: None,
            deviation: None,
            sigma_band: config.sigma_band,
            pass: true,
            flag: None,
            aux: None,
        };
        if merged.n == 0 {
            record.flag = Some("empty".to_string());
        } else {
            let estimate = merged.reversals as f64 / merged.n as f64;
            let prediction = merged.rule as f64 / merged.n as f64;
            record.estimate = Some(estimate);
            record.std_error = Some(binomial_std_error(merged.reversals, merged.n));
            record.prediction = Some(prediction);
            record.deviation = Some((estimate - prediction).abs());
            record.aux = Some(merged.agree as f64 / merged.n as f64);
            record.pass = merged.agree == merged.n;
        }
        records.push(record);
    }
    Ok(records)
}

#[derive(Clone, Default)]
struct TemperatureTally {
    n: u64,
    invalid: u64,
    sum_eps: f64,
    sum_alpha: f64,
}

impl TemperatureTally {
    fn merge(&mut self, other: &TemperatureTally) {
        self.n += other.n;
        self.invalid += other.invalid;
        self.sum_eps += other.sum_eps;
        self.sum_alpha += other.sum_alpha;
    }
}

/// Invalid-token rate under temperature-scaled decoding, on steps governed by
/// the deterministic regime.
///
/// For each temperature the harness decodes from the scaled marginal and
/// counts structurally invalid tokens; the rate must match the mean of
/// `eps(T)` over the encountered alternation probabilities within the sigma
/// band, and increase with `T`. Decode draws use a dedicated RNG stream per
/// sweep value so temperatures never perturb each other.
pub fn run_temperature_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    config.validate(Experiment::Temperature)?;
    let sweep = config.sweep.as_ref().expect("validated");
    let temperatures = &sweep.values;

    let partials = map_reduce(config, |seed| {
        let traj = sample_trajectory(&config.params, config.trajectory_length, seed, false)?;
        // pi0 at every regime-0 step, in trajectory order
        let mut alphas = Vec::new();
        walk_predictions(&config.params, &traj, |step| {
            if step.regime == 0 {
                alphas.push(marginal_predictive(step.pi0)?.p_alt());
            }
            Ok(())
        })?;

        let mut tallies = vec![TemperatureTally::default(); temperatures.len()];
        for (k, (&temperature, tally)) in temperatures.iter().zip(tallies.iter_mut()).enumerate() {
            let mut decode_rng = stream_rng(seed, DECODE_STREAM_BASE + k as u64);
            for &alpha in &alphas {
                let eps = structural_error_prob(alpha, temperature)?;
                tally.n += 1;
                tally.invalid += u64::from(decode_rng.gen_bool(eps));
                tally.sum_eps += eps;
                tally.sum_alpha += alpha;
            }
        }
        Ok(tallies)
    })?;

    let mut merged = vec![TemperatureTally::default(); temperatures.len()];
    for part in &partials {
        for (m, p) in merged.iter_mut().zip(part.iter()) {
            m.merge(p);
        }
    }

    Ok(temperatures
        .iter()
        .zip(merged.iter())
        .map(|(&temperature, tally)| {
            let mut record = ExperimentRecord {
                experiment: Experiment::Temperature.name().to_string(),
                param: "temperature".to_string(),
                value: temperature,
                samples: tally.n,
                estimate: None,
                std_error: None,
                prediction: None,
                deviation: None,
                sigma_band: config.sigma_band,
                pass: true,
                flag: None,
                aux: None,
            };
            if tally.n == 0 {
                record.flag = Some("empty".to_string());
                return record;
            }
            let estimate = tally.invalid as f64 / tally.n as f64;
            let prediction = tally.sum_eps / tally.n as f64;
            let std_error = binomial_std_error(tally.invalid, tally.n);
            let deviation = (estimate - prediction).abs();
            record.estimate = Some(estimate);
            record.std_error = Some(std_error);
            record.prediction = Some(prediction);
            record.deviation = Some(deviation);
            record.aux = Some(tally.sum_alpha / tally.n as f64);
            if tally.n < config.min_bin_samples {
                record.flag = Some("insufficient_samples".to_string());
            } else {
                record.pass = deviation <= config.sigma_band * std_error;
            }
            record
        })
        .collect())
}

/// Dispatch an experiment inside a scoped thread pool.
///
/// `workers = 0` uses the rayon default. The worker count cannot change the
/// result set: partial statistics are merged in trajectory order.
pub fn run_experiment(
    experiment: Experiment,
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<ExperimentRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool construction failed: {e}")))?;
    pool.install(|| match experiment {
        Experiment::Calibration => run_calibration(config),
        Experiment::FalseAuthority => run_false_authority(config),
        Experiment::Threshold => run_threshold_experiment(config),
        Experiment::Temperature => run_temperature_experiment(config),
    })
}

/// CSV columns, in their stable order.
pub const CSV_HEADER: [&str; 13] = [
    "experiment",
    "param",
    "value",
    "samples",
    "estimate",
    "std_error",
    "prediction",
    "deviation",
    "sigma_band",
    "pass",
    "flag",
    "aux",
    "config",
];

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Render records as RFC-quoted CSV with a mandatory header. Every row
/// carries the full config echo (as a JSON string) for provenance; numbers
/// use round-trip decimal formatting.
pub fn records_to_csv(records: &[ExperimentRecord], config: &ExperimentConfig) -> String {
    let config_json = serde_json::to_string(config).expect("config serializes");
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("header writes");
    for r in records {
        writer
            .write_record([
                r.experiment.clone(),
                r.param.clone(),
                fmt_f64(r.value),
                r.samples.to_string(),
                fmt_opt(r.estimate),
                fmt_opt(r.std_error),
                fmt_opt(r.prediction),
                fmt_opt(r.deviation),
                fmt_f64(r.sigma_band),
                r.pass.to_string(),
                r.flag.clone().unwrap_or_default(),
                fmt_opt(r.aux),
                config_json.clone(),
            ])
            .expect("record writes");
    }
    let bytes = writer.into_inner().expect("csv buffer");
    String::from_utf8(bytes).expect("csv is utf-8")
}

#[derive(Serialize)]
struct RecordLine<'a> {
    #[serde(flatten)]
    record: &'a ExperimentRecord,
    config: &'a ExperimentConfig,
}

/// Render records as JSON-lines; each line embeds the config echo.
pub fn records_to_jsonl(records: &[ExperimentRecord], config: &ExperimentConfig) -> String {
    let mut out = String::new();
    for record in records {
        let line = RecordLine { record, config };
        out.push_str(&serde_json::to_string(&line).expect("record serializes"));
        out.push('\n');
    }
    out
}
