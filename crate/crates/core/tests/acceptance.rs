//! Acceptance suite: every release-gating check, one test per criterion.
//!
//! Each test prints a single `criterion N (<name>): PASS` line when it
//! succeeds (visible with `cargo test --test acceptance -- --nocapture`);
//! a failed assertion marks the criterion failed through the harness.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mixregime::decision::{bayes_action, decision_regret, LossMatrix};
use mixregime::filter::{brute_force_posterior, filter_prefix};
use mixregime::infotheory::{
    entropy_after_grounding, expected_residual_mi, mixture_entropy, pointwise_mutual_info,
    sufficiency_gap,
};
use mixregime::montecarlo::{
    all_records_pass, records_to_csv, run_calibration, run_experiment, run_false_authority,
    run_temperature_experiment, run_threshold_experiment, Experiment,
};
use mixregime::predictor::{grounded_posterior, structural_error_prob};
use mixregime::process::ModelParams;

const RHO_GRID: [f64; 4] = [0.6, 0.75, 0.9, 0.99];
const PI_INIT_GRID: [f64; 3] = [0.1, 0.5, 0.9];

/// Criterion 1: the forward filter agrees with the path-enumeration oracle on
/// every binary prefix up to length 12, across the parameter grids, to 1e-12.
#[test]
fn criterion_1_oracle_equivalence() {
    let mut max_dev = 0.0f64;
    let mut checked = 0u64;
    for rho in RHO_GRID {
        for pi_init in PI_INIT_GRID {
            let params = ModelParams::new(rho, pi_init, 0.9).unwrap();
            for len in 1..=12usize {
                for mask in 0u32..(1u32 << len) {
                    let tokens: Vec<u8> = (0..len).map(|i| ((mask >> i) & 1) as u8).collect();
                    let filtered = filter_prefix(&params, &tokens).unwrap();
                    let oracle = brute_force_posterior(&params, &tokens).unwrap();
                    let dev = (filtered.last().unwrap().pi0() - oracle.pi0()).abs();
                    max_dev = max_dev.max(dev);
                    checked += 1;
                }
            }
        }
    }
    assert!(
        max_dev <= 1e-12,
        "max |filter - enumeration| = {max_dev} over {checked} prefixes"
    );
    println!("criterion 1 (oracle equivalence, max dev {max_dev:.3e}): PASS");
}

/// Criterion 2: the sufficiency gap is positive on (0, 1], zero at 0, the
/// mixture entropy strictly decreases, and its finite-difference derivative
/// matches the closed form within 1e-6.
#[test]
fn criterion_2_sufficiency_gap() {
    assert_eq!(sufficiency_gap(0.0).unwrap().gap, 0.0);
    let n = 1000;
    let mut last_entropy = f64::INFINITY;
    for i in 1..=n {
        let pi0 = i as f64 / n as f64;
        let report = sufficiency_gap(pi0).unwrap();
        assert!(report.gap > 0.0, "gap must be positive at pi0={pi0}");
        assert!(
            report.h_marginal < last_entropy,
            "mixture entropy must strictly decrease at pi0={pi0}"
        );
        last_entropy = report.h_marginal;
        if pi0 < 1.0 {
            // central difference; the closed-form derivative diverges at 1
            let h = 1e-6;
            let fd =
                (mixture_entropy(pi0 + h).unwrap() - mixture_entropy(pi0 - h).unwrap()) / (2.0 * h);
            let closed = 0.5 * ((1.0 - pi0) / (1.0 + pi0)).log2();
            assert!(
                (fd - closed).abs() < 1e-6,
                "derivative mismatch at pi0={pi0}: {fd} vs {closed}"
            );
        }
    }
    println!("criterion 2 (sufficiency gap + mixture-entropy monotonicity): PASS");
}

/// Criterion 3: structural error is strictly increasing in temperature across
/// the grid for every alpha, the spot values hold, and the Monte Carlo
/// invalid-token rates match the closed form within 4 sigma with ordered,
/// non-overlapping 3 sigma bands.
#[test]
fn criterion_3_temperature() {
    let temperatures = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    for j in 0..99 {
        let alpha = 0.505 + j as f64 * (0.995 - 0.505) / 98.0;
        let mut last = -1.0;
        for t in temperatures {
            let eps = structural_error_prob(alpha, t).unwrap();
            assert!(eps > last, "eps not increasing at alpha={alpha}, T={t}");
            last = eps;
        }
    }
    assert_eq!(structural_error_prob(0.75, 1.0).unwrap(), 0.25);
    let eps2 = structural_error_prob(0.75, 2.0).unwrap();
    assert!((eps2 - 0.36603).abs() <= 1e-5);
    assert!((eps2 - 0.366_025_403_784_438_65).abs() <= 1e-12);

    // Monte Carlo counterpart at one million decoded regime-0 steps.
    let config = Experiment::Temperature.default_config();
    let records = run_temperature_experiment(&config).unwrap();
    assert!(records.iter().all(|r| r.flag.is_none()));
    assert!(
        records[0].samples >= 1_000_000 / 2,
        "want about 1e6 conditioned steps, got {}",
        records[0].samples
    );
    for r in &records {
        assert!(
            r.deviation.unwrap() <= 4.0 * r.std_error.unwrap(),
            "T={}: deviation {} vs sigma {}",
            r.value,
            r.deviation.unwrap(),
            r.std_error.unwrap()
        );
    }
    for pair in records.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        assert!(
            lo.estimate.unwrap() + 3.0 * lo.std_error.unwrap()
                < hi.estimate.unwrap() - 3.0 * hi.std_error.unwrap(),
            "3 sigma bands overlap between T={} and T={}",
            lo.value,
            hi.value
        );
    }
    println!("criterion 3 (temperature monotonicity, closed form + Monte Carlo): PASS");
}

/// Criterion 4: the grounded posterior crosses 1/2 exactly at gamma = pi0
/// (within 1e-12 on the boundary), with the spot values from the Bayes
/// formula.
#[test]
fn criterion_4_dominance_threshold() {
    for i in 1..50 {
        let pi0 = 0.5 + 0.01 * i as f64;
        for j in 0..=50 {
            let gamma = 0.5 + 0.01 * j as f64;
            let q = grounded_posterior(pi0, gamma, 1).unwrap();
            assert_eq!(
                q < 0.5,
                gamma > pi0,
                "reversal mismatch at pi0={pi0}, gamma={gamma}"
            );
        }
        let balanced = grounded_posterior(pi0, pi0, 1).unwrap();
        assert!((balanced - 0.5).abs() <= 1e-12);
    }
    let q = grounded_posterior(0.9, 0.8, 1).unwrap();
    assert!((q - 0.69231).abs() <= 1e-5);
    let q = grounded_posterior(0.9, 0.95, 1).unwrap();
    assert!((q - 0.32143).abs() <= 1e-5);
    println!("criterion 4 (dominance threshold + grounded posterior spots): PASS");
}

/// Criterion 5: grounding closes the entropy gap exactly at gamma = 1; below
/// that the residual gap stays positive and shrinks as fidelity rises.
#[test]
fn criterion_5_gap_closure() {
    for i in 1..20 {
        let pi0 = i as f64 / 20.0;
        assert_eq!(entropy_after_grounding(pi0, 1.0).unwrap(), 1.0);
        let mut last_gap = f64::INFINITY;
        for gamma in [0.8, 0.9, 0.99] {
            let gap = 1.0 - entropy_after_grounding(pi0, gamma).unwrap();
            assert!(
                gap > 0.0,
                "gap must remain open at pi0={pi0}, gamma={gamma}"
            );
            assert!(
                gap < last_gap,
                "gap must shrink with fidelity at pi0={pi0}, gamma={gamma}"
            );
            last_gap = gap;
        }
    }
    println!("criterion 5 (gap reduction vs closure): PASS");
}

/// Criterion 6: at rho = 0.9, pi_init = 0.5, one million sampled steps:
/// (a) at least 99% of populated deciles calibrate within 4 sigma;
/// (b) conditioned on the random regime the process alternates at 1/2 while
/// the predictor's mean confidence exceeds 0.6.
#[test]
fn criterion_6_calibration_and_false_authority() {
    let config = Experiment::Calibration.default_config();
    assert_eq!(
        config.n_trajectories * (config.trajectory_length - 1),
        1_000_000
    );

    let records = run_calibration(&config).unwrap();
    let populated: Vec<_> = records.iter().filter(|r| r.flag.is_none()).collect();
    assert!(!populated.is_empty());
    let passing = populated.iter().filter(|r| r.pass).count();
    let fraction = passing as f64 / populated.len() as f64;
    assert!(
        fraction >= 0.99,
        "only {passing}/{} deciles calibrated within 4 sigma",
        populated.len()
    );

    let records = run_false_authority(&config).unwrap();
    let base = &records[0];
    assert_eq!(base.value, 0.5);
    let dev = (base.estimate.unwrap() - 0.5).abs();
    assert!(
        dev <= 4.0 * base.std_error.unwrap(),
        "conditioned alternation {} is not 1/2 within 4 sigma",
        base.estimate.unwrap()
    );
    assert!(
        base.aux.unwrap() > 0.6,
        "mean predicted p_alt {} should exceed 0.6",
        base.aux.unwrap()
    );
    println!("criterion 6 (calibration + false-authority divergence at 1e6 steps): PASS");
}

/// Criterion 7: the closed-form pointwise MI equals exhaustive enumeration of
/// the joint within 1e-12, and residual MI is monotone nonincreasing in
/// gamma, vanishing at gamma = 1.
#[test]
fn criterion_7_mi_diagnostics() {
    // independent enumeration over the (regime, token) joint
    #[allow(clippy::needless_range_loop)]
    fn enumeration_mi(pi0: f64) -> f64 {
        let pz = [pi0, 1.0 - pi0];
        let px_given_z = [[0.0, 1.0], [0.5, 0.5]]; // [z][x], x=1 alternating
        let mut px = [0.0f64; 2];
        for z in 0..2 {
            for x in 0..2 {
                px[x] += pz[z] * px_given_z[z][x];
            }
        }
        let mut mi = 0.0;
        for z in 0..2 {
            for x in 0..2 {
                let joint = pz[z] * px_given_z[z][x];
                if joint > 0.0 {
                    mi += joint * (joint / (pz[z] * px[x])).log2();
                }
            }
        }
        mi
    }

    let n = 500;
    for i in 0..=n {
        let pi0 = i as f64 / n as f64;
        let closed = pointwise_mutual_info(pi0).unwrap();
        assert!(
            (closed - enumeration_mi(pi0)).abs() <= 1e-12,
            "MI mismatch at pi0={pi0}"
        );
    }
    for i in 1..20 {
        let pi0 = i as f64 / 20.0;
        let mut last = f64::INFINITY;
        for j in 0..=50 {
            let gamma = 0.5 + 0.01 * j as f64;
            let residual = expected_residual_mi(pi0, gamma).unwrap();
            assert!(
                residual <= last + 1e-15,
                "residual MI increased at pi0={pi0}, gamma={gamma}"
            );
            last = residual;
        }
        assert_eq!(expected_residual_mi(pi0, 1.0).unwrap(), 0.0);
    }
    println!("criterion 7 (MI closed form vs enumeration, residual monotone): PASS");
}

/// Criterion 8: regret is nonnegative on ten thousand random instances, and
/// under 0-1 regime loss the Bayes action flips exactly when gamma crosses
/// the dominance threshold.
#[test]
fn criterion_8_decision_layer() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDEC1_5105);
    for _ in 0..10_000 {
        let text: f64 = rng.gen();
        let informed: f64 = rng.gen();
        let rows = vec![
            [rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0],
            [rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0],
        ];
        let loss = LossMatrix::new(rows).unwrap();
        let regret = decision_regret(text, informed, &loss).unwrap();
        assert!(regret >= 0.0, "negative regret {regret}");
    }

    let loss = LossMatrix::zero_one();
    for i in 1..20 {
        let pi0 = 0.5 + 0.025 * i as f64;
        for j in 0..=20 {
            let gamma = 0.5 + 0.025 * j as f64;
            let q = grounded_posterior(pi0, gamma, 1).unwrap();
            let action = bayes_action(q, &loss).unwrap();
            // above the threshold the posterior reverses and the action flips
            let expect = if gamma > pi0 { 1 } else { 0 };
            assert_eq!(action, expect, "pi0={pi0} gamma={gamma} q={q}");
        }
    }
    println!("criterion 8 (decision regret + threshold-linked action flip): PASS");
}

/// Criterion 9: identical configs and master seed produce byte-identical CSV
/// under different worker counts, for every experiment.
#[test]
fn criterion_9_reproducibility() {
    for experiment in Experiment::ALL {
        let mut config = experiment.default_config();
        // trimmed sizes keep the matrix fast; determinism does not depend on N
        config.n_trajectories = config.n_trajectories.min(300);
        let runs: Vec<String> = [1usize, 4]
            .iter()
            .map(|&workers| {
                let records = run_experiment(experiment, &config, workers).unwrap();
                records_to_csv(&records, &config)
            })
            .collect();
        assert_eq!(
            runs[0], runs[1],
            "{experiment}: worker count changed the CSV"
        );
    }
    // and the sweep experiments still pass their own gates on a second run
    let threshold = run_threshold_experiment(&Experiment::Threshold.default_config()).unwrap();
    assert!(all_records_pass(&threshold));
    println!("criterion 9 (byte-identical CSV across worker counts): PASS");
}
