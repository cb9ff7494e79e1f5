//! Entropy and mutual-information analytics, all in bits.
//!
//! The central quantity is the sufficiency gap: the true regime-conditional
//! next-token entropy (one full bit under the random regime) minus the
//! entropy of the text-only mixture prediction. The gap is positive whenever
//! the posterior places any weight on the deterministic regime, and the
//! pointwise mutual information between the next token and the latent regime
//! measures exactly the information the prefix fails to pin down.

use crate::error::{Error, Result};
use crate::predictor::grounded_posterior;

/// Entropies around one posterior value, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// Entropy of the text-only mixture prediction.
    pub h_marginal: f64,
    /// Entropy of the true conditional law (1 bit under the random regime).
    pub h_true_conditional: f64,
    /// `h_true_conditional - h_marginal`, the sufficiency gap.
    pub gap: f64,
    /// The posterior the report was computed at.
    pub pi0: f64,
}

/// Binary entropy `H2(p)` in bits, with the `0 * log 0 = 0` convention.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter {
            name: "p",
            value: p,
            required: "[0, 1]",
        });
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-(p * p.log2() + (1.0 - p) * (1.0 - p).log2()))
}

/// Entropy of the text-only mixture: `H2((1 + pi0) / 2)`.
///
/// Equals one bit iff `pi0 = 0` and is strictly decreasing on `(0, 1)`.
pub fn mixture_entropy(pi0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&pi0) {
        return Err(Error::Parameter {
            name: "pi0",
            value: pi0,
            required: "[0, 1]",
        });
    }
    binary_entropy((1.0 + pi0) / 2.0)
}

/// The sufficiency gap when the true regime is the random one.
///
/// The true conditional entropy is one full bit; the text-only marginal
/// predicts with entropy `mixture_entropy(pi0)`, so the gap is positive
/// exactly when `pi0 > 0`.
pub fn sufficiency_gap(pi0: f64) -> Result<EntropyReport> {
    let h_marginal = mixture_entropy(pi0)?;
    let h_true_conditional = 1.0;
    Ok(EntropyReport {
        h_marginal,
        h_true_conditional,
        gap: h_true_conditional - h_marginal,
        pi0,
    })
}

/// Pointwise mutual information `I(X_{t+1}; Z_{t+1} | history)` in bits.
///
/// Closed form for this model: `H2((1 + pi0) / 2) - (1 - pi0)`, the marginal
/// next-token entropy minus the posterior-weighted conditional entropies
/// (zero under the deterministic regime, one bit under the random one).
/// Nonnegative, zero exactly at `pi0` in `{0, 1}`.
pub fn pointwise_mutual_info(pi0: f64) -> Result<f64> {
    let h_marginal = mixture_entropy(pi0)?;
    Ok(h_marginal - (1.0 - pi0))
}

/// Expected residual mutual information after observing the oracle signal.
///
/// Averages the pointwise mutual information at the grounded posterior over
/// the signal's marginal law, `P(R = r) = sum_k P(r | Z = k) P(Z = k)`.
/// Signal values with probability exactly zero contribute nothing and are
/// skipped, which also sidesteps the degenerate zero-denominator updates that
/// can only occur on those measure-zero branches. Never exceeds
/// `pointwise_mutual_info(pi0)` and vanishes at `gamma = 1`.
pub fn expected_residual_mi(pi0: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&pi0) {
        return Err(Error::Parameter {
            name: "pi0",
            value: pi0,
            required: "[0, 1]",
        });
    }
    if !(0.5..=1.0).contains(&gamma) {
        return Err(Error::Parameter {
            name: "gamma",
            value: gamma,
            required: "[1/2, 1]",
        });
    }
    let mut total = 0.0;
    for signal in [0u8, 1] {
        let p_signal = if signal == 1 {
            (1.0 - gamma) * pi0 + gamma * (1.0 - pi0)
        } else {
            gamma * pi0 + (1.0 - gamma) * (1.0 - pi0)
        };
        if p_signal == 0.0 {
            continue;
        }
        let q = grounded_posterior(pi0, gamma, signal)?;
        total += p_signal * pointwise_mutual_info(q)?;
    }
    Ok(total)
}

/// Predictive entropy after a corrective signal: `H2((1 + q) / 2)` with
/// `q = grounded_posterior(pi0, gamma, 1)`.
///
/// Reaches the full bit (gap closed) iff `gamma = 1`.
pub fn entropy_after_grounding(pi0: f64, gamma: f64) -> Result<f64> {
    if !(pi0 > 0.0 && pi0 < 1.0) {
        return Err(Error::Parameter {
            name: "pi0",
            value: pi0,
            required: "(0, 1)",
        });
    }
    let q = grounded_posterior(pi0, gamma, 1)?;
    binary_entropy((1.0 + q) / 2.0)
}

/// The model's internal confidence measure.
///
/// Alias of [`mixture_entropy`] under its own name: the quantity a text-only
/// predictor can compute about itself. It depends only on `pi0`, never on the
/// realized regime, which is precisely why it cannot express the sufficiency
/// gap.
pub fn internal_entropy(pi0: f64) -> Result<f64> {
    mixture_entropy(pi0)
}
