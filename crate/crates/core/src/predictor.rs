//! Predictive distributions over the next token.
//!
//! Three predictors are compared throughout the toolkit: the text-only
//! marginal `(1 + pi0) / 2`, its temperature-scaled variant, and the
//! grounding-augmented predictor that treats the oracle signal as evidence
//! about the latent regime (or ignores it, when the signal semantics have not
//! been learned). `dominance_threshold` is the fidelity level above which a
//! corrective signal reverses the posterior odds.

use crate::error::{Error, Result};

/// Probability assigned to the alternating continuation `x = 1 - x_t`.
///
/// The non-alternating probability is `1 - p_alt` by construction, so a
/// single field fully describes the binary predictive law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictiveDistribution {
    p_alt: f64,
}

impl PredictiveDistribution {
    /// Wrap a raw alternation probability, validating the range.
    pub fn from_p_alt(p_alt: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_alt) {
            return Err(Error::Parameter {
                name: "p_alt",
                value: p_alt,
                required: "[0, 1]",
            });
        }
        Ok(PredictiveDistribution { p_alt })
    }

    pub fn p_alt(&self) -> f64 {
        self.p_alt
    }

    /// Probability of the non-alternating (structurally invalid in Regime 0)
    /// continuation.
    pub fn p_break(&self) -> f64 {
        1.0 - self.p_alt
    }
}

fn check_pi0(pi0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&pi0) {
        return Err(Error::Parameter {
            name: "pi0",
            value: pi0,
            required: "[0, 1]",
        });
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&gamma) {
        return Err(Error::Parameter {
            name: "gamma",
            value: gamma,
            required: "[1/2, 1]",
        });
    }
    Ok(())
}

/// Text-only marginal predictor: `p_alt = (1 + pi0) / 2`.
///
/// Mixing the deterministic regime (alternates surely) with the fair coin
/// pins `p_alt` inside `[1/2, 1]`.
pub fn marginal_predictive(pi0: f64) -> Result<PredictiveDistribution> {
    check_pi0(pi0)?;
    Ok(PredictiveDistribution {
        p_alt: (1.0 + pi0) / 2.0,
    })
}

/// Temperature-scale a binary predictive distribution.
///
/// `p' = p^(1/T) / (p^(1/T) + (1-p)^(1/T))`; `T = 1` is the identity and a
/// degenerate distribution (`p` in `{0, 1}`) is a fixed point for every
/// finite temperature, extending the formula continuously where it is
/// otherwise undefined.
pub fn temperature_scale(
    dist: PredictiveDistribution,
    temperature: f64,
) -> Result<PredictiveDistribution> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::Parameter {
            name: "temperature",
            value: temperature,
            required: "(0, inf)",
        });
    }
    let p = dist.p_alt;
    if p == 0.0 || p == 1.0 || temperature == 1.0 {
        return Ok(dist);
    }
    let inv_t = 1.0 / temperature;
    let a = p.powf(inv_t);
    let b = (1.0 - p).powf(inv_t);
    Ok(PredictiveDistribution { p_alt: a / (a + b) })
}

/// Probability of sampling the structurally invalid token at temperature `T`
/// when the unscaled alternation probability is `alpha`.
///
/// With `r = (1 - alpha) / alpha`, the invalid-token probability is
/// `eps(T) = r^(1/T) / (1 + r^(1/T))`, strictly increasing in `T`. At `T = 1`
/// the identity `eps(1) = 1 - alpha` is returned exactly.
pub fn structural_error_prob(alpha: f64, temperature: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha,
            required: "(1/2, 1)",
        });
    }
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::Parameter {
            name: "temperature",
            value: temperature,
            required: "(0, inf)",
        });
    }
    if temperature == 1.0 {
        return Ok(1.0 - alpha);
    }
    let r = (1.0 - alpha) / alpha;
    let x = r.powf(1.0 / temperature);
    Ok(x / (1.0 + x))
}

/// Bayes update of the regime posterior on one oracle emission.
///
/// A corrective signal `r = 1` asserts the random regime, so the regime-0
/// likelihood is `1 - gamma`; the symmetric `r = 0` branch asserts the
/// deterministic regime. A zero denominator means the observed signal has
/// probability zero under the stated posterior and fidelity.
pub fn grounded_posterior(pi0: f64, gamma: f64, signal: u8) -> Result<f64> {
    check_pi0(pi0)?;
    check_gamma(gamma)?;
    assert!(signal <= 1, "binary signal required");
    let (num, den) = if signal == 1 {
        let num = (1.0 - gamma) * pi0;
        (num, num + gamma * (1.0 - pi0))
    } else {
        let num = gamma * pi0;
        (num, num + (1.0 - gamma) * (1.0 - pi0))
    };
    if den == 0.0 {
        return Err(Error::ImpossibleEvidence { pi0, gamma, signal });
    }
    Ok(num / den)
}

/// Grounding-augmented predictor.
///
/// `aware = true` models learned conditional availability: the signal is
/// treated as evidence and `p_alt = (1 + q) / 2` with `q` the grounded
/// posterior. `aware = false` is the minimal failure of that assumption: the
/// signal is present but unused and the prediction falls back to the
/// text-only marginal.
pub fn augmented_predictive(
    pi0: f64,
    gamma: f64,
    signal: u8,
    aware: bool,
) -> Result<PredictiveDistribution> {
    if !aware {
        check_gamma(gamma)?;
        return marginal_predictive(pi0);
    }
    let q = grounded_posterior(pi0, gamma, signal)?;
    Ok(PredictiveDistribution {
        p_alt: (1.0 + q) / 2.0,
    })
}

/// Fidelity above which a corrective signal reverses the posterior odds.
///
/// In the dominant-prior regime (`pi0 > 1/2`) the threshold equals `pi0`
/// itself: `grounded_posterior(pi0, gamma, 1) < 1/2` exactly when
/// `gamma > pi0`.
pub fn dominance_threshold(pi0: f64) -> Result<f64> {
    if !(pi0 > 0.5 && pi0 < 1.0) {
        return Err(Error::Parameter {
            name: "pi0",
            value: pi0,
            required: "(1/2, 1) (dominant misleading prior)",
        });
    }
    Ok(pi0)
}
