//! Decision layer: expected loss under a regime posterior, Bayes action
//! selection, and the regret of acting on the text-only posterior when better
//! information disagrees.
//!
//! Token probabilities are only proxies for expected loss; these helpers make
//! the translation explicit so experiments can show where the proxy breaks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Loss table `L(action, regime)` over the two latent regimes.
///
/// Row `a` holds `[L(a, 0), L(a, 1)]`. At least two actions are required and
/// every entry must be finite and nonnegative. Parses from a JSON
/// array-of-arrays, e.g. `[[0, 10], [1, 0]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct LossMatrix {
    rows: Vec<[f64; 2]>,
}

impl TryFrom<Vec<[f64; 2]>> for LossMatrix {
    type Error = Error;

    fn try_from(rows: Vec<[f64; 2]>) -> Result<Self> {
        LossMatrix::new(rows)
    }
}

impl From<LossMatrix> for Vec<[f64; 2]> {
    fn from(m: LossMatrix) -> Self {
        m.rows
    }
}

impl LossMatrix {
    pub fn new(rows: Vec<[f64; 2]>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::LossMatrix(format!(
                "need at least 2 actions, got {}",
                rows.len()
            )));
        }
        for (a, row) in rows.iter().enumerate() {
            for (z, loss) in row.iter().enumerate() {
                if !loss.is_finite() || *loss < 0.0 {
                    return Err(Error::LossMatrix(format!(
                        "L({a}, {z}) = {loss} must be finite and nonnegative"
                    )));
                }
            }
        }
        Ok(LossMatrix { rows })
    }

    /// 0-1 regime identification: action 0 declares Regime 0, action 1
    /// declares Regime 1, unit loss for a wrong declaration.
    pub fn zero_one() -> Self {
        LossMatrix {
            rows: vec![[0.0, 1.0], [1.0, 0.0]],
        }
    }

    /// 0-1 regime identification plus an abstain action with constant loss
    /// (the escalate-to-verification option; its cost is a modelling choice).
    pub fn zero_one_with_abstain(abstain_cost: f64) -> Result<Self> {
        LossMatrix::new(vec![[0.0, 1.0], [1.0, 0.0], [abstain_cost, abstain_cost]])
    }

    pub fn n_actions(&self) -> usize {
        self.rows.len()
    }

    pub fn loss(&self, action: usize, regime: usize) -> f64 {
        self.rows[action][regime]
    }
}

fn check_posterior(name: &'static str, pi0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&pi0) {
        return Err(Error::Parameter {
            name,
            value: pi0,
            required: "[0, 1]",
        });
    }
    Ok(())
}

/// Expected loss of `action` under the posterior `P(Z = 0) = posterior_pi0`.
pub fn expected_loss(posterior_pi0: f64, loss: &LossMatrix, action: usize) -> Result<f64> {
    check_posterior("posterior_pi0", posterior_pi0)?;
    if action >= loss.n_actions() {
        return Err(Error::UnknownAction {
            action,
            actions: loss.n_actions(),
        });
    }
    Ok(posterior_pi0 * loss.loss(action, 0) + (1.0 - posterior_pi0) * loss.loss(action, 1))
}

/// The expected-loss minimizer; ties break toward the lowest action id.
pub fn bayes_action(posterior_pi0: f64, loss: &LossMatrix) -> Result<usize> {
    check_posterior("posterior_pi0", posterior_pi0)?;
    let mut best = 0usize;
    let mut best_loss = expected_loss(posterior_pi0, loss, 0)?;
    for action in 1..loss.n_actions() {
        let l = expected_loss(posterior_pi0, loss, action)?;
        if l < best_loss {
            best = action;
            best_loss = l;
        }
    }
    Ok(best)
}

/// Regret of selecting the action under the text-only posterior and paying
/// for it under the informed posterior.
///
/// Nonnegative by construction: the informed Bayes action minimizes the very
/// expectation both terms are evaluated under.
pub fn decision_regret(pi0_textonly: f64, pi0_informed: f64, loss: &LossMatrix) -> Result<f64> {
    let chosen = bayes_action(pi0_textonly, loss)?;
    let best = bayes_action(pi0_informed, loss)?;
    Ok(expected_loss(pi0_informed, loss, chosen)? - expected_loss(pi0_informed, loss, best)?)
}
