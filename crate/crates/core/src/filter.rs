//! Exact text-only regime filtering.
//!
//! `pi0` tracks the posterior probability that Regime 0 (deterministic
//! alternation) governs the *next* emission given the tokens observed so far.
//! Each step is a Bayes update against the two emission laws followed by one
//! transition step of the symmetric regime chain, matching the indexing where
//! the posterior after `t` tokens refers to the regime governing token `t+1`.
//!
//! A brute-force path-enumeration oracle over all regime paths is provided
//! for validation; it is exponential and therefore bounded to short prefixes.

use crate::error::{Error, Result};
use crate::process::{emission_prob, ModelParams, ENUMERATION_BOUND};

/// The filtered regime posterior at one position.
///
/// `position` counts tokens conditioned on; `pi0` is the probability that the
/// deterministic regime governs the next emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorState {
    pi0: f64,
    position: usize,
}

impl PosteriorState {
    pub fn pi0(&self) -> f64 {
        self.pi0
    }

    pub fn position(&self) -> usize {
        self.position
    }
}

/// Posterior before any update: `pi_init` after seeing the (uninformative)
/// first token.
pub fn filter_init(params: &ModelParams) -> PosteriorState {
    PosteriorState {
        pi0: params.pi_init(),
        position: 1,
    }
}

/// One update-then-predict step of the filter.
///
/// Update weighs each regime by its emission likelihood for `new_token`
/// given `prev_token`; predict pushes the reweighted posterior through one
/// regime transition. The only zero-likelihood configuration is `pi0 = 1`
/// with a non-alternating token, reported as an impossible observation.
pub fn filter_step(
    state: &PosteriorState,
    prev_token: u8,
    new_token: u8,
    params: &ModelParams,
) -> Result<PosteriorState> {
    let g0 = state.pi0 * emission_prob(0, prev_token, new_token);
    let g1 = (1.0 - state.pi0) * emission_prob(1, prev_token, new_token);
    let total = g0 + g1;
    if total == 0.0 {
        return Err(Error::ImpossibleObservation {
            position: state.position + 1,
        });
    }
    let g0 = g0 / total;
    let g1 = g1 / total;
    let rho = params.rho();
    Ok(PosteriorState {
        pi0: g0 * rho + g1 * (1.0 - rho),
        position: state.position + 1,
    })
}

/// Fold the filter over a token prefix.
///
/// Element `t` (0-based) is the posterior after conditioning on the first
/// `t + 1` tokens, so the output has the same length as the input and the
/// first element is [`filter_init`].
pub fn filter_prefix(params: &ModelParams, tokens: &[u8]) -> Result<Vec<PosteriorState>> {
    if tokens.is_empty() {
        return Err(Error::Parameter {
            name: "tokens",
            value: 0.0,
            required: "a prefix of length >= 1",
        });
    }
    let mut out = Vec::with_capacity(tokens.len());
    let mut state = filter_init(params);
    out.push(state);
    for t in 1..tokens.len() {
        state = filter_step(&state, tokens[t - 1], tokens[t], params)?;
        out.push(state);
    }
    Ok(out)
}

/// Path-enumeration oracle for the filtered posterior.
///
/// Enumerates every regime path `z_2 .. z_n` (plus the transition to the next
/// regime), sums exact joint probabilities in linear scale, and returns
/// `P(z_{n+1} = 0 | tokens)`. Exponential in the prefix length; prefixes past
/// [`ENUMERATION_BOUND`] are refused.
pub fn brute_force_posterior(params: &ModelParams, tokens: &[u8]) -> Result<PosteriorState> {
    let n = tokens.len();
    if n == 0 {
        return Err(Error::Parameter {
            name: "tokens",
            value: 0.0,
            required: "a prefix of length >= 1",
        });
    }
    if n > ENUMERATION_BOUND {
        return Err(Error::PrefixTooLong {
            len: n,
            bound: ENUMERATION_BOUND,
        });
    }
    if n == 1 {
        // No governed emission yet: the posterior over z_2 is the prior.
        return Ok(PosteriorState {
            pi0: params.pi_init(),
            position: 1,
        });
    }

    let rho = params.rho();
    let pi_init = params.pi_init();
    let steps = n - 1;
    let mut numerator = 0.0f64;
    let mut evidence = 0.0f64;

    for mask in 0u64..(1u64 << steps) {
        // bit t of mask encodes z_{t+2}; weight includes the uniform first token
        let mut weight = 0.5;
        let mut prev_z = 0u8;
        for t in 0..steps {
            let z = ((mask >> t) & 1) as u8;
            weight *= if t == 0 {
                if z == 0 {
                    pi_init
                } else {
                    1.0 - pi_init
                }
            } else if z == prev_z {
                rho
            } else {
                1.0 - rho
            };
            weight *= emission_prob(z, tokens[t], tokens[t + 1]);
            if weight == 0.0 {
                break;
            }
            prev_z = z;
        }
        if weight == 0.0 {
            continue;
        }
        let last_z = ((mask >> (steps - 1)) & 1) as u8;
        let next_is_zero = if last_z == 0 { rho } else { 1.0 - rho };
        numerator += weight * next_is_zero;
        evidence += weight;
    }

    if evidence == 0.0 {
        // Same diagnosis as the filter: every path is inconsistent with the prefix.
        return Err(Error::ImpossibleObservation { position: n });
    }
    Ok(PosteriorState {
        pi0: numerator / evidence,
        position: n,
    })
}
