//! The generative model: a latent two-state Markov regime chain, binary token
//! emissions conditioned on the regime, and an optional noisy oracle signal.
//!
//! Regime 0 is deterministic: the next token always alternates, `x_{t+1} = 1 - x_t`.
//! Regime 1 is an independent fair coin. The regime chain is symmetric with
//! retention probability `rho`, and the oracle emits the true regime with
//! fidelity `gamma` (independently per step).
//!
//! Indexing convention: the latent variable `z_{t+1}` governs the emission of
//! token `x_{t+1}`, so a trajectory of `n` tokens carries `n - 1` regimes
//! (`z_2 .. z_n`) and, when requested, `n - 1` signals (`r_2 .. r_n`).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum prefix length accepted by the path-enumeration oracle.
pub const ENUMERATION_BOUND: usize = 20;

/// The full generative specification.
///
/// Construction validates every field; out-of-range values are rejected, never
/// clamped. `rho` is the regime retention probability (strictly between 1/2
/// and 1), `pi_init` the prior that Regime 0 governs the first governed
/// emission, and `gamma` the oracle fidelity in `[1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    rho: f64,
    pi_init: f64,
    gamma: f64,
}

/// Unvalidated mirror of [`ModelParams`] used for (de)serialization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    rho: f64,
    pi_init: f64,
    gamma: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.rho, raw.pi_init, raw.gamma)
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            rho: p.rho,
            pi_init: p.pi_init,
            gamma: p.gamma,
        }
    }
}

impl ModelParams {
    pub fn new(rho: f64, pi_init: f64, gamma: f64) -> Result<Self> {
        if !(rho > 0.5 && rho < 1.0) {
            return Err(Error::Parameter {
                name: "rho",
                value: rho,
                required: "(1/2, 1)",
            });
        }
        if !(0.0..=1.0).contains(&pi_init) {
            return Err(Error::Parameter {
                name: "pi_init",
                value: pi_init,
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
        Ok(ModelParams {
            rho,
            pi_init,
            gamma,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn pi_init(&self) -> f64 {
        self.pi_init
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same chain and prior, different oracle fidelity.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        ModelParams::new(self.rho, self.pi_init, gamma)
    }
}

/// The symmetric 2x2 regime transition matrix for retention probability `rho`.
///
/// Diagonal entries are `rho`, off-diagonal `1 - rho`; each row sums to 1
/// exactly (the IEEE subtraction `1 - rho` is exact for `rho` in `(1/2, 1)`).
pub fn transition_matrix(rho: f64) -> Result<[[f64; 2]; 2]> {
    if !(rho > 0.5 && rho < 1.0) {
        return Err(Error::Parameter {
            name: "rho",
            value: rho,
            required: "(1/2, 1)",
        });
    }
    let leave = 1.0 - rho;
    Ok([[rho, leave], [leave, rho]])
}

/// Emission probability `P(token | regime, prev_token)`.
///
/// Regime 0 alternates with certainty; Regime 1 is a fair coin. Total on
/// binary inputs; panics on non-binary arguments (a programming error, not a
/// data condition).
pub fn emission_prob(regime: u8, prev_token: u8, token: u8) -> f64 {
    assert!(
        regime <= 1 && prev_token <= 1 && token <= 1,
        "binary inputs required"
    );
    match regime {
        0 => {
            if token == 1 - prev_token {
                1.0
            } else {
                0.0
            }
        }
        _ => 0.5,
    }
}

/// Derive an independent child seed from a master seed and an index.
///
/// SplitMix64 finalizer over `master + (index + 1) * golden_gamma`: child
/// streams are decorrelated and the derivation is order-free, so sweeps can
/// process trajectories in any order (or in parallel) and reproduce the same
/// per-trajectory randomness.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ChaCha stream ids carve one trajectory seed into independent draw streams.
// Keeping signals off the chain stream means the sampled tokens and regimes
// are identical whether or not signals are requested, and identical across a
// gamma sweep that shares the master seed.
const STREAM_CHAIN: u64 = 0;
const STREAM_SIGNALS: u64 = 1;
/// First stream id reserved for decode draws; stream `DECODE_STREAM_BASE + k`
/// belongs to the k-th sweep value of a decoding experiment.
pub(crate) const DECODE_STREAM_BASE: u64 = 2;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One sampled realization of the process.
///
/// `tokens` holds `x_1 .. x_n`; `regimes` holds `z_2 .. z_n` (the regime
/// governing each emission after the first); `signals`, when present, holds
/// the oracle emissions `r_2 .. r_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    tokens: Vec<u8>,
    regimes: Vec<u8>,
    signals: Option<Vec<u8>>,
    seed: u64,
}

impl Trajectory {
    /// Validated assembly from raw parts (used by deserialization and tests).
    pub fn from_parts(
        tokens: Vec<u8>,
        regimes: Vec<u8>,
        signals: Option<Vec<u8>>,
        seed: u64,
    ) -> Result<Self> {
        if tokens.len() < 2 {
            return Err(Error::TrajectoryTooShort(tokens.len()));
        }
        let expect = tokens.len() - 1;
        if regimes.len() != expect {
            return Err(Error::Config(format!(
                "regime count {} does not match token count {} (want {})",
                regimes.len(),
                tokens.len(),
                expect
            )));
        }
        if let Some(sig) = &signals {
            if sig.len() != expect {
                return Err(Error::Config(format!(
                    "signal count {} does not match token count {} (want {})",
                    sig.len(),
                    tokens.len(),
                    expect
                )));
            }
        }
        for (t, z) in regimes.iter().enumerate() {
            if *z == 0 && tokens[t + 1] != 1 - tokens[t] {
                return Err(Error::Config(format!(
                    "regime 0 at step {} but token does not alternate",
                    t + 2
                )));
            }
        }
        Ok(Trajectory {
            tokens,
            regimes,
            signals,
            seed,
        })
    }

    pub fn tokens(&self) -> &[u8] {
        &self.tokens
    }

    pub fn regimes(&self) -> &[u8] {
        &self.regimes
    }

    pub fn signals(&self) -> Option<&[u8]> {
        self.signals.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Serialize as one JSON line (seed, params, token/regime/signal strings).
    pub fn to_json_line(&self, params: &ModelParams) -> String {
        let line = TrajectoryLine {
            seed: self.seed,
            rho: params.rho(),
            pi_init: params.pi_init(),
            gamma: params.gamma(),
            tokens: bits_to_string(&self.tokens),
            regimes: bits_to_string(&self.regimes),
            signals: self.signals.as_deref().map(bits_to_string),
        };
        serde_json::to_string(&line).expect("trajectory line serializes")
    }

    /// Parse one JSON line back into parameters and a validated trajectory.
    pub fn from_json_line(line: &str) -> Result<(ModelParams, Trajectory)> {
        let line: TrajectoryLine = serde_json::from_str(line)
            .map_err(|e| Error::Config(format!("malformed trajectory line: {e}")))?;
        let params = ModelParams::new(line.rho, line.pi_init, line.gamma)?;
        let tokens = parse_bit_string(&line.tokens)?;
        let regimes = parse_bit_string(&line.regimes)?;
        let signals = line.signals.as_deref().map(parse_bit_string).transpose()?;
        let traj = Trajectory::from_parts(tokens, regimes, signals, line.seed)?;
        Ok((params, traj))
    }
}

#[derive(Serialize, Deserialize)]
struct TrajectoryLine {
    seed: u64,
    rho: f64,
    pi_init: f64,
    gamma: f64,
    tokens: String,
    regimes: String,
    signals: Option<String>,
}

/// Render bits as a compact '0'/'1' string.
pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|b| if *b == 0 { '0' } else { '1' })
        .collect()
}

/// Parse a '0'/'1' string; the error reports the 1-based offending position.
pub fn parse_bit_string(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::TokenString { position: i + 1 }),
        })
        .collect()
}

/// Sample a trajectory of `length` tokens, deterministically from `seed`.
///
/// The first token is uniform binary and independent of the regime chain, so
/// it carries no regime information and the filter can initialize at exactly
/// `pi_init`. The first governed regime `z_2` is drawn from `pi_init`
/// directly; later regimes follow the symmetric transition matrix. Identical
/// `(params, length, seed, with_signals)` reproduce the identical trajectory
/// bit for bit, and the token/regime draws do not depend on `with_signals`.
pub fn sample_trajectory(
    params: &ModelParams,
    length: usize,
    seed: u64,
    with_signals: bool,
) -> Result<Trajectory> {
    if length < 2 {
        return Err(Error::TrajectoryTooShort(length));
    }
    let steps = length - 1;
    let mut chain = stream_rng(seed, STREAM_CHAIN);

    let mut tokens = Vec::with_capacity(length);
    let mut regimes = Vec::with_capacity(steps);
    tokens.push(chain.gen_range(0..2u8));

    let mut regime = if chain.gen_bool(params.pi_init) {
        0u8
    } else {
        1u8
    };
    for t in 0..steps {
        if t > 0 {
            // symmetric chain: retain with probability rho
            if !chain.gen_bool(params.rho) {
                regime = 1 - regime;
            }
        }
        regimes.push(regime);
        let prev = *tokens.last().expect("nonempty");
        let token = match regime {
            0 => 1 - prev,
            _ => chain.gen_range(0..2u8),
        };
        tokens.push(token);
    }

    let signals = if with_signals {
        let mut sig_rng = stream_rng(seed, STREAM_SIGNALS);
        Some(
            regimes
                .iter()
                .map(|z| {
                    if sig_rng.gen_bool(params.gamma) {
                        *z
                    } else {
                        1 - *z
                    }
                })
                .collect(),
        )
    } else {
        None
    };

    Ok(Trajectory {
        tokens,
        regimes,
        signals,
        seed,
    })
}
