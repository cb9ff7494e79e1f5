use thiserror::Error;

/// Errors shared across the toolkit.
///
/// Every constructor rejects out-of-range inputs instead of clamping them, so
/// invalid parameters surface here rather than as silently wrong numbers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument fell outside its legal range.
    #[error("{name} = {value} is outside the required range {required}")]
    Parameter {
        name: &'static str,
        value: f64,
        required: &'static str,
    },

    /// Trajectories need at least one governed emission.
    #[error("trajectory length must be at least 2, got {0}")]
    TrajectoryTooShort(usize),

    /// A token string contained something other than '0' or '1'.
    #[error("invalid token character at position {position}: expected '0' or '1'")]
    TokenString { position: usize },

    /// Path enumeration is exponential; refuse prefixes past the bound.
    #[error("prefix of length {len} exceeds the enumeration bound of {bound} tokens")]
    PrefixTooLong { len: usize, bound: usize },

    /// The observed token has zero likelihood under the current posterior.
    ///
    /// This only happens when the posterior is pinned on the deterministic
    /// regime (pi0 = 1) and the prefix breaks alternation: an inconsistent
    /// configuration, not data the model can produce.
    #[error("impossible observation at position {position}: alternation broke while the posterior excluded the random regime")]
    ImpossibleObservation { position: usize },

    /// The grounding signal has probability zero under both regime weights.
    #[error(
        "impossible evidence: signal r={signal} has probability zero at pi0={pi0}, gamma={gamma}"
    )]
    ImpossibleEvidence { pi0: f64, gamma: f64, signal: u8 },

    /// Action index outside the loss matrix.
    #[error("action {action} is unknown: the loss matrix has {actions} actions")]
    UnknownAction { action: usize, actions: usize },

    /// Loss matrix failed validation (shape, finiteness, nonnegativity).
    #[error("invalid loss matrix: {0}")]
    LossMatrix(String),

    /// Experiment configuration failed validation.
    #[error("invalid experiment config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
