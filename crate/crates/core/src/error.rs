use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable `{0}` is not bound in the evaluation point")]
    UnboundVariable(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable lists differ: {0}")]
    VariableMismatch(String),

    #[error("composition exceeded the term cap of {cap} terms")]
    CompositionOverflow { cap: usize },

    #[error("location `{location}` evaluated to {value:e}, below the round-off tolerance")]
    NegativeProbability { location: String, value: f64 },

    #[error("invalid coefficient `{0}`")]
    InvalidCoefficient(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no pseudothreshold for `{location}` at level {level}: {reason}")]
    NoPseudothreshold {
        location: String,
        level: u32,
        reason: String,
    },

    #[error("pseudothresholds did not converge by level {level} (last two values {previous:e}, {last:e})")]
    NotConverged {
        level: u32,
        previous: f64,
        last: f64,
    },

    #[error("setting error: {0}")]
    Setting(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("fault enumeration over {count} fallible locations exceeds the cap of {cap}")]
    EnumerationTooLarge { count: usize, cap: usize },

    #[error("derived maps disagree: {0}")]
    DerivationInconsistency(String),

    #[error("fit failed: {0}")]
    Fit(String),
}
