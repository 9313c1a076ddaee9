use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported gate `{name}` at {line}:{column}")]
    UnsupportedGate {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("width mismatch: {0}")]
    WidthMismatch(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("circuit contains MEASURE; fold the unitary body only")]
    MeasureInFold,

    #[error("missing calibration entry: {0}")]
    MissingCalibration(String),

    #[error("invalid device model: {0}")]
    InvalidDevice(String),

    #[error("circuit width {width} exceeds simulator maximum {max}")]
    WidthExceedsMaximum { width: usize, max: usize },

    #[error("observable `{0}` is not diagonal (only I and Z are supported)")]
    NonDiagonalObservable(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("circuit reliability is zero; extrapolation is undefined")]
    ZeroReliability,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("no cut within budget of {budget} cuts")]
    NoCutWithinBudget { budget: usize },

    #[error("invalid cut plan: {0}")]
    InvalidCutPlan(String),

    #[error("missing variant result: {0}")]
    MissingVariant(String),

    #[error("zero noisy error: ideal and noisy expectations coincide")]
    ZeroNoisyError,

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::UnsupportedGate { .. } => "unsupported_gate",
            Error::WidthMismatch(_) => "width_mismatch",
            Error::InvalidGate(_) => "invalid_gate",
            Error::MeasureInFold => "measure_in_fold",
            Error::MissingCalibration(_) => "missing_calibration",
            Error::InvalidDevice(_) => "invalid_device",
            Error::WidthExceedsMaximum { .. } => "width_exceeds_maximum",
            Error::NonDiagonalObservable(_) => "non_diagonal_observable",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::ZeroReliability => "zero_reliability",
            Error::DegenerateFit(_) => "degenerate_fit",
            Error::NoCutWithinBudget { .. } => "no_cut_within_budget",
            Error::InvalidCutPlan(_) => "invalid_cut_plan",
            Error::MissingVariant(_) => "missing_variant",
            Error::ZeroNoisyError => "zero_noisy_error",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidConfig(e.to_string())
    }
}
