use thiserror::Error;

/// Errors raised by the evaluation layers.
///
/// The variants are grouped so that callers (the CLI in particular) can map
/// them onto exit codes: everything except [`AfeError::Io`] is a violation of
/// some input or hypothesis.
#[derive(Debug, Error)]
pub enum AfeError {
    #[error("invalid datum field `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("coefficient table too short: need {required} entries, have {available}")]
    OutOfRange { required: usize, available: usize },

    #[error("accuracy target missed: estimated error {estimate:e} > {target:e}")]
    Accuracy { estimate: f64, target: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("smoothing function must be smooth: {0}")]
    Smoothness(String),

    #[error("contour degeneracy: {0}")]
    ContourDegeneracy(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AfeError {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            AfeError::Validation { .. } => "validation",
            AfeError::Domain(_) => "domain",
            AfeError::Pole(_) => "pole",
            AfeError::Argument(_) => "argument",
            AfeError::Capacity(_) => "capacity",
            AfeError::OutOfRange { .. } => "out_of_range",
            AfeError::Accuracy { .. } => "accuracy",
            AfeError::Hypothesis(_) => "hypothesis",
            AfeError::Smoothness(_) => "smoothness",
            AfeError::ContourDegeneracy(_) => "contour_degeneracy",
            AfeError::Parse(_) => "parse",
            AfeError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, AfeError>;
