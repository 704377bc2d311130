use thiserror::Error;

/// Errors produced by the model, the semiclassical constructions and the
/// exact solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular rates: {0} vanishes")]
    SingularRates(&'static str),

    #[error("singular state {variant}: |1 - nu_ref| = {distance:e} is within the pole guard")]
    SingularState { variant: &'static str, distance: f64 },

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("steady state did not converge (cutoffs tried: {trajectory:?}): {reason}")]
    NonConvergence { trajectory: Vec<usize>, reason: String },

    #[error("ill-conditioned solve in {context}: residual {residual:e}")]
    IllConditioned { context: &'static str, residual: f64 },

    #[error("friction sign calibration is ambiguous: |G| = {0:e}")]
    CalibrationMismatch(f64),

    #[error("config error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("unknown preset `{0}`")]
    PresetNotFound(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors raised by a pole of the bounced family or of `F(s, nu)`.
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::SingularState { .. } | Error::SingularRates(_))
    }

    /// One-word kind, used in the status column of scan output.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::SingularRates(_) | Error::SingularState { .. } => "singular",
            Error::DivisionByZero(_) => "division_by_zero",
            Error::InvalidParams(_) => "invalid",
            Error::DimensionMismatch { .. } => "dimension",
            Error::NonConvergence { .. } => "nonconvergence",
            Error::IllConditioned { .. } => "ill_conditioned",
            Error::CalibrationMismatch(_) => "calibration",
            Error::ConfigParse { .. } => "config",
            Error::PresetNotFound(_) => "preset",
            Error::MissingColumn(_) => "missing_column",
            Error::Io(_) => "io",
        }
    }

    /// True for failures of the exact solver, as opposed to poles of the
    /// semiclassical formulas.
    pub fn is_numerical_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::IllConditioned { .. } | Error::CalibrationMismatch(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
