use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Numerical variants carry the offending value so sweep drivers can flag a
/// row without losing context.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFiniteParameter { name: &'static str, value: f64 },

    #[error("Pearson coefficient must satisfy |P| < 1, got {0}")]
    PearsonOutOfRange(f64),

    #[error("curvature is singular at t = {t} (sin(omega t) = 0)")]
    CurvatureSingular { t: f64 },

    #[error("sample times must be strictly ascending (index {index})")]
    NotAscending { index: usize },

    #[error("time step {step} at index {index} exceeds the unwrapping limit {limit}")]
    StepTooLarge { index: usize, step: f64, limit: f64 },

    #[error("operation requires resonance omega = omega0, got omega = {omega}, omega0 = {omega0}")]
    NotResonant { omega: f64, omega0: f64 },

    #[error("expansion order {order} is not supported")]
    UnsupportedOrder { order: u32 },

    #[error("high-frequency expansion has a pole near t = {t} (cos(omega t) = {cos})")]
    ExpansionPole { t: f64, cos: f64 },

    #[error("time window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("propagator is singular at t = {t} (|sin(omega t)| = {sin_abs})")]
    KernelSingular { t: f64, sin_abs: f64 },

    #[error("integration cut is too tight: boundary/peak integrand ratio {ratio:e}")]
    TruncationTooTight { ratio: f64 },

    #[error("field is not Gaussian (fit residual {residual:e})")]
    NotGaussian { residual: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error("covariance is not positive definite (det = {det})")]
    NotPositiveDefinite { det: f64 },

    #[error("covariance violates the uncertainty bound (det = {det} < 1/4)")]
    UncertaintyViolation { det: f64 },

    #[error("grid too coarse for momentum {p}: |p| dy = {product} > pi/4")]
    GridTooCoarse { p: f64, product: f64 },

    #[error("grid is unsuitable for the Wigner integral: {0}")]
    InvalidGrid(String),

    #[error("purity {purity} too close to 1 for the mixedness term")]
    PurityDivergence { purity: f64 },

    #[error("Fisher information is zero, no finite Cramér-Rao bound")]
    ZeroInformation,

    #[error("finite-difference step {h} is round-off dominated")]
    StepTooSmall { h: f64 },

    #[error("integral did not converge (relative change {change:e})")]
    NotConverged { change: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("probability at index {index} is not positive ({value})")]
    NonPositiveProbability { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("I/O failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short stable tag used in flag columns and FFI messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveFrequency { .. } => "NonPositiveFrequency",
            Error::NonFiniteParameter { .. } => "NonFiniteParameter",
            Error::PearsonOutOfRange(_) => "PearsonOutOfRange",
            Error::CurvatureSingular { .. } => "CurvatureSingular",
            Error::NotAscending { .. } => "NotAscending",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NotResonant { .. } => "NotResonant",
            Error::UnsupportedOrder { .. } => "UnsupportedOrder",
            Error::ExpansionPole { .. } => "ExpansionPole",
            Error::EmptyWindow { .. } => "EmptyWindow",
            Error::KernelSingular { .. } => "KernelSingular",
            Error::TruncationTooTight { .. } => "TruncationTooTight",
            Error::NotGaussian { .. } => "NotGaussian",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::UncertaintyViolation { .. } => "UncertaintyViolation",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::PurityDivergence { .. } => "PurityDivergence",
            Error::ZeroInformation => "ZeroInformation",
            Error::StepTooSmall { .. } => "StepTooSmall",
            Error::NotConverged { .. } => "NotConverged",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonPositiveProbability { .. } => "NonPositiveProbability",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::Io(_) => "IoFailure",
        }
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteParameter { name, value })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveFrequency { name, value })
    }
}
