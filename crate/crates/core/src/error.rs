use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid gas parameters: {0}")]
    InvalidGas(String),
    #[error("density {rho} outside the admissible range (0, {max})")]
    DensityOutOfDomain { rho: f64, max: f64 },
    #[error("vacuum state: specific volume is undefined at zero density")]
    VacuumState,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("characteristic inversion failed at x = {x:?}, t = {t}: {reason}")]
    CharacteristicInversion { x: Vec<f64>, t: f64, reason: String },
    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },
    #[error("domain too small: support radius {radius} + M*T = {reach} exceeds usable half-width {half_width}")]
    DomainTooSmall { radius: f64, reach: f64, half_width: f64 },
    #[error("domain margin exhausted at t = {t}: |V| = {value:e} inside the seam buffer")]
    DomainMarginExhausted { t: f64, value: f64 },
    #[error("non-finite values (blow-up) at t = {t}")]
    BlowUp { t: f64 },
    #[error("positivity violated at t = {t}: min pi = {min_pi:e} below -{tolerance:e} * {scale:e}")]
    PositivityViolation { t: f64, min_pi: f64, tolerance: f64, scale: f64 },
    #[error("time step collapsed to {dt:e} at t = {t}")]
    TimeStepCollapse { t: f64, dt: f64 },
    #[error("degenerate fit window: {0}")]
    DegenerateFit(String),
    #[error("comparison function argument {0} is outside its domain")]
    ComparisonDomain(f64),
    #[error("configuration error")]
    Config(Vec<crate::io::config::ConfigIssue>),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed data: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
