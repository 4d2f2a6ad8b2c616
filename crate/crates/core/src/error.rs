use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is singular (|det| = {det:e}, tolerance {tol:e})")]
    SingularMatrix { det: f64, tol: f64 },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("structure constants are not antisymmetric in the lower indices")]
    NotAntisymmetric,
    #[error("structure constants violate the Jacobi identity (residual {0:e})")]
    JacobiViolation(f64),
    #[error("exponential-coordinate series does not converge (|ad x| = {0})")]
    SeriesNonConvergent(f64),
    #[error("frame is degenerate (|det e| = {0:e})")]
    DegenerateFrame(f64),
    #[error("deformation profile has a critical point near tau = {0}")]
    CriticalRho(f64),
    #[error("deformation profile is not positive at tau = {0}")]
    NonPositiveRho(f64),
    #[error("deformation needs an extended (central-extension) frame")]
    NotExtendedFrame,
    #[error("Lagrange tensor is degenerate (det = {0:e})")]
    DegenerateLagrangeTensor(f64),
    #[error("metric is singular (|det| = {0:e})")]
    SingularMetric(f64),
    #[error("matter sample lacks `{0}`")]
    MissingField(&'static str),
    #[error("invalid chart: {0}")]
    InvalidChart(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
