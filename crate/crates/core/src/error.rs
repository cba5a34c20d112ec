use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:e}")]
    NonHermitianInput { asymmetry: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("eigenvalue {value:e} is below the physical tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },
    #[error("{what} = {value} is outside its domain {domain}")]
    DomainError {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("projection onto the restricted subspace has norm {norm:e}")]
    ZeroNormSubspace { norm: f64 },
    #[error("region carries probability {probability:e}, too small to condition on")]
    EmptyRegionMass { probability: f64 },
    #[error("quadrature did not converge: {detail}")]
    QuadratureNotConverged { detail: String },
    #[error("width {which} diverges at alpha = {alpha}")]
    DivergentWidth { which: &'static str, alpha: f64 },
    #[error("conditioning event has probability {probability:e}")]
    ConditioningOnNullEvent { probability: f64 },
    #[error("fit needs at least {required} samples above threshold, found {found}")]
    InsufficientSupport { required: usize, found: usize },
    #[error("fitted curvature {name} = {value} is not positive")]
    NonPositiveCurvature { name: &'static str, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
