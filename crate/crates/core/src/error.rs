use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("unsupported dimension {dim}, expected {expected}")]
    UnsupportedDimension { dim: usize, expected: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("state vector is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("cannot condition on an outcome of probability {probability:.3e}")]
    CannotCondition { probability: f64 },

    #[error("Fisher information diverges: outcome {label} has p = {probability:.3e} but dp/dphi = {derivative:.3e}")]
    DivergentInformation {
        label: String,
        probability: f64,
        derivative: f64,
    },

    #[error("distribution carries no derivative with respect to phi")]
    MissingDerivative,

    #[error("eta is not identifiable from {strategy} counts alone")]
    NotIdentifiable { strategy: String },

    #[error("likelihood is flat in phi (eta * V = {eta_v})")]
    FlatLikelihood { eta_v: f64 },

    #[error("observed counts are impossible under the model for every phi in [0, pi/2]")]
    InfeasibleCounts,

    #[error("Cramér-Rao bound undefined for Fisher information {fisher}")]
    NoBound { fisher: f64 },

    #[error("unknown outcome label {label:?} for strategy {strategy}")]
    UnknownLabel { label: String, strategy: String },

    #[error("incomplete tomography data: {0}")]
    IncompleteData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
