use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid physical parameter {name} = {value}: must lie in (0, 1]")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid time step: {0}")]
    InvalidStep(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("unknown theta mode `{0}`")]
    UnknownThetaMode(String),

    #[error("invalid scheme program: {0}")]
    InvalidScheme(String),

    #[error("constants file line {line}: {msg}")]
    Constants { line: usize, msg: String },

    #[error("line {line}: key `{key}`: {msg}")]
    Config { line: usize, key: String, msg: String },

    #[error("config: {0}")]
    ConfigMissing(String),

    #[error("reference protocol: {0}")]
    Reference(String),

    #[error("sweep: {0}")]
    Sweep(String),

    #[error("singular Jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("Newton iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("all error points lie below the floor {floor:e}; no order can be fitted (saturated)")]
    Saturated { floor: f64 },

    #[error("cache file {path}: {msg}")]
    CacheFormat { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors produced by numerics rather than by input validation.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularJacobian { .. } | Error::NoConvergence { .. } | Error::Saturated { .. }
        )
    }
}
