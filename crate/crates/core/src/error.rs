use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model `{name}` rejected: {reason}")]
    ModelRejected { name: String, reason: String },

    #[error("expression error at byte {position}: {message}")]
    Expression { position: usize, message: String },

    #[error("non-finite coefficient at t = {t}")]
    NonFiniteCoefficient { t: f64 },

    #[error("grid of {grid_size} points too coarse for {requested} eigenvalues")]
    GridTooCoarse { grid_size: usize, requested: usize },

    #[error("no bracket for eigenvalue {index} below ceiling {ceiling}")]
    BracketNotFound { index: usize, ceiling: f64 },

    #[error("integrator step underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    QuadratureNotConverged { estimate: f64, error: f64 },

    #[error("test function vanishes identically")]
    ZeroDenominator,

    #[error("test function violates the Dirichlet conditions (|g| = {value} at t = {t})")]
    BoundaryViolation { t: f64, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fiber curvature mismatch: surface needs k = {surface}, model has k = {model}")]
    IncompatibleFiber { surface: f64, model: f64 },

    #[error("solvers disagree on eigenvalue {index}: fd = {fd}, shooting = {shooting}")]
    SolverDisagreement {
        index: usize,
        fd: f64,
        shooting: f64,
    },

    #[error("stencil at {coordinate} leaves the chart")]
    StencilOutsideChart { coordinate: f64 },

    #[error("degenerate tangent frame")]
    DegenerateFrame,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteCoefficient { .. }
                | Error::GridTooCoarse { .. }
                | Error::BracketNotFound { .. }
                | Error::StepUnderflow { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::SolverDisagreement { .. }
                | Error::DegenerateFrame
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
