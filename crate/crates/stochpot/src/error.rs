use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("singular kernel: power-law covariance is unbounded at coincident points")]
    SingularKernel,
    #[error("non-pointwise kernel: white noise has no pointwise covariance")]
    NonPointwiseKernel,
    #[error("inadmissible kernel: {0}")]
    Inadmissible(String),
    #[error("kernel is not mean-square differentiable: {0}")]
    NotDifferentiable(String),
    #[error("covariance factorization failed after jitter {jitter:e}")]
    FactorizationFailure { jitter: f64 },
    #[error("resource limit: {n} points exceeds cap {cap}")]
    ResourceLimit { n: usize, cap: usize },
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("singular pair: Green function evaluated at x = y")]
    SingularPair,
    #[error("chart singularity: {0}")]
    ChartSingularity(String),
    #[error("invalid Riesz order a={a} for dimension n={n}")]
    InvalidOrder { a: f64, n: usize },
    #[error("embedding violation: a*p = {0} must be below n")]
    EmbeddingViolation(f64),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid comparison: {0}")]
    InvalidComparison(String),
    #[error("ill-conditioned step h={0:e}")]
    IllConditionedStep(f64),
    #[error("missing constant: {0}")]
    MissingConstant(&'static str),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
