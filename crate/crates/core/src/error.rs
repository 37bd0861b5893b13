use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e}")]
    NonConvergence { estimate: f64, error: f64 },
    #[error("function evaluation failed at x = {x}")]
    EvaluationFailure { x: f64 },
    #[error("pole {pole} is not strictly inside [{a}, {b}]")]
    PoleOutsideInterval { pole: f64, a: f64, b: f64 },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid endpoint exponents alpha = {alpha}, beta = {beta}")]
    InvalidExponents { alpha: f64, beta: f64 },
    #[error("invalid integration settings: {0}")]
    InvalidSpec(String),
    #[error("unknown density '{0}'")]
    UnknownDensity(String),
    #[error("density '{name}' is not a probability density: {reason}")]
    NotADensity { name: String, reason: String },
    #[error("orthogonal polynomial construction unstable: {0}")]
    InstabilityDetected(String),
    #[error("point {re}{im:+}i lies on the support interval")]
    PointOnInterval { re: f64, im: f64 },
    #[error("argument {x} outside the domain of {function}")]
    DomainError { function: &'static str, x: f64 },
    #[error("secondary measure is degenerate (d0 = {d0:e})")]
    DegenerateMeasure { d0: f64 },
    #[error("Stieltjes transform vanishes at {re}{im:+}i")]
    TransformZero { re: f64, im: f64 },
    #[error("Richardson extrapolation diverged: {0}")]
    ExtrapolationDivergence(String),
    #[error("family transform denominator vanishes at {re}{im:+}i")]
    DenominatorZero { re: f64, im: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("syntax error at byte {offset}: expected {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
}
