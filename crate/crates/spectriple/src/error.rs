use thiserror::Error;

/// Errors raised by the library. Numerical check failures are not errors;
/// they surface as residuals in reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    Dimension {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("linear part of anti-unitary operator is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("unsupported dimension: m = {0}")]
    UnsupportedDimension(usize),
    #[error("invalid signature: n = {n} must lie in 0..={max}")]
    InvalidSignature { n: usize, max: usize },
    #[error("input basis fails the Euclidean Clifford relation (residual {0:e})")]
    InvalidBasis(f64),
    #[error("basis is not entrywise real or imaginary; no product formula for C")]
    NonRealizableBasis,
    #[error("vielbein matrix is singular")]
    SingularVielbein,
    #[error("factor {index} is not a unit vector: g(v,v) = {norm}")]
    InvalidFactor { index: usize, norm: f64 },
    #[error("inconsistent structure: {0}")]
    InconsistentStructure(String),
    #[error("unsupported lattice: {0}")]
    UnsupportedLattice(String),
    #[error("gauge element is not {0}")]
    InvalidGaugeElement(&'static str),
    #[error("metric is singular at a stencil point")]
    SingularMetric,
    #[error("unsupported metric: {0}")]
    UnsupportedMetric(String),
    #[error("unknown metric family `{0}`")]
    UnknownFamily(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("candidate passed the filter but rho(gamma) is not diagonal: {0}")]
    InternalFilterBug(String),
}

pub type Result<T> = std::result::Result<T, Error>;
