use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("pole: denominator of {0} vanishes at the evaluation point")]
    Pole(String),
    #[error("substitution produces an identically zero denominator")]
    ZeroDenominator,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("interior product of a degree-0 form")]
    DegreeZeroForm,
    #[error("zero volume form")]
    ZeroVolumeForm,
    #[error("composition check failed: {0}")]
    CompositionCheckFailed(String),
    #[error("point mismatch: {0}")]
    PointMismatch(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("singular linear part")]
    SingularJacobian,
    #[error("irregular base point: {0}")]
    IrregularPoint(String),
    #[error("identically zero function: {0}")]
    ZeroFunction(String),
    #[error("not divergence-free")]
    NotDivergenceFree,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("dimension {size} exceeds the cap {cap}")]
    DimensionCap { size: usize, cap: usize },
    #[error("parameters {0} lie in the Picard set")]
    PicardParameters(String),
    #[error("identically singular fixture: {0}")]
    SingularFixture(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
