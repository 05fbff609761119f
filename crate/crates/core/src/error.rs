use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group contexts differ")]
    ContextMismatch,

    #[error("invalid group context: {0}")]
    InvalidContext(String),

    #[error("sign undecided after refining to the {bits}-bit precision ceiling")]
    PrecisionCeiling { bits: u32 },

    #[error("coefficient fields differ")]
    FieldMismatch,

    #[error("division by zero in coefficient field")]
    DivisionByZero,

    #[error("series is not a unit: {0}")]
    NotAUnit(String),

    #[error("zero series has no initial form")]
    ZeroSeries,

    #[error("requested precision unattainable; attainable cutoff is {attainable}")]
    CutoffUnderflow { attainable: String },

    #[error("cutoff too small to certify {0}")]
    CutoffTooSmall(String),

    #[error("exponent outside the nonnegative cone: {0}")]
    NegativeExponent(String),

    #[error("not pseudo-convergent: {0}")]
    NotPseudoConvergent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("fan defect: {0}")]
    FanDefect(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("extension of the coefficient field required: {0}")]
    ExtensionRequired(String),

    #[error("presentation defect: {0}")]
    PresentationDefect(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
