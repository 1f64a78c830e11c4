use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid datum: {0}")]
    Datum(String),
    #[error("no weight pairs to 1 with every simple coroot; the derived group is not simply connected")]
    NoVarsigma,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not in the affine Weyl group")]
    NotInW(String),
    #[error("{0} is not minimal in its W_f-coset")]
    NotMinimal(String),
    #[error("element {0} has a nontrivial length-zero part, which this operation cannot act with")]
    OmegaSupport(String),
    #[error("not in the image of {map}: coefficient of {witness} is {found}, expected {expected}")]
    NotInImage {
        map: &'static str,
        witness: String,
        found: String,
        expected: String,
    },
    #[error("table has no column for {0}")]
    TableGap(String),
    #[error("table validation failed ({check}) at (y, w) = ({y}, {w}): {detail}")]
    Validation {
        check: &'static str,
        y: String,
        w: String,
        detail: String,
    },
    #[error("table schema: {0}")]
    Schema(String),
    #[error("division by pi_f is not exact at {0}")]
    NotDivisible(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
