use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u64),
    #[error("argument `{name}` must be nonnegative, got {value}")]
    Negative { name: &'static str, value: String },
    #[error("empty or reversed interval [{start}, {end})")]
    EmptyInterval { start: String, end: String },
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("position ({row}, {col}) is outside the {rows}x{cols} board")]
    OutOfBoard {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("tableau construction deviated from the expected row profile: {0}")]
    TableauProfile(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("malformed range: {0}")]
    MalformedRange(String),
}
