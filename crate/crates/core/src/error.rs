use thiserror::Error;

/// Errors produced by the engine and its input formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol text {0:?}: empty, whitespace, or reserved character")]
    BadSymbol(String),

    #[error("duplicate pattern id {0:?}")]
    DuplicatePid(String),

    #[error("pattern {0:?} has role New; the store holds Old patterns only")]
    NewPatternInStore(String),

    #[error("empty input sequence")]
    EmptyInput(&'static str),

    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),

    #[error("hit cannot be applied to the alignment: {0}")]
    InvalidHit(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("row {row} has {got} cells, schema has {want} columns")]
    RowArity { row: usize, got: usize, want: usize },

    #[error("pattern {pid:?} does not open with entity {entity:?}")]
    EntityMismatch { pid: String, entity: String },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
