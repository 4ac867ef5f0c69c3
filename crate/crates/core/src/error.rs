use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unknown presentation family `{0}`")]
    UnknownFamily(String),
    #[error("parameters out of range for {family}: {reason}")]
    OutOfRange { family: String, reason: String },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("relator on line {0} reduces to the empty word")]
    EmptyRelator(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("coset enumeration exceeded the limit of {max_cosets} cosets")]
    LimitExceeded { max_cosets: usize },
    #[error("invalid enumeration limits: {0}")]
    InvalidLimits(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("coset table is incomplete")]
    Incomplete,
    #[error("coset table is disconnected")]
    Disconnected,
    #[error("coset table is not regular")]
    NotRegular,
    #[error("map is not proper: {0}")]
    NotProper(String),
    #[error("element is not central")]
    NotCentral,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("census is incomplete at order 2^{0}")]
    Incomplete(u32),
    #[error("census directory error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed census file {path}: {reason}")]
    Format { path: String, reason: String },
}
