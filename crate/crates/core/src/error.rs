use std::fmt;
use std::path::PathBuf;

use crate::label::Scale;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("no prediction for gold item {0}")]
    MissingPrediction(String),

    #[error("prediction for unknown item {0}")]
    UnknownItem(String),

    #[error("duplicate item {0}")]
    DuplicateItem(String),

    #[error("label {label} is not on the {scale} scale")]
    OffScaleLabel { label: i8, scale: Scale },

    #[error("scale mismatch: expected {expected}, found {found}")]
    ScaleMismatch { expected: Scale, found: Scale },

    #[error("test size must be positive")]
    NonpositiveTestSize,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("malformed votes for item {item}: {reason}")]
    MalformedVotes { item: String, reason: String },

    #[error("policy {policy} cannot be used for subtask {subtask}")]
    PolicySubtaskMismatch { policy: String, subtask: String },

    #[error("wrong data shape for subtask {subtask}: {reason}")]
    SubtaskMismatch { subtask: String, reason: String },

    #[error("topic {0} has no items")]
    EmptyTopic(String),

    #[error("duplicate topic {0}")]
    DuplicateTopic(String),

    #[error("no prediction for gold topic {0}")]
    MissingTopic(String),

    #[error("prediction for unknown topic {0}")]
    UnknownTopic(String),

    #[error("every item of topic {0} would be removed")]
    AllItemsRemoved(String),

    #[error("invalid drift specification: {0}")]
    InvalidDrift(String),

    #[error("{0}")]
    Parse(ParseErrors),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            Error::Parse(_) => 2,
            _ => 3,
        }
    }
}

impl From<ParseErrors> for Error {
    fn from(e: ParseErrors) -> Self {
        Error::Parse(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    BadFieldCount { expected: usize, found: usize },
    EmptyField { field: usize },
    BadLabel(String),
    BadProbability(String),
    DuplicateKey(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::BadFieldCount { expected, found } => {
                write!(f, "expected {expected} tab-separated fields, found {found}")
            }
            ParseErrorKind::EmptyField { field } => write!(f, "field {field} is empty"),
            ParseErrorKind::BadLabel(s) => write!(f, "bad label {s:?}"),
            ParseErrorKind::BadProbability(s) => write!(f, "bad probability: {s}"),
            ParseErrorKind::DuplicateKey(k) => write!(f, "duplicate key {k:?}"),
        }
    }
}

/// One diagnostic for one malformed line.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.kind)
    }
}

/// All diagnostics collected while parsing one file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParseErrors {
    pub source: Option<PathBuf>,
    pub errors: Vec<ParseError>,
}

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match &self.source {
                Some(p) => write!(f, "{}:{}: {}", p.display(), e.line, e.kind)?,
                None => write!(f, "{e}")?,
            }
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}
