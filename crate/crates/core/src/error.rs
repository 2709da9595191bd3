use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate (topic, doc) entries: {}", format_pairs(.0))]
    DuplicateEntries(Vec<(String, String)>),

    #[error("duplicate id: {0}")]
    DuplicateId(String),

    #[error("topic {topic} missing from {table}")]
    MissingTopic { topic: String, table: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("empty result: {0}")]
    EmptyResult(String),

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Attaches the file the error originated from.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// Process exit code: 2 for input errors, 3 for empty results.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InFile { source, .. } => source.exit_code(),
            Error::EmptyResult(_) => 3,
            _ => 2,
        }
    }
}

fn format_pairs(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(t, d)| format!("{t}/{d}"))
        .collect::<Vec<_>>()
        .join(", ")
}
