use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failure while reading an XML document.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty document")]
    Empty,
    #[error("malformed XML at byte {offset}: {message}")]
    Malformed { offset: u64, message: String },
    #[error("document has no root element")]
    NoRoot,
    #[error("content after the root element at byte {offset}")]
    TrailingContent { offset: u64 },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("document {0:?} is already indexed")]
    DuplicateDocument(String),
    #[error("refusing to commit an empty index")]
    EmptyIndex,
    #[error("index directory {0} already exists")]
    AlreadyExists(PathBuf),
    #[error("unsupported index version: {0:?}")]
    Version(String),
    #[error("corrupt index file {file}: {message}")]
    Corrupt { file: String, message: String },
    #[error("index I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl IndexError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        IndexError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn corrupt(file: &str, message: impl Into<String>) -> Self {
        IndexError::Corrupt {
            file: file.to_string(),
            message: message.into(),
        }
    }
}

/// Errors raised while parsing or validating a query, before any index access.
#[derive(Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("query syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unsupported NEXI construct: {0}")]
    Unsupported(String),
    #[error("{op} expects {expected} operand(s), got {got}")]
    Arity {
        op: &'static str,
        expected: &'static str,
        got: usize,
    },
    #[error("sequence pattern needs at least one term")]
    EmptySequence,
    #[error("beta must lie in [0, 1], got {0}")]
    Beta(f64),
    #[error("empty query path")]
    EmptyPath,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("{0}")]
    NotFound(String),
}
