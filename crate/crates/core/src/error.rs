use std::fmt;

/// Crate-wide error type. Variants mirror the failure classes the numeric
/// routines can actually hit: bad arguments (`Domain`), queries outside a
/// table's coverage (`Range`), asking for more terms than a table holds
/// (`Capacity`), out-of-bounds indices (`Index`), results drowned by
/// truncation error (`Precision`), iterative schemes that stall
/// (`Convergence`), operations not defined for a configuration
/// (`Unsupported`), and cache-file problems (`Io`/`Parse`).
#[derive(Debug)]
pub enum Error {
    Domain(String),
    Range(String),
    Capacity(String),
    Index(String),
    Precision(String),
    Convergence(String),
    Unsupported(String),
    Io(std::io::Error),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Range(msg) => write!(f, "range error: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity error: {msg}"),
            Error::Index(msg) => write!(f, "index error: {msg}"),
            Error::Precision(msg) => write!(f, "precision error: {msg}"),
            Error::Convergence(msg) => write!(f, "convergence error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
