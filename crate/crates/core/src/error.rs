use std::fmt;

/// Errors produced by the library.
///
/// Every variant carries a short stable code (see [`Error::code`]) so that
/// front ends can emit machine-parseable one-line diagnostics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Io(#[from] std::io::Error),

    /// Malformed input text; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Malformed binary file (bad magic, version, truncation).
    #[error("{0}")]
    Format(String),

    /// A data-structure invariant does not hold.
    #[error("{0}")]
    Invariant(String),

    /// Arguments or configuration outside the supported domain.
    #[error("{0}")]
    InvalidInput(String),

    /// A size computation exceeded the addressable range.
    #[error("{0}")]
    Overflow(String),

    /// The operation produced or received a graph with no edges.
    #[error("empty graph")]
    EmptyGraph,

    #[error("allocation of {0} bytes failed")]
    Alloc(u64),
}

impl Error {
    /// Stable short code for machine-parseable diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io(_) => "io",
            Error::Parse { .. } => "parse",
            Error::Format(_) => "format",
            Error::Invariant(_) => "invariant",
            Error::InvalidInput(_) => "invalid-input",
            Error::Overflow(_) => "overflow",
            Error::EmptyGraph => "empty-graph",
            Error::Alloc(_) => "alloc",
        }
    }

    /// Single-line rendering: `<code>: <message>` with newlines squashed.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("{}: {}", self.code(), msg)
    }
}

impl fmt::Display for OneLine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.one_line())
    }
}

/// Display adapter that always renders on a single line.
pub struct OneLine<'a>(pub &'a Error);

pub type Result<T> = std::result::Result<T, Error>;
