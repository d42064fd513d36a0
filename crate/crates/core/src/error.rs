use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed exchange-format text. `line` is 1-based when known.
    #[error("parse error{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    /// Well-formed input of the wrong kind, e.g. a cover matrix where an
    /// operator matrix was expected.
    #[error("format error: {0}")]
    Format(String),

    /// Value violates a structural invariant of its representation.
    #[error("invalid value: {0}")]
    Invalid(String),

    /// Two operands cannot be brought onto a common finite descriptor.
    #[error("not representable: {0}")]
    Representation(String),

    #[error("undecidable for this representation: {0}")]
    Undecidable(String),

    #[error("matrix is not regular: row {row} has unbounded absolute sum")]
    NotRegular { row: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn syntax(msg: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            msg: msg.into(),
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { line: None, msg } => Error::Parse {
                line: Some(line),
                msg,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
