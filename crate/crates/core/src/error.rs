use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group spec {0:?} (expected Z:m, S:m with m <= 6, or file:<path>)")]
    BadGroupSpec(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("invalid character table: {0}")]
    InvalidCharTable(String),

    #[error("group has no character table")]
    MissingCharTable,

    #[error("{what} = {value} exceeds cap {cap} (raise --{flag})")]
    CapExceeded {
        what: &'static str,
        value: String,
        cap: u128,
        flag: &'static str,
    },

    #[error("wreath elements have different n ({0} vs {1})")]
    MismatchedN(usize, usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("{0} requires n >= {1}")]
    NTooSmall(&'static str, usize),

    #[error("{0}")]
    Unsupported(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
