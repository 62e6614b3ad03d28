use thiserror::Error;

/// Crate-wide error type. Validation errors carry the JSON-ish path of the
/// offending entry so CLI output can point at the exact field.
#[derive(Debug, Error)]
pub enum Error {
    /// A value was used outside the carrier of a quantale or algebra.
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula or operation is not admissible for a machine signature.
    #[error("signature error: {0}")]
    Signature(String),

    /// Malformed textual input (rationals, formulas).
    #[error("parse error: {0}")]
    Parse(String),

    /// A machine document failed validation; `path` names the entry.
    #[error("invalid machine document at {path}: {message}")]
    Validation { path: String, message: String },

    /// A resource cap (e.g. explored determinization states) was exceeded.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn signature(msg: impl Into<String>) -> Self {
        Error::Signature(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
