use thiserror::Error;

/// Errors from flowsheet construction and mutation.
#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("wrong request kind: expected a Design task, got {0}")]
    WrongRequestKind(String),

    #[error("unknown component '{name}'; nearest matches: {candidates:?}")]
    UnknownComponent {
        name: String,
        candidates: Vec<String>,
    },

    #[error("invalid unit params for {kind}: {key}: {reason}")]
    InvalidUnitParams {
        kind: String,
        key: String,
        reason: String,
    },

    #[error("unknown unit '{0}'")]
    UnknownUnit(String),

    #[error("unknown stream '{0}'")]
    UnknownStream(String),

    #[error("port {unit}.{side}{port} is already occupied by stream {stream}")]
    PortOccupied {
        unit: String,
        side: &'static str,
        port: usize,
        stream: String,
    },

    #[error("invalid port {unit}.{side}{port}: {reason}")]
    InvalidPort {
        unit: String,
        side: &'static str,
        port: usize,
        reason: String,
    },
}

/// File / document level error with a JSON-pointer-style location.
#[derive(Debug, Error, PartialEq)]
#[error("schema error at {location}: {message}")]
pub struct SchemaError {
    pub location: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }
}
