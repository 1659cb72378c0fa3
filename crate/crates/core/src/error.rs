use thiserror::Error;

/// Errors raised by graphon, density, transport and pipeline routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or solver guard tripped.
    #[error("size error: {what} is {actual}, limit is {limit}")]
    Size {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    /// Two objects that must agree in shape do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Two measures that must carry equal total mass do not.
    #[error("mass mismatch: {left} vs {right}")]
    MassMismatch { left: f64, right: f64 },

    /// A stored object violates a structural invariant (symmetry, range, diagonal).
    #[error("invariant violated in {context}: {detail}")]
    Invariant { context: String, detail: String },

    /// A weight outside [0, 1].
    #[error("range error in {context}: value {value} at ({row}, {col}) is outside [0, 1]")]
    Range {
        context: String,
        row: usize,
        col: usize,
        value: f64,
    },

    /// Input that cannot be used for fitting (for example a single class).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error in {context}: {detail}")]
    Parse { context: String, detail: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag used by the CLI's JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Size { .. } => "size",
            Error::Shape(_) => "shape",
            Error::MassMismatch { .. } => "mass_mismatch",
            Error::Invariant { .. } => "invariant",
            Error::Range { .. } => "range",
            Error::Degenerate(_) => "degenerate",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }

    /// Prefixes the location of the offending object onto the error.
    pub fn in_context(self, ctx: &str) -> Error {
        match self {
            Error::Invariant { context, detail } => Error::Invariant {
                context: format!("{ctx}, {context}"),
                detail,
            },
            Error::Range {
                context,
                row,
                col,
                value,
            } => Error::Range {
                context: format!("{ctx}, {context}"),
                row,
                col,
                value,
            },
            Error::Parse { context, detail } => Error::Parse {
                context: format!("{ctx}, {context}"),
                detail,
            },
            Error::Shape(m) => Error::Shape(format!("{ctx}: {m}")),
            Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
