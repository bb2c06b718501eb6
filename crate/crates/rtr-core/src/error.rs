use thiserror::Error;

/// Which oracle closure a fault was observed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleCall {
    /// The objective value closure.
    Value,
    /// The gradient closure.
    Grad,
    /// The Hessian-vector-product closure.
    Hvp,
}

impl std::fmt::Display for OracleCall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleCall::Value => write!(f, "value"),
            OracleCall::Grad => write!(f, "grad"),
            OracleCall::Hvp => write!(f, "hvp"),
        }
    }
}

/// Errors surfaced by the oracle layer.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A vector constructor was handed a NaN or infinite entry.
    #[error("non-finite entry {value} at index {index} in {context}")]
    NonFinite {
        context: &'static str,
        index: usize,
        value: f64,
    },

    /// Two operands (or an oracle input) disagree on length.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// An oracle closure produced a NaN/infinite output or a wrong-length
    /// vector. `index` is `None` for the scalar value closure.
    #[error("oracle fault in {call} call: non-finite output {value}{}", .index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    OracleFault {
        call: OracleCall,
        index: Option<usize>,
        value: f64,
    },

    /// A constructor or helper was called with arguments outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
