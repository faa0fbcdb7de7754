use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum StickyError {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("quadrature did not converge in {op}: achieved error estimate {achieved:e} > tolerance {tol:e}")]
    Quadrature {
        op: &'static str,
        achieved: f64,
        tol: f64,
    },

    #[error("non-finite value in {op} at state {state:?}")]
    NonFinite { op: &'static str, state: Vec<f64> },

    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    Dimension {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("step size violation in {op}: {msg}")]
    StepSize { op: &'static str, msg: String },

    #[error("degenerate measure in {op}: denominator {value:e} below threshold")]
    DegenerateMeasure { op: &'static str, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, StickyError>;

impl StickyError {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        StickyError::Domain {
            op,
            msg: msg.into(),
        }
    }
}
