use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A state or parameter lies outside the physical domain of the model.
    #[error("inadmissible value: {what} = {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A conserved vector that does not map back to an admissible primitive state.
    #[error("cannot reconstruct primitive state in cell {cell}: {what} = {value}")]
    Reconstruction {
        cell: usize,
        what: &'static str,
        value: f64,
    },

    /// Complex characteristic speeds beyond tolerance. Carries the state and
    /// the spectrum as `(re, im)` pairs.
    #[error("hyperbolicity lost at state {state:?}: spectrum {spectrum:?}")]
    HyperbolicityLoss {
        state: Vec<f64>,
        spectrum: Vec<(f64, f64)>,
    },

    /// A quantity that must exist by construction did not (e.g. a negative
    /// discriminant where the sign pattern forces two real roots).
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("singular matrix: {0}")]
    Singular(&'static str),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
