use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("unsupported channel: {0}")]
    UnsupportedChannel(String),
    /// Pure-loss transmissivity below 1/2. The quantum and private capacities
    /// vanish there; callers that want a number should report zero with this
    /// regime attached.
    #[error("antidegradable regime (eta = {eta}): capacity is zero")]
    Antidegradable { eta: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// True for errors caused by caller-supplied values rather than by the
    /// numerics.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Shape(_)
                | Error::InvalidState(_)
                | Error::InvalidChannel(_)
                | Error::UnsupportedChannel(_)
                | Error::Antidegradable { .. }
                | Error::Precondition(_)
        )
    }
}
