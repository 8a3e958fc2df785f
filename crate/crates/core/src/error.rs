use thiserror::Error;

/// Errors raised anywhere in the key-rate pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Heralding probability is zero, so the conditional state does not exist.
    #[error("zero-probability event: {0}")]
    ZeroProbability(String),

    #[error("unsupported moment order {order} (closed forms cover order <= 2)")]
    UnsupportedOrder { order: u32 },

    #[error("unphysical covariance matrix: {0}")]
    UnphysicalCm(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// Fock truncation leaves too much population near the cutoff.
    #[error("truncation insufficient: leakage {leakage:.3e} at N = {truncation}")]
    TruncationInsufficient { truncation: usize, leakage: f64 },

    #[error("target unreachable: {0}")]
    TargetUnreachable(String),

    #[error("no secure region in the search interval")]
    NoSecureRegion,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that describe the physics (insecure, zero-probability,
    /// out-of-domain) rather than a broken numerical routine.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::ZeroProbability(_)
                | Error::TargetUnreachable(_)
                | Error::NoSecureRegion
                | Error::UnphysicalCm(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
