use nalgebra::DVector;
use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ill-posed pencil: {0}")]
    IllPosedPencil(String),

    /// Orthonormalization stopped early; `kept` holds the independent prefix.
    #[error("rank-deficient input: {} of {requested} vectors independent", kept.len())]
    RankDeficient {
        kept: Vec<DVector<f64>>,
        requested: usize,
    },

    #[error("no oracle for {0}")]
    UnsupportedOracle(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconclusive truncation: {0}")]
    InconclusiveTruncation(String),

    #[error("kernel is contained in the subspace; no certificate of infinite width")]
    NoCertificate,

    #[error("system is not ECT on the interval: {0}")]
    NotEctOnInterval(String),

    #[error("degenerate system: W_{k} vanishes on the whole interval")]
    DegenerateSystem { k: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
