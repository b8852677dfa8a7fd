//! Error taxonomy shared by the whole crate.
//!
//! Two broad classes matter to callers: *domain* errors (an input lies
//! outside the region a formula is defined on, or a configuration breaks a
//! hard resource limit) and *structure* errors (a monotonicity or
//! sign-change assumption the solvers rely on failed at runtime). The
//! simulator adds two specific conditions that front ends want to surface
//! with actionable messages.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the valid parameter domain, or a rejected configuration.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural assumption (monotone term, bracketed sign change, root
    /// existence) was violated while solving; indicates either misuse of the
    /// scalar solvers or a genuinely pathological input.
    #[error("numerical structure error: {0}")]
    Structure(String),

    /// No codeword pair passed the typicality predicate. The slack `delta`
    /// is too tight for this blocklength and correlation target.
    #[error(
        "no codeword pair passed the typicality test; \
         increase delta or the blocklength"
    )]
    EmptyPairSet,

    /// A codebook row kept violating the power constraint after many
    /// redraws. The variance back-off `delta` is too small for this
    /// blocklength.
    #[error(
        "codebook {book} row {row} still violated the power constraint \
         after {attempts} redraws; increase delta"
    )]
    PowerInfeasible { book: u8, row: usize, attempts: u32 },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
}
