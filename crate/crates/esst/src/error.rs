//! Error type shared across the crate.

use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A matrix handed to a Hermitian-only routine fails the symmetry check.
    #[error(
        "matrix is not Hermitian: max |M[i][j] - conj(M[j][i])| = {max_asymmetry:.3e} \
         exceeds {allowed:.3e}"
    )]
    NotHermitian { max_asymmetry: f64, allowed: f64 },

    /// NaN or infinity showed up where a finite number is required.
    #[error("{context}: non-finite value encountered")]
    NonFinite { context: &'static str },

    /// The inverse-engineering denominator tan(theta) - sin(psi) vanished.
    #[error(
        "singular pulse design{}: |tan(theta) - sin(psi)| = {denominator:.3e} below {limit:.1e} \
         (theta = {theta}, psi = {psi})",
        t.map(|t| format!(" at t = {t}")).unwrap_or_default()
    )]
    SingularDesign {
        t: Option<f64>,
        theta: f64,
        psi: f64,
        denominator: f64,
        limit: f64,
    },

    /// An operation precondition was violated.
    #[error("invalid {what}: {message}")]
    InvalidInput { what: &'static str, message: String },

    /// A scenario configuration field failed validation.
    #[error("invalid config field `{field}`: {message}")]
    InvalidConfig { field: &'static str, message: String },

    /// The configuration document could not be parsed at all.
    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),

    /// Enantiomeric excess is undefined when both populations vanish.
    #[error("enantiomeric excess undefined: both populations are zero")]
    UndefinedExcess,

    /// A finite-difference stencil would reach outside the schedule.
    #[error("t = {t} too close to the interval ends for a central stencil with dt = {dt}")]
    StencilOutOfRange { t: f64, dt: f64 },

    /// A sweep row could not be computed.
    #[error("sweep row eta = {eta} failed: {source}")]
    SweepRow { eta: f64, source: Box<Error> },

    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidInput { what, message: message.into() }
    }

    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidConfig { field, message: message.into() }
    }
}
