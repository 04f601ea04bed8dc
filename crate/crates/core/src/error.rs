use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points coincide (distance {distance:e} m)")]
    ZeroDistance { distance: f64 },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("directivity exponent must be > 0, got {0}")]
    InvalidDirectivity(f64),

    #[error("half-power beamwidth must lie in (0, pi) rad, got {0}")]
    InvalidHpbw(f64),

    #[error("threshold epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not converge: best estimate {best_re:e}{best_im:+e}i, estimated error {est_error:e} after {nodes_used} nodes")]
    QuadratureNotConverged {
        best_re: f64,
        best_im: f64,
        est_error: f64,
        nodes_used: usize,
    },

    #[error("normalizer A(t,0) = {0:e} is degenerate")]
    DegenerateNormalizer(f64),

    #[error("unit error: {0}")]
    Unit(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDistance { .. } => "zero_distance",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidDirectivity(_) => "invalid_directivity",
            Error::InvalidHpbw(_) => "invalid_hpbw",
            Error::InvalidEpsilon(_) => "invalid_epsilon",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
            Error::DegenerateNormalizer(_) => "degenerate_normalizer",
            Error::Unit(_) => "unit_error",
        }
    }
}
