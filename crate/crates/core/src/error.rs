use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("limiting value a_inf must be nonzero")]
    ZeroLimitBond,

    #[error("limiting weight w_inf = {0} must be positive")]
    NonPositiveLimitWeight(f64),

    #[error("coefficient a({0}) is zero")]
    ZeroBond(i64),

    #[error("weight w({site}) = {value} must be positive")]
    NonPositiveWeight { site: i64, value: f64 },

    #[error("non-finite value in `{field}` at site {site}")]
    NonFinite { field: &'static str, site: i64 },

    #[error("index window [{n_min}, {n_max}] is empty")]
    EmptyWindow { n_min: i64, n_max: i64 },

    #[error("index window of {len} sites exceeds the supported maximum of {max}")]
    WindowTooLong { len: usize, max: usize },

    #[error("array `{field}` has {found} entries but the window holds {expected} sites")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("breakpoints must be nonempty and strictly increasing")]
    InvalidBreakpoints,

    #[error("spectral parameter {z} is off the unit circle")]
    OffCircle { z: Complex64 },

    #[error("spectral parameter {z} is too close to z = +1 or z = -1")]
    NearBandEdge { z: Complex64 },

    #[error("lambda = {lambda} lies outside the band [{lambda_min}, {lambda_max}]")]
    OutsideBand {
        lambda: f64,
        lambda_min: f64,
        lambda_max: f64,
    },

    #[error("invalid circle grid: {0}")]
    InvalidGrid(&'static str),

    #[error("site {n} lies outside the solution range [{lo}, {hi}]")]
    IndexOutOfRange { n: i64, lo: i64, hi: i64 },

    #[error("singular 2x2 system while {0}")]
    SingularSystem(&'static str),

    #[error("left and right tails disagree on 1/T by {deviation:e}")]
    InconsistentTransmission { deviation: f64 },

    #[error("at theta = {theta}: {source}")]
    AtPoint {
        theta: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures caused by malformed input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::ZeroLimitBond
            | Error::NonPositiveLimitWeight(_)
            | Error::ZeroBond(_)
            | Error::NonPositiveWeight { .. }
            | Error::NonFinite { .. }
            | Error::EmptyWindow { .. }
            | Error::WindowTooLong { .. }
            | Error::LengthMismatch { .. }
            | Error::InvalidBreakpoints
            | Error::InvalidGrid(_)
            | Error::OutsideBand { .. } => true,
            Error::AtPoint { source, .. } => source.is_input_error(),
            _ => false,
        }
    }

    pub(crate) fn at_theta(self, theta: f64) -> Error {
        Error::AtPoint {
            theta,
            source: Box::new(self),
        }
    }
}
