use thiserror::Error;

use crate::quantity::Dimension;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch {
        left: Box<Dimension>,
        right: Box<Dimension>,
    },

    #[error("non-finite result in {0}")]
    NonFinite(&'static str),

    #[error("non-integer power {exponent} of negative value {base}")]
    NegativeBase { base: f64, exponent: f64 },

    #[error("bad override: {0}")]
    BadOverride(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),

    #[error("adiabatic index gamma = 1/3 is a pole of the slope relation")]
    PoleGamma,

    #[error("adiabatic index must exceed 1/3, got {0}")]
    GammaOutOfRange(f64),

    #[error("slope a = 5/3 corresponds to unbounded gamma (Kolmogorov limit)")]
    KolmogorovPole,

    #[error("slope must lie in the open interval (1, 3), got {0}")]
    SlopeOutOfRange(f64),

    #[error("turbulence degree kappa must lie in (0, 1], got {0}")]
    KappaOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spectra do not cross inside the bracket [{lo:e}, {hi:e}] 1/m")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("invalid bracket [{lo:e}, {hi:e}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("Monte Carlo sample {index} exceeded {limit} rejected draws")]
    DegenerateSamples { index: usize, limit: usize },

    #[error("sweep needs at least one slope and one kappa")]
    EmptySweep,
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFinite(_) | Error::NoCrossing { .. } | Error::DegenerateSamples { .. } => 3,
            _ => 2,
        }
    }

    /// Short stable identifier used for row-level error markers.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::NegativeBase { .. } => "negative_base",
            Error::BadOverride(_) => "bad_override",
            Error::Config { .. } => "config",
            Error::NonPositiveWavenumber(_) => "non_positive_wavenumber",
            Error::PoleGamma => "pole_gamma",
            Error::GammaOutOfRange(_) => "gamma_out_of_range",
            Error::KolmogorovPole => "kolmogorov_pole",
            Error::SlopeOutOfRange(_) => "slope_out_of_range",
            Error::KappaOutOfRange(_) => "kappa_out_of_range",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NoCrossing { .. } => "no_crossing",
            Error::InvalidBracket { .. } => "invalid_bracket",
            Error::DegenerateSamples { .. } => "degenerate_samples",
            Error::EmptySweep => "empty_sweep",
        }
    }
}
