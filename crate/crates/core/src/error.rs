use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(u32),

    #[error("quadrature order must be positive")]
    InvalidOrder,

    #[error("log_gamma is only defined here for positive finite arguments, got {0}")]
    GammaDomain(f64),

    #[error("factorial ratio index k = {k} exceeds 2*ell - 2 = {max}")]
    RatioIndex { k: usize, max: usize },

    #[error("degree {requested} exceeds the available maximum {max}")]
    DegreeOutOfRange { requested: usize, max: usize },

    #[error("evaluation point {0} lies outside [0, 1]")]
    PointOutOfRange(f64),

    #[error("direct monomial evaluation is limited to k <= {max}, got {k}")]
    DirectSumLimit { k: usize, max: usize },

    #[error("degree 0 is not part of the zero-mean boundary space")]
    ZeroDegree,

    #[error("malformed profile: {0}")]
    Profile(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid preset parameters: {0}")]
    PresetParams(String),

    #[error("boundary field is inconsistent: {0}")]
    Field(String),

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("invalid inversion request: {0}")]
    Inversion(String),

    #[error("unsupported dimension {0} for explicit harmonics (only 2 and 3)")]
    UnsupportedDimension(u32),

    #[error("invalid harmonic: {0}")]
    Harmonic(String),
}

pub type Result<T> = std::result::Result<T, Error>;
