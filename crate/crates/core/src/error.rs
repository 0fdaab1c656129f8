use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has no component above tolerance")]
    ZeroVector,
    #[error("orientation undecidable: |g(v, tau)| = {0:e} is within tolerance")]
    OrientationUndecidable(f64),
    #[error("boost direction is not a unit vector (norm {0})")]
    BadDirection(f64),
    #[error("matrix is not a restricted Lorentz transformation")]
    NotRestrictedLorentz,
    #[error("metric is degenerate: eigenvalue {0:e} within tolerance")]
    DegenerateMetric(f64),
    #[error("metric does not have signature (-,+,+,+)")]
    BadSignature,
    #[error("cone point has vanishing spatial part")]
    ZeroSpatialPart,
    #[error("vector is not null (g(v,v) = {0:e})")]
    NotNull(f64),
    #[error("homothety scale must be strictly positive, got {0}")]
    NonPositiveScale(f64),
    #[error("coordinates {coords:?} lie outside the domain of chart `{chart}`")]
    OutOfDomain { chart: String, coords: [f64; 4] },
    #[error("sampling set is empty")]
    EmptySampling,
    #[error("ternary product undefined: sections are proportional at an event (pairing {0:e})")]
    ProportionalSections(f64),
    #[error("scalar field vanishes at an event (value {0:e})")]
    ZeroDivisor(f64),
    #[error("scalar field changes sign across the sampling")]
    SignChange,
    #[error("the canonical one-form is only defined on the future cone")]
    PastConeUnsupported,
    #[error("curve is not null at sample {index}")]
    NonNullCurve { index: usize },
    #[error("curve is not regular at sample {index}")]
    NotRegular { index: usize },
    #[error("curve parameter is not strictly increasing at sample {index}")]
    NonIncreasingParameter { index: usize },
    #[error("trajectory left the chart domain at t = {t}")]
    LeftDomain { t: f64 },
    #[error("nullness drift {drift:e} exceeds {limit:e}; reduce the step")]
    StepTooLarge { drift: f64, limit: f64 },
    #[error("step must be strictly positive, got {0}")]
    BadStep(f64),
    #[error("unknown spacetime `{0}`")]
    UnknownSpacetime(String),
    #[error("sections live on different spacetimes")]
    SpacetimeMismatch,
    #[error("spacetime `{0}` has no global frame")]
    NoGlobalFrame(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
