//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature budget exceeded after {subdivisions} subdivisions on [{lo}, {hi}] (error {error:e})")]
    BudgetExceeded {
        lo: f64,
        hi: f64,
        subdivisions: usize,
        error: f64,
    },

    #[error("integrand does not decay over the probe window starting at {lo} (scale {decay_scale}, |f| = {last:e})")]
    TailEstimate { lo: f64, decay_scale: f64, last: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("polylogarithm domain error: |z| = {modulus} > 1")]
    PolylogDomain { modulus: f64 },

    #[error("argument m² + k² = {re} + {im}i lies on the branch cut")]
    BranchCut { re: f64, im: f64 },

    #[error("amplitude denominator vanishes near k = {re} + {im}i")]
    PoleProximity { re: f64, im: f64 },

    #[error("transmission amplitude vanishes (|w1| = 1 decouples the cells): the Bloch discriminant is undefined")]
    Transparency,

    #[error("phase-shift grid too coarse between k = {k_lo} and k = {k_hi}")]
    GridTooCoarse { k_lo: f64, k_hi: f64 },

    #[error("secular function vanishes on the contour near theta = {theta}, k = {re} + {im}i")]
    ContourCrossing { theta: f64, re: f64, im: f64 },

    #[error("negative band with kappa_min = {kappa_min} requires mass >= kappa_min, got {mass}")]
    UnitarityViolation { kappa_min: f64, mass: f64 },

    #[error("negative-band root bracketing failed; h(i kappa) profile: {profile:?}")]
    RootBracketing { profile: Vec<(f64, f64)> },

    #[error("root search found only {found} of {wanted} roots below k = {k_max}")]
    RootsMissing {
        found: usize,
        wanted: usize,
        k_max: f64,
    },

    #[error("finite-difference step {step} collides with the domain boundary at {x}")]
    StepCollision { x: f64, step: f64 },

    #[error("ODE oracle unitarity drift {drift:e} exceeds 1e-8")]
    StepSize { drift: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{context}: {source}")]
    At {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attaches the coordinates at which a nested evaluation failed.
    pub fn at(self, context: impl Into<String>) -> Error {
        Error::At {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all location wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            other => other,
        }
    }
}
