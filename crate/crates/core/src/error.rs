use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("x = {x} is not an equilibrium (|f(x,0)| = {residual:e})")]
    NotAnEquilibrium { x: f64, residual: f64 },

    #[error("no center: {0}")]
    NoCenter(String),

    #[error("energy h = {h} outside the period annulus (0, {ceiling})")]
    EnergyOutOfRange { h: f64, ceiling: f64 },

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("no real branch of the level curve at x = {x} (h = {h})")]
    BranchSolveFailure { x: f64, h: f64 },

    #[error("quadrature tolerance not met: estimate {estimate:e} > tolerance {tolerance:e}")]
    ToleranceNotMet { estimate: f64, tolerance: f64 },

    #[error("at h = {h}: {source}")]
    AtEnergy { h: f64, source: Box<Error> },

    #[error("closed form overflow guard: p + n = {0} exceeds 20")]
    Overflow(u32),

    #[error("ambiguous sign change in ({h_left}, {h_right}): quadrature error dominates the swing")]
    AmbiguousSignChange { h_left: f64, h_right: f64 },

    #[error("duplicate weight m = q + p = {0} in exponent set")]
    DuplicateWeight(u32),

    #[error("basis integral J_(q={q},p={p}) is not positive at h = {h}")]
    BasisSignViolation { q: u32, p: u32, h: f64 },

    #[error("ill-conditioned placement (condition number {condition:e}): {detail}")]
    IllConditioned { condition: f64, detail: String },

    #[error("invalid wave speed: {0}")]
    InvalidSpeed(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no period annulus: {0}")]
    NoPeriodAnnulus(String),

    #[error("zero dispersion coefficient: {0}")]
    ZeroDispersion(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("model inconsistency: {0}")]
    Inconsistent(String),

    #[error("trajectory escaped the period annulus: {0}")]
    EscapedAnnulus(String),

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("scenario: {0}")]
    Scenario(String),
}

impl Error {
    pub(crate) fn at(self, h: f64) -> Error {
        Error::AtEnergy { h, source: Box::new(self) }
    }

    /// Innermost error, skipping `AtEnergy` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtEnergy { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures caused by the caller's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self.root(),
            Error::ToleranceNotMet { .. }
                | Error::IllConditioned { .. }
                | Error::AmbiguousSignChange { .. }
                | Error::Integrator(_)
                | Error::BranchSolveFailure { .. }
                | Error::BracketFailure(_)
                | Error::EscapedAnnulus(_)
        )
    }
}
