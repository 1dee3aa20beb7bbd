use thiserror::Error;

/// Errors raised by the simulation and verification engines.
///
/// Diagnostic variants (see [`Error::is_diagnostic`]) describe experiments
/// that ran but could not produce a conclusive answer; everything else is a
/// misuse of the API or an invalid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site index {site} out of range for lattice with {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("{object} has {got} entries but the lattice expects {expected}")]
    LatticeMismatch {
        object: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("lattice sides must be positive (got {0:?})")]
    InvalidSides(Vec<usize>),

    #[error("periodic boundary requires every side >= 3 (got {0:?})")]
    PeriodicSideTooShort(Vec<usize>),

    #[error("crossing is undefined along a periodic axis")]
    PeriodicCrossing,

    #[error("axis {axis} out of range for a {dims}-dimensional lattice")]
    AxisOutOfRange { axis: usize, dims: usize },

    #[error("{what} supports at most {max} sites (requested {n})")]
    CapacityExceeded {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("function is not monotone: f is smaller at configuration {hi:#b} than at {lo:#b}")]
    NotMonotone { lo: u64, hi: u64 },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("rate {0} must be finite and nonnegative")]
    InvalidRate(f64),

    #[error("horizon {0} must be finite and nonnegative")]
    InvalidHorizon(f64),

    #[error("stirring kernel must be symmetric: rate({x}->{y}) = {forward} but rate({y}->{x}) = {backward}")]
    AsymmetricKernel {
        x: usize,
        y: usize,
        forward: f64,
        backward: f64,
    },

    #[error("coupling J({x},{y}) = {value} is negative; only ferromagnetic couplings are supported")]
    NegativeCoupling { x: usize, y: usize, value: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("measure is not strictly positive: {} configuration(s) carry zero mass", zero_atoms.len())]
    NotStrictlyPositive { zero_atoms: Vec<u64> },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no crossing bracketed by the grid: {0}")]
    NoCrossing(String),

    #[error("boundary contamination: {discarded} of {total} replicas touched the window edge (limit {limit_percent}%)")]
    BoundaryContamination {
        discarded: u64,
        total: u64,
        limit_percent: u32,
    },

    #[error("finite-size contamination: {count} replicas reached displacement >= L/4")]
    DisplacementContamination { count: u64 },
}

impl Error {
    /// True for failures of an experiment rather than of its inputs:
    /// the run completed but the data cannot answer the question.
    pub fn is_diagnostic(&self) -> bool {
        matches!(
            self,
            Error::NoCrossing(_)
                | Error::BoundaryContamination { .. }
                | Error::DisplacementContamination { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
