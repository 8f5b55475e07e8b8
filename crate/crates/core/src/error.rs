use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis is singular (determinant zero)")]
    SingularBasis,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "period {period} does not annihilate the quotient: period*Z^d is not inside the lattice"
    )]
    BadPeriod { period: String },

    #[error("tile {tile} is not a Cartesian coset")]
    NotCartesian { tile: usize },

    #[error("coset family is not a tiling: {reason}")]
    NotATiling { reason: String },

    #[error(
        "no translate partner found for tile {maximal}; this contradicts the Cartesian tiling theorem and indicates an internal bug"
    )]
    WitnessNotFound { maximal: usize },

    #[error("verification torus has {points} points, over the budget of {budget}")]
    TorusTooLarge { points: String, budget: u64 },

    #[error("unsupported dimension {dim}: {reason}")]
    BadDimension { dim: usize, reason: &'static str },

    #[error("budget exceeded: {what}")]
    BudgetExceeded { what: String },

    #[error("a coset family needs at least one tile")]
    EmptyFamily,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
