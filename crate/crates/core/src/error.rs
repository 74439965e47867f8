use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("vector {0} is not in the lattice")]
    NotInLattice(String),
    #[error("rays are linearly dependent")]
    DependentRays,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("point {0} lies outside the fan support")]
    OutsideSupport(String),
    #[error("vector {0} is already a ray of the fan")]
    DuplicateRay(String),
    #[error("supports differ: {0}")]
    SupportMismatch(String),
    #[error("wall is not of flipping type: {0}")]
    NotFlipping(String),
    #[error("circuit is not flippable in isolation: {0}")]
    NotIsolated(String),
    #[error("wall is not divisorial: {0}")]
    NotDivisorial(String),
    #[error("star of ray {0} does not match the circuit")]
    StarMismatch(String),
    #[error("heights are not generic: {0}")]
    NonGeneric(String),
    #[error("ray {0} is not on the lower hull")]
    DroppedRay(String),
    #[error("fan admits no strictly convex height function (not projective)")]
    NotProjective,
    #[error("pairs are not K-equivalent: {0}")]
    NotKEquivalent(String),
    #[error("non-standard coefficient {0}")]
    NonStandardCoefficient(String),
    #[error("negative wall of fiber type: {0}")]
    FiberTypeWall(String),
    #[error("step budget of {0} exhausted")]
    StepBudget(usize),
    #[error("engine invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Engine bugs, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
