use thiserror::Error;

use crate::lattice::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("tower base must be odd and at least 3, got {0}")]
    EvenBase(i64),

    #[error("window does not contain the origin")]
    OriginNotInWindow,
    #[error("forbidden pattern #{index} does not match the window: {detail}")]
    DomainMismatch { index: usize, detail: String },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("budget of {limit} search nodes exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("the zero configuration is not admissible or no zero symbol is declared")]
    NoZeroPoint,

    #[error("block map does not fix the zero point")]
    ZeroNotFixed,
    #[error("alphabet has no track structure")]
    NoTracks,
    #[error("invalid track index {0}")]
    InvalidTrack(usize),
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("invalid block map: {0}")]
    InvalidMap(String),
    #[error("map is not a permutation of the periodic points")]
    NotAPermutation,

    #[error("gate permutation is not a bijection of the admissible patterns")]
    NotBijective,
    #[error("gate is not context safe, witness surrounding {witness:?}")]
    ContextUnsafe { witness: Vec<(Point, u8)> },
    #[error("lattice {0} is incompatible with the gate lattice")]
    IncompatibleLattice(String),
    #[error("permutation is odd")]
    OddPermutation,
    #[error("margin {margin} is smaller than the window size {window}")]
    MarginTooSmall { margin: i64, window: i64 },
    #[error("permutation degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("supports overlap at {0:?}")]
    OverlappingSupports(Point),
    #[error("configuration is not admissible, window placed at {0:?}")]
    Inadmissible(Point),
    #[error("configuration is zero")]
    ZeroConfig,
    #[error("configurations {0} and {1} lie in the same orbit")]
    OrbitsNotDistinct(usize, usize),
    #[error("separation too small: {0}")]
    SeparationTooSmall(String),
    #[error("configurations are orbit equivalent")]
    OrbitEquivalent,
    #[error("hypotheses fail: {0}")]
    HypothesesFail(String),

    #[error("extension count {0} is below 2")]
    DegenerateExtensionCount(String),
}

pub type Result<T> = std::result::Result<T, Error>;
