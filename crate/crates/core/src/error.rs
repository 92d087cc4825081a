use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree {0} is outside 1..9")]
    DegreeOutOfRange(i64),
    #[error("surface kind {kind} does not exist in degree {degree}")]
    KindMismatch { kind: String, degree: i64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not a (-1)-class")]
    NotMinusOneClass(String),
    #[error("{0} is not a (-2)-class")]
    NotMinusTwoClass(String),
    #[error("not a valid simple system: {0}")]
    InvalidSimpleSystem(String),
    #[error("dual cone not pointed: constraint rank {rank} < dimension {dim}")]
    NotPointed { rank: usize, dim: usize },
    #[error("ray not met by hyperplane: functional value {0} <= 0")]
    RayNotMet(String),
    #[error("restricted intersection form is degenerate")]
    DegenerateForm,
    #[error("invalid surface: {}", .0.join("; "))]
    InvalidSurface(Vec<String>),
    #[error("{0} is not an irreducible (-1)-curve of this surface")]
    NotMinusOneCurve(String),
    #[error("operation requires a blow-up of degree at most 7")]
    NeedsBlowup,
    #[error("matrix is not an automorphism of the lattice: {0}")]
    NotIsometry(String),
    #[error("action does not stabilize simple system")]
    ActionDoesNotStabilizeSystem,
    #[error("action does not stabilize surface")]
    ActionDoesNotStabilizeSurface,
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("group too large; supply explicit generators instead (degree {0})")]
    GroupTooLarge(u8),
    #[error("cannot parse class name {0:?}")]
    ClassName(String),
    #[error("unknown root type {0:?}")]
    RootTypeName(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
