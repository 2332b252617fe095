use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid minimal polynomial: {0}")]
    InvalidMinPoly(String),
    #[error("minimal polynomial is reducible (factor {factor:?})")]
    ReducibleMinPoly { factor: Vec<i64> },
    #[error("root hint matches {found} roots instead of exactly one")]
    AmbiguousRootHint { found: usize },
    #[error("extension is not Galois")]
    NotGaloisExtension,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("lines are identical")]
    IdenticalLines,
    #[error("points are identical")]
    IdenticalPoints,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero vector is not a projective point or line")]
    ZeroVector,
    #[error("lines {0} and {1} coincide")]
    DuplicateLine(usize, usize),
    #[error("all lines are concurrent (pencil)")]
    PencilRejected,
    #[error("an arrangement needs at least 3 lines, got {0}")]
    TooFewLines(usize),
    #[error("permutation degree {got} does not match {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("invalid combinatorics: {0}")]
    InvalidCombinatorics(String),
    #[error("support {0:?} is not carried by contiguous strands")]
    NonContiguousSupport(Vec<usize>),
    #[error("line {line} is not in the support {support:?}")]
    LineNotInSupport { line: usize, support: Vec<usize> },
    #[error("line {0} is not carried by any strand")]
    LineAbsent(usize),
    #[error("invalid braid: {0}")]
    InvalidBraid(String),
    #[error("wiring diagram inconsistent with the arrangement: {0}")]
    InconsistentWiring(String),
    #[error("no certified projection frame found after {0} attempts")]
    FrameSearchExhausted(usize),
    #[error("segment is degenerate: real parts coincide along the whole segment")]
    DegenerateSegment,
    #[error("invalid tensor: {0}")]
    InvalidTensor(String),
    #[error("permutation is not an automorphism of the combinatorics")]
    NotAnAutomorphism,
    #[error("tensors have different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("line {0} is shared outside the common prefix")]
    SharedLineOutsidePrefix(usize),
    #[error("line {0} differs between the two arrangements inside the requested prefix")]
    PrefixMismatch(usize),
    #[error("the two arrangements are identical")]
    DegenerateUnion,
    #[error("no generic choice found after {0} attempts")]
    GenericityExhausted(usize),
    #[error("integer overflow during exact elimination")]
    Overflow,
    #[error("schema error: {0}")]
    Schema(String),
}
