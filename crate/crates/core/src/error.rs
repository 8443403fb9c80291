use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("arrow `{arrow}` is a loop")]
    Loop { arrow: String },
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("quiver contains an oriented 2-cycle")]
    TwoCycle,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not skew-symmetric at ({i}, {j})")]
    NotSkewSymmetric { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("search exceeded {cap} states without a verdict")]
    Indeterminate { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows `{0}` and `{1}` do not compose")]
    NotComposable(String, String),
    #[error("relation terms are not parallel")]
    NotParallel,
    #[error("relation has no terms")]
    Empty,
    #[error("relation has a zero coefficient")]
    ZeroCoefficient,
    #[error("relation term of length {0} violates admissibility")]
    NotAdmissible(usize),
    #[error("quiver contains an oriented 2-cycle")]
    TwoCycle,
    #[error("quiver is not of finite cluster type")]
    NotFiniteType,
    #[error("arrow `{arrow}` has {count} shortest paths (at most two allowed)")]
    TooManyShortestPaths { arrow: String, count: usize },
    #[error("no nilpotency bound up to cap {cap}")]
    NilpotencyCapExceeded { cap: usize },
    #[error("relation is not in the ideal")]
    NotInIdeal,
    #[error("minimality readings disagree: definition says {by_definition}, path factorization says {by_factorization}")]
    MinimalityReadingsDiverge {
        by_definition: bool,
        by_factorization: bool,
    },
    #[error(transparent)]
    Mutation(#[from] MutationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TiltError {
    #[error("invalid tilted presentation: {0}")]
    Invalid(String),
    #[error("constructed quiver is not of finite cluster type")]
    NotFiniteType,
    #[error("constructed quiver is not of Dynkin type")]
    NotDynkin,
    #[error("input relation `{0}` missing from synthesized relations")]
    InconsistentRelations(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooSmall(usize),
    #[error("({i}, {j}) is not a diagonal of the {m}-gon")]
    NotADiagonal { m: usize, i: usize, j: usize },
    #[error("diagonal {0} is not in the triangulation")]
    NotInTriangulation(String),
}
