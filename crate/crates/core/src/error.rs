use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse group definition: {0}")]
    Parse(String),

    #[error("not a Latin square: {line} {index} repeats {value} (positions {first} and {second})")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        value: usize,
        first: usize,
        second: usize,
    },

    #[error("operation is not associative: ({x}+{y})+{z} != {x}+({y}+{z})")]
    NotAssociative { x: usize, y: usize, z: usize },

    #[error("table has no two-sided identity element")]
    NoIdentity,

    #[error("element {x} has no two-sided inverse")]
    NoInverse { x: usize },

    #[error("least prime factor is undefined for the trivial group")]
    TrivialGroup,

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("element {element} is out of range for a group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },

    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal: -{g}+{h}+{g} leaves it")]
    NotNormal { g: usize, h: usize },

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("automorphism does not stabilize the normal subgroup (moves {element})")]
    NotInvariant { element: usize },

    #[error("automorphism enumeration refused: order {order} above cap {cap} and no generating set of size <= {max_generators}")]
    AutomorphismCapExceeded {
        order: usize,
        cap: usize,
        max_generators: usize,
    },

    #[error("no invariant normal subgroup with a field quotient was found")]
    NoFieldQuotient,

    #[error("the Balister-Wheeler bound needs an automorphism")]
    MissingAutomorphism,

    #[error("matching hypothesis violated: n+m-1 = {needed} exceeds p(G) = {p}")]
    HallHypothesis { needed: usize, p: usize },

    #[error("no system of distinct representative sums was found")]
    MatchingFailed,

    #[error("no modulus available for a field of order {p}^{alpha}")]
    FieldUnsupported { p: u32, alpha: u32 },

    #[error("coefficient precondition violated: {0}")]
    CoefficientPrecondition(String),

    #[error("polynomial degree {degree} exceeds the expansion cap {cap}")]
    ExpansionCap { degree: usize, cap: usize },

    #[error("group of order {order} is not nilpotent")]
    NotNilpotent { order: usize },

    #[error("invalid search plan: {0}")]
    InvalidPlan(String),

    #[error("unknown group {name:?}; known names: {known}")]
    UnknownGroup { name: String, known: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
