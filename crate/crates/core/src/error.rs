use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid group spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("malformed group file {path}: line {line}: {reason}")]
    MalformedFile { path: String, line: usize, reason: String },
    #[error("group of order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("element is not a member of the group")]
    NotAMember,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup must be proper")]
    NotProper,
    #[error("group is not solvable")]
    NotSolvable,
    #[error("group is cyclic; the standard presentation needs a non-cyclic group")]
    CyclicGroup,
    #[error("group has no elements of order {0}")]
    NoElementsOfOrder(u64),
    #[error("action is not by automorphisms")]
    NotAutomorphic,
    #[error("trace-squared {0} cannot occur for a non-identity element of PSL2(7)")]
    ImpossibleTrace(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("simplicial complex is not closed under faces: {0}")]
    NotClosed(String),
    #[error("poset is not atomized: atoms {witness:?} are bounded but have no join")]
    NotAtomized { witness: Vec<usize> },
    #[error("certificate does not replay: {0}")]
    InvalidCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
