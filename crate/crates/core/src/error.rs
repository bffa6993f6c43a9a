use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cycle detected: element {0} would lie below itself")]
    CycleDetected(usize),
    #[error("element index {index} out of range for poset on {size} elements")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("rank {0} too large: the lattice would exceed 64 elements")]
    RankTooLarge(u32),
    #[error("size {got} too large: at most {max} supported here")]
    SizeTooLarge { got: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate entry: {0}")]
    DuplicateEntry(String),
    #[error("chain digits must form a permutation of 1..=k: {0}")]
    NotAPermutation(String),
    #[error("not an isomorphism onto the dual: {0}")]
    NotAnIsomorphism(String),
    #[error("poset is not a Boolean lattice with a bottom element")]
    NotABooleanLattice,
    #[error("memo budget exceeded: more than {cap} order ideals visited")]
    MemoBudgetExceeded { cap: usize },
    #[error("LRME set is not admissible: {0}")]
    NotAdmissible(String),
    #[error("labeling violates the legality conditions: {0}")]
    InvalidOmegaLabeling(String),
    #[error("permutation is not omega-legal at position {0}")]
    NotOmegaLegal(usize),
    #[error("permutation is not prefix-order maximal at position {0}")]
    NotInLambdaMax(usize),
    #[error("unknown poset name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
