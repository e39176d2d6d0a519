use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("malformed permutation {index}: {reason}")]
    MalformedPermutation { index: usize, reason: String },
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("cayley table: {0}")]
    NotLatinSquare(String),
    #[error("cayley table: index 0 is not a two-sided identity")]
    NoIdentity,
    #[error("cayley table: associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element index {0} out of range")]
    BadElement(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup lattice enumeration exceeds budget: {0}")]
    LatticeBudget(String),
    #[error("parse error in group file: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index 0 at position {pos}; variables start at x1")]
    ZeroVariable { pos: usize },
    #[error("assignment has {got} elements but word has arity {arity}")]
    ShortAssignment { got: usize, arity: usize },
    #[error("exhaustive evaluation needs {needed} operations, budget is {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("word is not a left-normed chain: {0}")]
    NotChain(String),
}

/// Top-level error for operations that mix groups, words and budgets.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid group spec `{spec}`: {msg}")]
    Spec { spec: String, msg: String },
    #[error("invalid parameters: {0}")]
    Parameters(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::Group(GroupError::LatticeBudget(_))
                | Error::Group(GroupError::OrderCapExceeded { .. })
                | Error::Word(WordError::Budget { .. })
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
