use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("group order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("invalid cyclic factor order {0} (must be at least 2)")]
    InvalidOrder(u64),
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("invalid Cayley table: {0}")]
    InvalidCayleyTable(String),
    #[error("element set is not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group of order {0} is not a p-group")]
    NotAPGroup(usize),
    #[error("group is not nilpotent")]
    NotNilpotent,
    #[error("group does not have prime exponent")]
    NotExponentP,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no lift exists: {0}")]
    NoLiftExists(String),
    #[error("inadmissible size ({r1}, {r2}): {reason}")]
    InadmissibleSize {
        r1: usize,
        r2: usize,
        reason: String,
    },
    #[error("orders {0} and {1} are not coprime")]
    NotCoprime(usize, usize),
    #[error("cannot pad a structure on an even-order factor to a prescribed size")]
    PaddingImpossible,
    #[error("construction degenerates for d(G) = 3")]
    DegenerateRank,
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
