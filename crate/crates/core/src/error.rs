use thiserror::Error;

/// Everything the engine can refuse to do.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in Q(zeta_{0})")]
    ZeroInverse(u32),
    #[error("mixed cyclotomic orders {0} and {1}")]
    OrderMismatch(u32, u32),
    #[error("unsupported order {0}")]
    UnsupportedOrder(u32),
    #[error("unbounded enumeration: {0}")]
    Unbounded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("data file {file}: {msg}")]
    Data { file: String, msg: String },
    #[error("inconsistent chain: {0}")]
    Chain(String),
    #[error("rank {0} is outside the involution table")]
    RankOutOfTable(u32),
    #[error("symplectic automorphisms of order {0} do not exist")]
    NoSymplectic(u32),
    #[error("unknown example {0}")]
    UnknownExample(String),
    #[error("discriminant vanishes identically")]
    ZeroDiscriminant,
    #[error("vanishing orders {0:?} fall outside the Kodaira table")]
    NonMinimal((u32, u32, u32)),
    #[error("equation is not invariant: {0}")]
    NotInvariant(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
