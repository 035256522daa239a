use thiserror::Error;

/// A caller broke an operation's precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("intuitionistic sequents need exactly one formula on the right, found {0}")]
    RightNotSingleton(usize),
    #[error("classical input must be desugared (no `&` or `|` nodes)")]
    NotDesugared,
    #[error("initiality is only defined for critical sequents")]
    NotCritical,
    #[error("{0}")]
    Dialect(String),
    #[error("{0}")]
    Request(String),
}
