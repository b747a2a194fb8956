use thiserror::Error;

use crate::coeffring::VarId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different coefficient rings")]
    RingMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("pole of order {order} at K = {at}")]
    HigherOrderPole { at: String, order: u32 },
    #[error("not reducible mod {p}: {reason}")]
    NotReducible { p: u64, reason: String },
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("specialization does not assign {0}")]
    IncompleteSpecialization(VarId),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("no witness found after {tried} candidates")]
    WitnessNotFound { tried: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
