use thiserror::Error;

use crate::exactalg::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial must be monic and non-constant")]
    NotMonicNonConstant,
    #[error("elements belong to different setups")]
    SetupMismatch,
    #[error("invalid setup: {}", fmt_violations(.0))]
    InvalidSetup(Vec<Violation>),
    #[error("element is not a unit of the localized ring")]
    NotAUnit,
    #[error("denominator {0} is not a unit in Z[1/k]")]
    NotKSmooth(String),
    #[error("p-adic valuation needs a constant element")]
    NonConstantPadic,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("valuation index {index} out of range (block has {len} polynomials)")]
    ValuationIndex { index: usize, len: usize },
    #[error("p-adic valuations do not induce characters of Q")]
    PadicCharacter,
    #[error("the zero vector is not a character")]
    ZeroCharacter,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn fmt_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
