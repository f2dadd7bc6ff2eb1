use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("pole at K = {at}: denominator factor {factor} vanishes")]
    Pole { at: BigRational, factor: String },

    #[error(
        "non-local sector: pairing ({shift}, {charge}) = {pairing} is not an integer constant"
    )]
    NonLocal {
        shift: String,
        charge: String,
        pairing: String,
    },

    #[error("weight vectors over different ranks (N = {0} vs N = {1})")]
    RankMismatch(usize, usize),

    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: usize, range: String },

    #[error("term budget of {budget} operations exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("only defined at the critical level K = 0")]
    NotCritical,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
