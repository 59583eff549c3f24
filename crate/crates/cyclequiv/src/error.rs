use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u128, bound: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("{n} is not coprime to the characteristic {p}")]
    NotCoprime { n: u64, p: u64 },
    #[error("polynomial does not divide x^{n}-1")]
    NotADivisor { n: u64 },
    #[error("multiset index {idx} out of range 1..={max}")]
    IndexOutOfRange { idx: u128, max: u128 },
    #[error("enumeration of {size} multisets exceeds the budget of {budget}")]
    EnumerationTooLarge { size: u128, budget: u128 },
    #[error("coset multiplicity {got} exceeds the repeated-root cap {cap}")]
    MultiplicityTooLarge { got: u32, cap: u64 },
    #[error("generator matrix is rank deficient (rank {rank}, {rows} rows)")]
    RankDeficient { rank: usize, rows: usize },
    #[error("message space of {size} codewords exceeds the cap {cap}")]
    MessageSpaceTooLarge { size: u128, cap: u128 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid {what}: {detail}")]
    Invalid {
        what: &'static str,
        detail: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
