use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not a unit modulo the given prime power")]
    NotAUnit(String),
    #[error("invalid recurrence spec: {0}")]
    InvalidSpec(String),
    #[error("resource guard tripped: {0}")]
    ResourceGuard(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("witness search exhausted: no index m <= {bound} with nu_{prime}(F_m) >= {level}")]
    SearchExhausted { prime: u64, level: u32, bound: u64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error: 3 for resource guards, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard(_) => 3,
            _ => 2,
        }
    }
}
