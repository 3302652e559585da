use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `value` is not one of the nine Heegner numbers.
    NotHeegner(i64),
    /// `(A² + H)` (or the Euler-Rabinowitsch constant numerator) is not divisible as required.
    NonIntegralConstant(String),
    EvenModulus(String),
    BaseOutOfRange(String),
    OutOfOracleRange(u64),
    LimitTooLarge(u64),
    EmptyRange { lo: i64, hi: i64 },
    InvalidRange(String),
    NotPrime(u64),
    Domain(String),
    ValueTooSmall { n: i64, value: String },
    /// Some prime divides every value of the polynomial, so the Euler product vanishes.
    Inadmissible { prime: u64 },
    InvalidConfig(String),
    ExhaustedAttempts(u64),
    NotStructured(String),
    ExponentNotCoprime(String),
    Parse(String),
    MissingField(&'static str),
    InvariantViolation(String),
    EvenUpperIndex(u64),
    ChannelOutOfRange { channel: u64, n2: u64 },
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHeegner(v) => write!(
                f,
                "{v} is not a Heegner number (expected one of 1, 2, 3, 7, 11, 19, 43, 67, 163)"
            ),
            Error::NonIntegralConstant(msg) => write!(f, "NonIntegralConstant: {msg}"),
            Error::EvenModulus(n) => write!(f, "EvenModulus: Jacobi symbol needs an odd modulus, got {n}"),
            Error::BaseOutOfRange(msg) => write!(f, "BaseOutOfRange: {msg}"),
            Error::OutOfOracleRange(n) => {
                write!(f, "OutOfOracleRange: Wilson oracle only covers [2, 10000], got {n}")
            }
            Error::LimitTooLarge(n) => write!(f, "LimitTooLarge: sieve limit {n} exceeds 10^8"),
            Error::EmptyRange { lo, hi } => write!(f, "EmptyRange: [{lo}, {hi}] contains no integers"),
            Error::InvalidRange(msg) => write!(f, "InvalidRange: {msg}"),
            Error::NotPrime(p) => write!(f, "NotPrime: {p} is not prime"),
            Error::Domain(msg) => write!(f, "DomainError: {msg}"),
            Error::ValueTooSmall { n, value } => {
                write!(f, "ValueTooSmall: f({n}) = {value} < 3, log f(n) is not usable")
            }
            Error::Inadmissible { prime } => write!(
                f,
                "Inadmissible: {prime} divides every value of the polynomial, the constant is zero"
            ),
            Error::InvalidConfig(msg) => write!(f, "InvalidConfig: {msg}"),
            Error::ExhaustedAttempts(n) => {
                write!(f, "ExhaustedAttempts: no structured prime found in {n} attempts")
            }
            Error::NotStructured(msg) => write!(f, "NotStructured: {msg}"),
            Error::ExponentNotCoprime(msg) => write!(f, "ExponentNotCoprime: {msg}"),
            Error::Parse(msg) => write!(f, "ParseError: {msg}"),
            Error::MissingField(name) => write!(f, "MissingField: {name}"),
            Error::InvariantViolation(msg) => write!(f, "InvariantViolation: {msg}"),
            Error::EvenUpperIndex(n) => {
                write!(f, "EvenUpperIndex: n2 must be odd for a symmetric plan, got {n}")
            }
            Error::ChannelOutOfRange { channel, n2 } => {
                write!(f, "ChannelOutOfRange: channel {channel} not in [0, {n2}]")
            }
            Error::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
