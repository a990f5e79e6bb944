use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure tokens shared by every module. The `Display` form starts with the
/// token name so the CLI can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ZeroPolynomial: polynomial is identically zero")]
    ZeroPolynomial,
    #[error("PoleHit: denominator vanished at {0}")]
    PoleHit(String),
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("DegenerateMap: ad - bc = 0")]
    DegenerateMap,
    #[error("IllConditioned: {0}")]
    IllConditioned(String),
    #[error("ResidualFailure: {0}")]
    ResidualFailure(String),
    #[error("ExhaustedRetries: {0}")]
    ExhaustedRetries(String),
    #[error("NotContractive: |psi'(0)| = {0}")]
    NotContractive(f64),
    #[error("IsometryDefect: {0}")]
    IsometryDefect(String),
    #[error("BranchFailure: {0}")]
    BranchFailure(String),
    #[error("NonCommuting: {0}")]
    NonCommuting(String),
    #[error("HorizonOverflow: {0}")]
    HorizonOverflow(String),
    #[error("FractionalTime: t = {0} is not a multiple of the grid step")]
    FractionalTime(f64),
    #[error("BadInverse: {0}")]
    BadInverse(String),
    #[error("NotInner: {0}")]
    NotInner(String),
    #[error("UnsupportedCase: {0}")]
    UnsupportedCase(String),
    #[error("DegenerateSymbol: {0}")]
    DegenerateSymbol(String),
    #[error("MissingTime: {0}")]
    MissingTime(f64),
    #[error("InvalidSymbol: {0}")]
    InvalidSymbol(String),
}

impl Error {
    /// Leading token of the message, e.g. `"ResidualFailure"`.
    pub fn token(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::PoleHit(_) => "PoleHit",
            Error::DomainError(_) => "DomainError",
            Error::DegenerateMap => "DegenerateMap",
            Error::IllConditioned(_) => "IllConditioned",
            Error::ResidualFailure(_) => "ResidualFailure",
            Error::ExhaustedRetries(_) => "ExhaustedRetries",
            Error::NotContractive(_) => "NotContractive",
            Error::IsometryDefect(_) => "IsometryDefect",
            Error::BranchFailure(_) => "BranchFailure",
            Error::NonCommuting(_) => "NonCommuting",
            Error::HorizonOverflow(_) => "HorizonOverflow",
            Error::FractionalTime(_) => "FractionalTime",
            Error::BadInverse(_) => "BadInverse",
            Error::NotInner(_) => "NotInner",
            Error::UnsupportedCase(_) => "UnsupportedCase",
            Error::DegenerateSymbol(_) => "DegenerateSymbol",
            Error::MissingTime(_) => "MissingTime",
            Error::InvalidSymbol(_) => "InvalidSymbol",
        }
    }
}
