use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular laminate stiffness ({0})")]
    Singular(&'static str),

    #[error("negative radicand in {what} for harmonic {n}")]
    NegativeRadicand { what: &'static str, n: u32 },

    #[error("model outside its validity range: {0}")]
    OutOfValidity(String),

    #[error("unbounded capacity: the unit-torque stress state is zero")]
    Unbounded,

    #[error("no real buckling root found ({0})")]
    NoBucklingRoot(String),

    #[error("config error in [{section}] {key}: {msg}")]
    Config { section: String, key: String, msg: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(section: &str, key: &str, msg: impl Into<String>) -> Self {
        Error::Config { section: section.to_string(), key: key.to_string(), msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
