use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two permutation-equivalent profiles carry different rewards.
    #[error(
        "reward table is not anonymous for agent {agent}: profile {first:?} gives {first_value} \
         but its permutation {second:?} gives {second_value}"
    )]
    NotAnonymous {
        agent: usize,
        first: Vec<usize>,
        second: Vec<usize>,
        first_value: f64,
        second_value: f64,
    },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("non-finite derivative at t = {time}")]
    NonFinite { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
