use thiserror::Error;

use crate::surgery::SurgeryRejection;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge id {id} is out of range for a ground set of {len} edges")]
    InvalidEdge { id: usize, len: usize },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("edge set is not a cycle: {0}")]
    NotACycle(String),

    #[error("edge set is not connected")]
    Disconnected,

    #[error("invalid input: {0}")]
    Input(String),

    #[error("surgery precondition failed: {0}")]
    Precondition(SurgeryRejection),

    #[error("{what} needs {needed} steps but the cap is {cap}")]
    Resource {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("all {family_size} covering-pair sites were queried")]
    Exhausted { family_size: u64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
