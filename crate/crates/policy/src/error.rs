use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Dataset(#[from] drforge_dataset::DatasetError),
    #[error("checkpoint: {0}")]
    Checkpoint(#[from] drforge_tensor::CheckpointError),
    #[error("parameter `{name}`: {reason}")]
    ParamMismatch { name: String, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}
