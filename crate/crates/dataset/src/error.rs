use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{file}: checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    ChecksumMismatch { file: String, stored: u64, computed: u64 },
    #[error("{file}: format version {found} (this build reads version {expected})")]
    VersionMismatch { file: String, found: u32, expected: u32 },
    #[error("{file}: truncated file")]
    TruncatedFile { file: String },
    #[error("{file}: bad format: {reason}")]
    Format { file: String, reason: String },
    #[error("[{section}] contains unrecognized key `{key}`")]
    UnknownKey { section: String, key: String },
    #[error("[{section}] is missing required key `{key}`")]
    MissingKey { section: String, key: String },
    #[error("[{section}] {key}: cannot parse `{value}`")]
    BadValue { section: String, key: String, value: String },
    #[error("episode {episode}: expert failed {attempts} consecutive attempts: {last}")]
    ExpertExhausted { episode: u64, attempts: u32, last: drforge_world::WorldError },
    #[error(transparent)]
    World(#[from] drforge_world::WorldError),
    #[error(transparent)]
    DomainRand(#[from] drforge_domainrand::DomainRandError),
}
