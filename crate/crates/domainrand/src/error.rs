use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainRandError {
    /// Asset texture mode was requested but the library holds no textures.
    #[error("texture library is empty; assets mode needs at least one texture")]
    EmptyTextureLibrary,
    /// A texture directory could not be read or a file in it failed to parse.
    #[error("texture directory {0}: {1}")]
    TextureDir(String, String),
    /// A randomization config violates one of its range invariants.
    #[error("invalid randomization config: {0}")]
    InvalidConfig(&'static str),
}
