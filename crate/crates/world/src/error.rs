#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WorldError {
    #[error("could not place objects after {0} rejected samples")]
    SamplingFailed(u32),
    #[error("scripted expert made no progress for {0} steps")]
    OracleStuck(u32),
}
