//! Dataset generation and storage: scripted-expert demonstrations and
//! cube-localization samples rendered under a randomization config, written
//! as checksummed binary files with a plain-text manifest, and read back
//! with positioned reads so training never loads a dataset into memory.

#![forbid(unsafe_code)]

mod drconfig_io;
mod error;
mod format;
mod gen;
mod kvfile;
mod manifest;
mod observation;
mod store;

pub use drconfig_io::{dr_digest, dr_from_kv, dr_to_sections, AUGMENT_SECTION, DOMAINRAND_SECTION};
pub use error::DatasetError;
pub use format::{
    decode_episode, decode_proxy_shard, encode_episode, encode_proxy_shard, episode_record_len,
    parse_episode_header, parse_proxy_header, proxy_record_len, task_from_name, task_from_u32,
    task_to_u32, EpisodeData, EpisodeHeader, ProxyHeader, ProxySample, ProxyShard, StepRecord,
    EPISODE_HEADER_LEN, EPISODE_KIND, FORMAT_MAGIC, FORMAT_VERSION, PROXY_HEADER_LEN, PROXY_KIND,
};
pub use gen::{
    episode_file_name, generate_demos, generate_episode, generate_proxy, generate_proxy_sample,
    proxy_file_name, render_state, DemoGenConfig, ProxyGenConfig, MAX_EXPERT_ATTEMPTS,
    PROXY_SHARD_SIZE,
};
pub use kvfile::{KvFile, KvSection};
pub use manifest::{DatasetKind, Manifest, DATASET_SECTION, FILES_SECTION, MANIFEST_NAME};
pub use observation::{
    build_observation, history_indices, observation_from_history, proprio_of, Observation,
    FRAME_HISTORY, PROPRIO_DIM, PROPRIO_STEP_DIM,
};
pub use store::{verify_dataset, EpisodeStore, ProxyStore, VerifyStats};
