//! Read access to generated datasets. Stores are opened from a directory
//! containing a manifest; training reads individual records with positioned
//! reads so a dataset never has to fit in memory. `verify_dataset` does the
//! opposite: a full integrity pass over every byte.

use crate::drconfig_io::dr_digest;
use crate::error::DatasetError;
use crate::format::{
    decode_episode, decode_proxy_shard, episode_record_len, parse_episode_header,
    parse_proxy_header, parse_step_record, parse_proxy_sample, proxy_record_len, EpisodeData,
    ProxySample, ProxyShard, Reader, StepRecord, EPISODE_HEADER_LEN, PROXY_HEADER_LEN,
};
use crate::manifest::{DatasetKind, Manifest, MANIFEST_NAME};
use crate::observation::{history_indices, Observation, FRAME_HISTORY, PROPRIO_STEP_DIM};
use drforge_scene::fnv1a64;
use std::fs;
use std::io::{Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};

fn read_exact_at(
    path: &Path,
    offset: u64,
    len: usize,
    file: &str,
) -> Result<Vec<u8>, DatasetError> {
    let mut f = fs::File::open(path)?;
    f.seek(SeekFrom::Start(offset))?;
    let mut buf = vec![0u8; len];
    f.read_exact(&mut buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            DatasetError::TruncatedFile { file: file.to_string() }
        } else {
            DatasetError::Io(e)
        }
    })?;
    Ok(buf)
}

fn read_manifest(dir: &Path) -> Result<Manifest, DatasetError> {
    let text = fs::read_to_string(dir.join(MANIFEST_NAME))?;
    Manifest::parse(&text)
}

fn expect_kind(manifest: &Manifest, kind: DatasetKind) -> Result<(), DatasetError> {
    if manifest.kind != kind {
        return Err(DatasetError::Format {
            file: MANIFEST_NAME.to_string(),
            reason: format!(
                "dataset kind is `{}`, expected `{}`",
                manifest.kind.name(),
                kind.name()
            ),
        });
    }
    Ok(())
}

/// A demonstration dataset opened for reading. Steps across all episodes
/// form one flat index space for uniform sampling.
pub struct EpisodeStore {
    dir: PathBuf,
    manifest: Manifest,
    /// File name and length of each episode, in episode order.
    episodes: Vec<(String, usize)>,
    /// `starts[e]` = flat index of episode `e`'s first step; one extra
    /// entry holds the total.
    starts: Vec<usize>,
}

impl EpisodeStore {
    /// Open a dataset directory: parse the manifest and every episode
    /// header, and cross-check them. Record data is read lazily and is not
    /// checksummed here (see `verify_dataset`).
    pub fn open(dir: &Path) -> Result<EpisodeStore, DatasetError> {
        let manifest = read_manifest(dir)?;
        expect_kind(&manifest, DatasetKind::Episodes)?;
        let expected_digest = dr_digest(&manifest.dr);
        let mut episodes = Vec::with_capacity(manifest.files.len());
        let mut starts = Vec::with_capacity(manifest.files.len() + 1);
        let mut flat = 0usize;
        for (index, (name, _)) in manifest.files.iter().enumerate() {
            let head = read_exact_at(&dir.join(name), 0, EPISODE_HEADER_LEN, name)?;
            let h = parse_episode_header(&head, name)?;
            let consistent = Some(h.task) == manifest.task
                && h.width == manifest.width
                && h.height == manifest.height
                && h.root_seed == manifest.root_seed
                && h.episode_index == index as u64
                && h.dr_digest == expected_digest;
            if !consistent {
                return Err(DatasetError::Format {
                    file: name.clone(),
                    reason: "episode header does not match the manifest".to_string(),
                });
            }
            starts.push(flat);
            flat += h.n_steps;
            episodes.push((name.clone(), h.n_steps));
        }
        starts.push(flat);
        if manifest.records != episodes.len() as u64 || manifest.total_steps != flat as u64 {
            return Err(DatasetError::Format {
                file: MANIFEST_NAME.to_string(),
                reason: "episode/step counts do not match the files".to_string(),
            });
        }
        Ok(EpisodeStore { dir: dir.to_path_buf(), manifest, episodes, starts })
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn episode_count(&self) -> usize {
        self.episodes.len()
    }

    pub fn total_steps(&self) -> usize {
        *self.starts.last().unwrap()
    }

    pub fn episode_len(&self, episode: usize) -> usize {
        self.episodes[episode].1
    }

    /// Map a flat step index to `(episode, step)`.
    pub fn locate(&self, flat: usize) -> (usize, usize) {
        assert!(flat < self.total_steps(), "flat step {flat} out of range");
        let e = self.starts.partition_point(|&s| s <= flat) - 1;
        (e, flat - self.starts[e])
    }

    fn episode_path(&self, episode: usize) -> PathBuf {
        self.dir.join(&self.episodes[episode].0)
    }

    /// Decode one episode in full, verifying its checksum.
    pub fn load_episode(&self, episode: usize) -> Result<EpisodeData, DatasetError> {
        let name = &self.episodes[episode].0;
        let bytes = fs::read(self.episode_path(episode))?;
        decode_episode(&bytes, name)
    }

    /// Read a contiguous run of step records with one positioned read.
    fn read_step_span(
        &self,
        episode: usize,
        first: usize,
        count: usize,
    ) -> Result<Vec<StepRecord>, DatasetError> {
        let (name, n_steps) = &self.episodes[episode];
        assert!(first + count <= *n_steps, "step range out of bounds");
        let rec = episode_record_len(self.manifest.width, self.manifest.height);
        let offset = EPISODE_HEADER_LEN + first * rec;
        let raw = read_exact_at(&self.episode_path(episode), offset as u64, count * rec, name)?;
        let mut r = Reader::new(&raw, name);
        (0..count)
            .map(|_| parse_step_record(&mut r, self.manifest.width, self.manifest.height))
            .collect()
    }

    /// Read a single step record.
    pub fn read_step(&self, episode: usize, step: usize) -> Result<StepRecord, DatasetError> {
        Ok(self.read_step_span(episode, step, 1)?.pop().unwrap())
    }

    /// Read the observation at `(episode, step)` plus the expert action
    /// taken there: the training pair for behavior cloning.
    pub fn read_training_pair(
        &self,
        episode: usize,
        step: usize,
    ) -> Result<(Observation, [f32; 7]), DatasetError> {
        let idx = history_indices(step);
        let span = self.read_step_span(episode, idx[0], idx[2] - idx[0] + 1)?;
        let rel = idx.map(|i| i - idx[0]);
        let views = [0, 1].map(|v| rel.map(|r| span[r].views[v].clone()));
        let mut proprio = [0.0f32; FRAME_HISTORY * PROPRIO_STEP_DIM];
        for (k, r) in rel.into_iter().enumerate() {
            proprio[k * PROPRIO_STEP_DIM..(k + 1) * PROPRIO_STEP_DIM]
                .copy_from_slice(&span[r].proprio);
        }
        let action = span[rel[2]].action;
        Ok((Observation { views, proprio }, action))
    }

    /// `read_training_pair` addressed by flat step index.
    pub fn sample(&self, flat: usize) -> Result<(Observation, [f32; 7]), DatasetError> {
        let (e, t) = self.locate(flat);
        self.read_training_pair(e, t)
    }
}

/// A localization dataset opened for reading.
pub struct ProxyStore {
    dir: PathBuf,
    manifest: Manifest,
    /// File name, first sample index, and sample count per shard, in order.
    shards: Vec<(String, u64, usize)>,
    total: usize,
}

impl ProxyStore {
    pub fn open(dir: &Path) -> Result<ProxyStore, DatasetError> {
        let manifest = read_manifest(dir)?;
        expect_kind(&manifest, DatasetKind::Proxy)?;
        let expected_digest = dr_digest(&manifest.dr);
        let mut shards = Vec::with_capacity(manifest.files.len());
        let mut next_first = 0u64;
        for (name, _) in &manifest.files {
            let head = read_exact_at(&dir.join(name), 0, PROXY_HEADER_LEN, name)?;
            let h = parse_proxy_header(&head, name)?;
            let consistent = h.width == manifest.width
                && h.height == manifest.height
                && h.root_seed == manifest.root_seed
                && h.first_sample == next_first
                && h.dr_digest == expected_digest;
            if !consistent {
                return Err(DatasetError::Format {
                    file: name.clone(),
                    reason: "shard header does not match the manifest".to_string(),
                });
            }
            shards.push((name.clone(), h.first_sample, h.n_samples));
            next_first += h.n_samples as u64;
        }
        if manifest.records != next_first {
            return Err(DatasetError::Format {
                file: MANIFEST_NAME.to_string(),
                reason: "sample count does not match the shards".to_string(),
            });
        }
        Ok(ProxyStore {
            dir: dir.to_path_buf(),
            manifest,
            shards,
            total: next_first as usize,
        })
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn sample_count(&self) -> usize {
        self.total
    }

    pub fn shard_count(&self) -> usize {
        self.shards.len()
    }

    /// Decode one shard in full, verifying its checksum.
    pub fn load_shard(&self, shard: usize) -> Result<ProxyShard, DatasetError> {
        let name = &self.shards[shard].0;
        let bytes = fs::read(self.dir.join(name))?;
        decode_proxy_shard(&bytes, name)
    }

    /// Read a single sample with a positioned read.
    pub fn read_sample(&self, index: usize) -> Result<ProxySample, DatasetError> {
        assert!(index < self.total, "sample {index} out of range");
        let s = self.shards.partition_point(|&(_, first, _)| first <= index as u64) - 1;
        let (name, first, _) = &self.shards[s];
        let rec = proxy_record_len(self.manifest.width, self.manifest.height);
        let offset = PROXY_HEADER_LEN + (index - *first as usize) * rec;
        let raw = read_exact_at(&self.dir.join(name), offset as u64, rec, name)?;
        parse_proxy_sample(&mut Reader::new(&raw, name), self.manifest.width, self.manifest.height)
    }
}

/// Totals from a successful verification pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyStats {
    pub files: usize,
    pub records: u64,
    pub total_steps: u64,
}

/// Full integrity check of a dataset directory: every file listed in the
/// manifest must exist, hash to its manifest digest, decode cleanly
/// (trailing checksum included), and agree with the manifest's metadata;
/// counts must add up.
pub fn verify_dataset(dir: &Path) -> Result<VerifyStats, DatasetError> {
    let manifest = read_manifest(dir)?;
    let expected_digest = dr_digest(&manifest.dr);
    let mut records = 0u64;
    let mut total_steps = 0u64;
    for (index, (name, digest)) in manifest.files.iter().enumerate() {
        let bytes = fs::read(dir.join(name))?;
        let computed = fnv1a64(&bytes);
        if computed != *digest {
            return Err(DatasetError::ChecksumMismatch {
                file: name.clone(),
                stored: *digest,
                computed,
            });
        }
        let mismatch = |reason: &str| DatasetError::Format {
            file: name.clone(),
            reason: reason.to_string(),
        };
        match manifest.kind {
            DatasetKind::Episodes => {
                let e = decode_episode(&bytes, name)?;
                if Some(e.task) != manifest.task
                    || e.width != manifest.width
                    || e.height != manifest.height
                    || e.root_seed != manifest.root_seed
                    || e.episode_index != index as u64
                    || e.dr_digest != expected_digest
                {
                    return Err(mismatch("episode header does not match the manifest"));
                }
                records += 1;
                total_steps += e.steps.len() as u64;
            }
            DatasetKind::Proxy => {
                let s = decode_proxy_shard(&bytes, name)?;
                if s.width != manifest.width
                    || s.height != manifest.height
                    || s.root_seed != manifest.root_seed
                    || s.first_sample != records
                    || s.dr_digest != expected_digest
                {
                    return Err(mismatch("shard header does not match the manifest"));
                }
                records += s.samples.len() as u64;
            }
        }
    }
    let counts_ok = records == manifest.records
        && (manifest.kind == DatasetKind::Proxy || total_steps == manifest.total_steps);
    if !counts_ok {
        return Err(DatasetError::Format {
            file: MANIFEST_NAME.to_string(),
            reason: "record counts do not match the files".to_string(),
        });
    }
    Ok(VerifyStats { files: manifest.files.len(), records, total_steps })
}
