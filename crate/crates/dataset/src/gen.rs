//! Dataset generation. Demonstrations: run the scripted expert until it
//! succeeds (retrying with fresh seeds up to a cap), draw one appearance for
//! the episode, render every step from both cameras. Localization samples:
//! one random cube scene per sample, each with its own appearance.
//!
//! All randomness is derived from the root seed and the episode/sample
//! index alone, so output is byte-identical regardless of thread count, and
//! a shorter dataset is a prefix of a longer one with the same seed.

use crate::drconfig_io::dr_digest;
use crate::error::DatasetError;
use crate::format::{
    encode_episode, encode_proxy_shard, EpisodeData, ProxySample, ProxyShard, StepRecord,
};
use crate::manifest::{DatasetKind, Manifest, MANIFEST_NAME};
use crate::observation::proprio_of;
use drforge_domainrand::{
    randomize_scene, tabletop_scene, transfer_appearance, DRConfig, SceneSetup, TextureLibrary,
};
use drforge_render::{render, Image};
use drforge_scene::{fnv1a64, RngStream};
use drforge_world::{
    proxy_scene, rollout_oracle, Action, TaskId, TaskSpec, WorldError, WorldState,
};
use rayon::prelude::*;
use std::fs;
use std::path::Path;

/// Consecutive expert failures tolerated per episode before giving up.
pub const MAX_EXPERT_ATTEMPTS: u32 = 20;
/// Localization samples per shard file.
pub const PROXY_SHARD_SIZE: usize = 1000;

#[derive(Debug, Clone)]
pub struct DemoGenConfig {
    pub task: TaskId,
    pub episodes: usize,
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub dr: DRConfig,
}

#[derive(Debug, Clone)]
pub struct ProxyGenConfig {
    pub samples: usize,
    pub width: usize,
    pub height: usize,
    pub root_seed: u64,
    pub dr: DRConfig,
    pub shard_size: usize,
}

pub fn episode_file_name(index: u64) -> String {
    format!("episode-{index:06}.drf")
}

pub fn proxy_file_name(shard: u64) -> String {
    format!("proxy-{shard:05}.drf")
}

fn action_vec(a: &Action) -> [f32; 7] {
    [
        a.v.x as f32,
        a.v.y as f32,
        a.v.z as f32,
        a.omega.x as f32,
        a.omega.y as f32,
        a.omega.z as f32,
        a.g as f32,
    ]
}

/// Render both camera views of a state under a fixed episode appearance
/// (materials, lights, and cameras drawn once at the start of the episode).
pub fn render_state(
    state: &WorldState,
    appearance: &SceneSetup,
    width: usize,
    height: usize,
) -> [Image; 2] {
    let mut setup = tabletop_scene(state);
    transfer_appearance(appearance, &mut setup);
    [0, 1].map(|v| render(&setup.scene, &setup.cameras[v], width, height))
}

/// Generate one demonstration. The expert reruns with a fresh seed until it
/// succeeds; the appearance stream is tied to the succeeding attempt, so the
/// result depends only on `(root_seed, index)`.
pub fn generate_episode(
    cfg: &DemoGenConfig,
    library: &TextureLibrary,
    index: u64,
) -> Result<EpisodeData, DatasetError> {
    let spec = TaskSpec::for_task(cfg.task);
    let base = RngStream::new(cfg.root_seed).child_named("episode").child(index);
    let mut last: Option<WorldError> = None;
    for attempt in 0..MAX_EXPERT_ATTEMPTS {
        let attempt_rng = base.child_named("attempt").child(attempt as u64);
        let rollout = match rollout_oracle(&spec, &mut attempt_rng.child_named("world")) {
            Ok(r) if r.success => r,
            Ok(r) => {
                // Ran out the step budget without reaching the goal.
                let t = r.states.last().map_or(0, |s| s.time_step);
                last = Some(WorldError::OracleStuck(t));
                continue;
            }
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let nominal = tabletop_scene(&rollout.states[0]);
        let appearance =
            randomize_scene(&nominal, &cfg.dr, library, &attempt_rng.child_named("visuals"))?;
        let steps = (0..rollout.actions.len())
            .map(|t| StepRecord {
                views: render_state(&rollout.states[t], &appearance, cfg.width, cfg.height),
                proprio: proprio_of(&rollout.states[t]),
                action: action_vec(&rollout.actions[t]),
            })
            .collect();
        return Ok(EpisodeData {
            task: cfg.task,
            width: cfg.width,
            height: cfg.height,
            root_seed: cfg.root_seed,
            episode_index: index,
            dr_digest: dr_digest(&cfg.dr),
            steps,
        });
    }
    Err(DatasetError::ExpertExhausted {
        episode: index,
        attempts: MAX_EXPERT_ATTEMPTS,
        last: last.expect("at least one attempt ran"),
    })
}

/// Generate one localization sample: a random three-cube scene, its own
/// appearance draw, and the cube-minus-gripper offsets (green, red, yellow).
pub fn generate_proxy_sample(
    cfg: &ProxyGenConfig,
    library: &TextureLibrary,
    index: u64,
) -> Result<ProxySample, DatasetError> {
    let base = RngStream::new(cfg.root_seed).child_named("sample").child(index);
    let state = proxy_scene(&mut base.child_named("world"))?;
    let nominal = tabletop_scene(&state);
    let appearance =
        randomize_scene(&nominal, &cfg.dr, library, &base.child_named("visuals"))?;
    let views = render_state(&state, &appearance, cfg.width, cfg.height);
    let g = state.gripper.position;
    let mut targets = [0.0f32; 9];
    for cube in 0..3 {
        let p = state.object(cube as u32).pose.position;
        targets[3 * cube] = (p.x - g.x) as f32;
        targets[3 * cube + 1] = (p.y - g.y) as f32;
        targets[3 * cube + 2] = (p.z - g.z) as f32;
    }
    Ok(ProxySample { views, targets })
}

fn collect_ordered<T: Send>(
    results: Vec<Result<T, DatasetError>>,
) -> Result<Vec<T>, DatasetError> {
    results.into_iter().collect()
}

/// Generate a demonstration dataset: one file per episode plus a manifest
/// (written last) listing a checksum for every file.
pub fn generate_demos(
    cfg: &DemoGenConfig,
    library: &TextureLibrary,
    out_dir: &Path,
) -> Result<Manifest, DatasetError> {
    fs::create_dir_all(out_dir)?;
    let per_episode = (0..cfg.episodes as u64)
        .into_par_iter()
        .map(|i| {
            let episode = generate_episode(cfg, library, i)?;
            let bytes = encode_episode(&episode);
            let name = episode_file_name(i);
            fs::write(out_dir.join(&name), &bytes)?;
            Ok((name, fnv1a64(&bytes), episode.steps.len() as u64))
        })
        .collect::<Vec<Result<_, DatasetError>>>();
    let per_episode = collect_ordered(per_episode)?;
    let manifest = Manifest {
        kind: DatasetKind::Episodes,
        task: Some(cfg.task),
        width: cfg.width,
        height: cfg.height,
        root_seed: cfg.root_seed,
        records: cfg.episodes as u64,
        total_steps: per_episode.iter().map(|r| r.2).sum(),
        shard_size: 0,
        dr: cfg.dr.clone(),
        files: per_episode.into_iter().map(|(n, d, _)| (n, d)).collect(),
    };
    fs::write(out_dir.join(MANIFEST_NAME), manifest.to_text())?;
    Ok(manifest)
}

/// Generate a localization dataset in shard files of `cfg.shard_size`
/// samples (the last shard may be short), plus the manifest.
pub fn generate_proxy(
    cfg: &ProxyGenConfig,
    library: &TextureLibrary,
    out_dir: &Path,
) -> Result<Manifest, DatasetError> {
    assert!(cfg.shard_size > 0, "shard_size must be positive");
    fs::create_dir_all(out_dir)?;
    let digest = dr_digest(&cfg.dr);
    let n_shards = cfg.samples.div_ceil(cfg.shard_size) as u64;
    let per_shard = (0..n_shards)
        .into_par_iter()
        .map(|s| {
            let first = s * cfg.shard_size as u64;
            let count = (cfg.samples as u64 - first).min(cfg.shard_size as u64);
            let samples = (first..first + count)
                .map(|i| generate_proxy_sample(cfg, library, i))
                .collect::<Result<Vec<_>, _>>()?;
            let shard = ProxyShard {
                width: cfg.width,
                height: cfg.height,
                root_seed: cfg.root_seed,
                first_sample: first,
                dr_digest: digest,
                samples,
            };
            let bytes = encode_proxy_shard(&shard);
            let name = proxy_file_name(s);
            fs::write(out_dir.join(&name), &bytes)?;
            Ok((name, fnv1a64(&bytes)))
        })
        .collect::<Vec<Result<_, DatasetError>>>();
    let per_shard = collect_ordered(per_shard)?;
    let manifest = Manifest {
        kind: DatasetKind::Proxy,
        task: None,
        width: cfg.width,
        height: cfg.height,
        root_seed: cfg.root_seed,
        records: cfg.samples as u64,
        total_steps: 0,
        shard_size: cfg.shard_size as u64,
        dr: cfg.dr.clone(),
        files: per_shard,
    };
    fs::write(out_dir.join(MANIFEST_NAME), manifest.to_text())?;
    Ok(manifest)
}
