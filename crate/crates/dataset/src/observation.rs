//! Policy observations: the last three frames from each of the two views
//! plus three timesteps of gripper proprioception. History before the start
//! of an episode is padded by repeating the first step.

use crate::format::EpisodeData;
use drforge_render::Image;
use drforge_world::WorldState;

/// Frames of history stacked per view.
pub const FRAME_HISTORY: usize = 3;
/// Per-timestep proprioception: `[x, y, z, sin yaw, cos yaw]`.
pub const PROPRIO_STEP_DIM: usize = 5;
/// Full proprioception vector: three timesteps, oldest first.
pub const PROPRIO_DIM: usize = FRAME_HISTORY * PROPRIO_STEP_DIM;

/// One policy input: for each view, frames at `t-2, t-1, t` (oldest first),
/// plus the matching three proprioception vectors flattened oldest-first.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub views: [[Image; FRAME_HISTORY]; 2],
    pub proprio: [f32; PROPRIO_DIM],
}

/// Gripper proprioception of a world state.
pub fn proprio_of(state: &WorldState) -> [f32; PROPRIO_STEP_DIM] {
    let p = state.gripper.position;
    let yaw = state.gripper.yaw;
    [p.x as f32, p.y as f32, p.z as f32, yaw.sin() as f32, yaw.cos() as f32]
}

/// Map history offsets to concrete step indices with start-of-episode
/// padding: frame `k` of the stack (k = 0 oldest) comes from step
/// `t + k - 2`, clamped at 0.
pub fn history_indices(t: usize) -> [usize; FRAME_HISTORY] {
    let mut out = [0; FRAME_HISTORY];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = (t + k).saturating_sub(FRAME_HISTORY - 1);
    }
    out
}

/// Build the observation for step `t` of a decoded episode.
pub fn build_observation(episode: &EpisodeData, t: usize) -> Observation {
    assert!(t < episode.steps.len(), "step {t} out of range");
    let idx = history_indices(t);
    let views = [0, 1].map(|v| idx.map(|i| episode.steps[i].views[v].clone()));
    let mut proprio = [0.0f32; PROPRIO_DIM];
    for (k, i) in idx.into_iter().enumerate() {
        proprio[k * PROPRIO_STEP_DIM..(k + 1) * PROPRIO_STEP_DIM]
            .copy_from_slice(&episode.steps[i].proprio);
    }
    Observation { views, proprio }
}

/// Build an observation from a live rollout history (oldest first, length
/// 1..=3); shorter histories are padded by repeating the first entry.
pub fn observation_from_history(
    history: &[([Image; 2], [f32; PROPRIO_STEP_DIM])],
) -> Observation {
    assert!(!history.is_empty() && history.len() <= FRAME_HISTORY);
    let pick = |k: usize| {
        let pad = FRAME_HISTORY - history.len();
        &history[k.saturating_sub(pad)]
    };
    let views = [0, 1].map(|v| [0, 1, 2].map(|k| pick(k).0[v].clone()));
    let mut proprio = [0.0f32; PROPRIO_DIM];
    for k in 0..FRAME_HISTORY {
        proprio[k * PROPRIO_STEP_DIM..(k + 1) * PROPRIO_STEP_DIM].copy_from_slice(&pick(k).1);
    }
    Observation { views, proprio }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::StepRecord;
    use drforge_world::TaskId;

    fn marked_image(mark: u8) -> Image {
        let mut img = Image::new(2, 2);
        img.set_pixel(0, 0, [mark, 0, 0]);
        img
    }

    fn episode(n: usize) -> EpisodeData {
        EpisodeData {
            task: TaskId::Stacking,
            width: 2,
            height: 2,
            root_seed: 0,
            episode_index: 0,
            dr_digest: 0,
            steps: (0..n)
                .map(|t| StepRecord {
                    views: [marked_image(t as u8), marked_image(100 + t as u8)],
                    proprio: [t as f32, 0.0, 0.0, 0.0, 1.0],
                    action: [0.0; 7],
                })
                .collect(),
        }
    }

    #[test]
    fn start_of_episode_pads_with_the_first_step() {
        let e = episode(6);
        let o = build_observation(&e, 0);
        for k in 0..3 {
            assert_eq!(o.views[0][k].pixel(0, 0)[0], 0);
            assert_eq!(o.proprio[5 * k], 0.0);
        }
        let o = build_observation(&e, 1);
        assert_eq!([o.views[0][0].pixel(0, 0)[0], o.views[0][1].pixel(0, 0)[0], o.views[0][2].pixel(0, 0)[0]], [0, 0, 1]);
    }

    #[test]
    fn interior_steps_stack_in_order() {
        let e = episode(6);
        let o = build_observation(&e, 5);
        assert_eq!([o.views[0][0].pixel(0, 0)[0], o.views[0][1].pixel(0, 0)[0], o.views[0][2].pixel(0, 0)[0]], [3, 4, 5]);
        assert_eq!([o.views[1][2].pixel(0, 0)[0]], [105]);
        assert_eq!([o.proprio[0], o.proprio[5], o.proprio[10]], [3.0, 4.0, 5.0]);
    }

    #[test]
    fn proprio_encodes_a_unit_heading() {
        use drforge_scene::{Pose, Vec3};
        let state = drforge_world::WorldState {
            gripper: Pose::new(Vec3::new(0.1, -0.2, 0.15), 0.7),
            openness: 0.5,
            attachment: None,
            objects: Vec::new(),
            particles: Vec::new(),
            time_step: 0,
        };
        let p = proprio_of(&state);
        let norm = p[3] * p[3] + p[4] * p[4];
        assert!((norm - 1.0).abs() < 1e-6);
        assert_eq!(p[0], 0.1f32);
    }

    #[test]
    fn live_history_padding_matches_dataset_padding() {
        let e = episode(6);
        let h: Vec<_> = (0..2)
            .map(|t| {
                ([e.steps[t].views[0].clone(), e.steps[t].views[1].clone()], e.steps[t].proprio)
            })
            .collect();
        let live = observation_from_history(&h);
        let stored = build_observation(&e, 1);
        assert_eq!(live, stored);
    }
}
