//! Conversion from stored dataset records to training tensors, including the
//! optional 2-D image augmentation applied on the fly during training.

use crate::error::PolicyError;
use crate::model::NetSpec;
use drforge_dataset::{EpisodeStore, Observation, ProxyStore, FRAME_HISTORY, PROPRIO_DIM};
use drforge_domainrand::{augment_image, ImgAugConfig};
use drforge_render::Image;
use drforge_scene::RngStream;
use drforge_tensor::{Scalar, Tensor};
use rayon::prelude::*;

/// One training minibatch: per-view image stacks, the optional proprioceptive
/// block, and the regression/classification targets.
pub struct Batch<E: Scalar> {
    pub views: Vec<Tensor<E>>,
    pub proprio: Option<Tensor<E>>,
    pub targets: Tensor<E>,
}

/// Augmentation context for one optimizer step: the configuration plus a
/// stream already scoped to the step, so item `i` / view `v` draws from
/// `stream.child(i).child(v)` regardless of how the batch is assembled.
pub struct AugCtx<'a> {
    pub config: &'a ImgAugConfig,
    pub stream: RngStream,
}

struct Item<E> {
    views: Vec<Vec<E>>,
    proprio: Vec<E>,
    target: Vec<E>,
}

/// Writes one RGB frame as three channel planes scaled to `[0, 1]`.
fn write_frame<E: Scalar>(img: &Image, dst: &mut [E]) {
    let plane = img.width() * img.height();
    assert_eq!(dst.len(), 3 * plane);
    let data = img.data();
    for ch in 0..3 {
        let (out, inp) = (&mut dst[ch * plane..(ch + 1) * plane], data);
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = E::from_f64(f64::from(inp[i * 3 + ch]) / 255.0);
        }
    }
}

/// Indices of the stored frames a spec consumes, oldest first. A one-frame
/// network sees only the newest frame.
fn frame_picks(spec: &NetSpec) -> Vec<usize> {
    if spec.frames == FRAME_HISTORY {
        (0..FRAME_HISTORY).collect()
    } else {
        vec![FRAME_HISTORY - 1]
    }
}

fn view_planes<E: Scalar>(
    spec: &NetSpec,
    frames: &[&Image],
    aug: Option<(&ImgAugConfig, &RngStream)>,
) -> Vec<E> {
    let plane = 3 * spec.width * spec.height;
    let mut out = vec![E::ZERO; spec.frames * plane];
    for (slot, frame) in frames.iter().enumerate() {
        let dst = &mut out[slot * plane..(slot + 1) * plane];
        match aug {
            // The stream is cloned per frame: every frame of a view gets the
            // identical draw sequence, so the whole stack shifts and recolors
            // together.
            Some((cfg, stream)) => write_frame(&augment_image(frame, cfg, &mut stream.clone()), dst),
            None => write_frame(frame, dst),
        }
    }
    out
}

fn observation_item<E: Scalar>(
    spec: &NetSpec,
    obs: &Observation,
    target: &[f32],
    aug: Option<(&ImgAugConfig, &RngStream)>,
    item_index: usize,
) -> Item<E> {
    let picks = frame_picks(spec);
    let mut views = Vec::with_capacity(spec.views);
    for v in 0..spec.views {
        let frames: Vec<&Image> = picks.iter().map(|&k| &obs.views[v][k]).collect();
        let view_aug = aug.map(|(cfg, step_stream)| {
            (cfg, step_stream.child(item_index as u64).child(v as u64))
        });
        views.push(view_planes(spec, &frames, view_aug.as_ref().map(|(c, s)| (*c, s))));
    }
    let proprio = obs.proprio[PROPRIO_DIM - spec.proprio_dim..]
        .iter()
        .map(|&p| E::from_f64(f64::from(p)))
        .collect();
    let target = target.iter().map(|&t| E::from_f64(f64::from(t))).collect();
    Item { views, proprio, target }
}

fn assemble<E: Scalar>(spec: &NetSpec, items: Vec<Item<E>>) -> Batch<E> {
    let n = items.len();
    let per_view = spec.frames * 3 * spec.height * spec.width;
    let mut views: Vec<Vec<E>> = (0..spec.views).map(|_| Vec::with_capacity(n * per_view)).collect();
    let mut proprio = Vec::with_capacity(n * spec.proprio_dim);
    let mut targets = Vec::with_capacity(n * spec.outputs);
    for item in items {
        for (v, planes) in item.views.into_iter().enumerate() {
            views[v].extend_from_slice(&planes);
        }
        proprio.extend_from_slice(&item.proprio);
        targets.extend_from_slice(&item.target);
    }
    Batch {
        views: views
            .into_iter()
            .map(|v| Tensor::from_vec(&[n, 3 * spec.frames, spec.height, spec.width], v))
            .collect(),
        proprio: (spec.proprio_dim > 0)
            .then(|| Tensor::from_vec(&[n, spec.proprio_dim], proprio)),
        targets: Tensor::from_vec(&[n, spec.outputs], targets),
    }
}

/// Assembles a policy minibatch from flat step indices into an episode store.
pub fn policy_batch<E: Scalar>(
    spec: &NetSpec,
    store: &EpisodeStore,
    indices: &[usize],
    aug: Option<&AugCtx<'_>>,
) -> Result<Batch<E>, PolicyError> {
    let items: Result<Vec<Item<E>>, PolicyError> = indices
        .par_iter()
        .enumerate()
        .map(|(i, &flat)| {
            let (obs, action) = store.sample(flat)?;
            Ok(observation_item(
                spec,
                &obs,
                &action,
                aug.map(|a| (a.config, &a.stream)),
                i,
            ))
        })
        .collect();
    Ok(assemble(spec, items?))
}

/// Assembles a localization minibatch from sample indices into a proxy store.
pub fn proxy_batch<E: Scalar>(
    spec: &NetSpec,
    store: &ProxyStore,
    indices: &[usize],
    aug: Option<&AugCtx<'_>>,
) -> Result<Batch<E>, PolicyError> {
    let items: Result<Vec<Item<E>>, PolicyError> = indices
        .par_iter()
        .enumerate()
        .map(|(i, &sample)| {
            let rec = store.read_sample(sample)?;
            let mut views = Vec::with_capacity(spec.views);
            for v in 0..spec.views {
                let view_aug = aug.map(|a| (a.config, a.stream.child(i as u64).child(v as u64)));
                views.push(view_planes(
                    spec,
                    &[&rec.views[v]],
                    view_aug.as_ref().map(|(c, s)| (*c, s)),
                ));
            }
            let target = rec.targets.iter().map(|&t| E::from_f64(f64::from(t))).collect();
            Ok(Item { views, proprio: Vec::new(), target })
        })
        .collect();
    Ok(assemble(spec, items?))
}

/// Converts one observation into a batch-of-one input (no augmentation), for
/// closed-loop inference.
pub fn observation_input<E: Scalar>(
    spec: &NetSpec,
    obs: &Observation,
) -> (Vec<Tensor<E>>, Option<Tensor<E>>) {
    let item = observation_item::<E>(spec, obs, &[], None, 0);
    let batch = assemble(
        &NetSpec { outputs: 0, ..*spec },
        vec![Item { target: Vec::new(), ..item }],
    );
    (batch.views, batch.proprio)
}

/// Converts a two-view frame pair into a batch-of-one localization input.
pub fn proxy_input<E: Scalar>(
    spec: &NetSpec,
    views: [&Image; 2],
) -> Vec<Tensor<E>> {
    assert_eq!(spec.views, 2);
    assert_eq!(spec.frames, 1);
    let planes: Vec<Vec<E>> = views.iter().map(|img| view_planes(spec, &[img], None)).collect();
    let batch = assemble(
        &NetSpec { outputs: 0, ..*spec },
        vec![Item { views: planes, proprio: Vec::new(), target: Vec::new() }],
    );
    batch.views
}
