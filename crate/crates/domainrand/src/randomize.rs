//! Scene-level randomization: applies the per-factor samplers to a nominal
//! scene. Set surfaces (table, walls, floor) and the gripper get random
//! textures; the light, per-object identity colors, and both cameras are
//! jittered. Task-object surfaces keep their solid colors — only their HSV
//! is perturbed, never their texture.

use crate::config::{DRConfig, TextureMode};
use crate::error::DomainRandError;
use crate::library::TextureLibrary;
use crate::samplers::{sample_camera, sample_light, sample_object_color};
use crate::scenegen::SceneSetup;
use drforge_render::{BaseColor, Material, SurfaceTag};
use drforge_scene::RngStream;
use std::sync::Arc;

const TEXTURED_SURFACES: [(&str, SurfaceTag); 4] = [
    ("table", SurfaceTag::Table),
    ("wall", SurfaceTag::Wall),
    ("floor", SurfaceTag::Floor),
    ("gripper", SurfaceTag::Gripper),
];

/// Produce a randomized copy of a nominal scene setup. The parent stream is
/// not advanced: every aspect draws from its own named child, so callers can
/// hand the same per-episode stream to other samplers without interference.
/// Aspects whose config is a point distribution are skipped outright, which
/// makes an all-off config return the setup byte-for-byte unchanged.
pub fn randomize_scene(
    nominal: &SceneSetup,
    cfg: &DRConfig,
    library: &TextureLibrary,
    rng: &RngStream,
) -> Result<SceneSetup, DomainRandError> {
    cfg.validate()?;
    let mut out = nominal.clone();

    if cfg.texture_mode != TextureMode::Off {
        let tex_root = rng.child_named("textures");
        for (label, tag) in TEXTURED_SURFACES {
            let mut stream = tex_root.child_named(label);
            let texture = match cfg.texture_mode {
                TextureMode::Procedural => library.sample_procedural(&mut stream),
                TextureMode::Assets => library.sample_asset(&mut stream)?,
                TextureMode::Off => unreachable!(),
            };
            for inst in out.scene.instances.iter_mut().filter(|i| i.tag == tag) {
                inst.material = Material::textured(Arc::clone(&texture), inst.material.uv_scale);
            }
        }
    }

    if !cfg.light_is_fixed() {
        let mut stream = rng.child_named("light");
        out.scene.lights = vec![sample_light(cfg, &mut stream)];
    }

    if !cfg.color_is_fixed() {
        let colors_root = rng.child_named("colors");
        let mut groups: Vec<u32> = out
            .scene
            .instances
            .iter()
            .filter(|i| is_colorable(i.tag))
            .map(|i| i.group)
            .collect();
        groups.sort_unstable();
        groups.dedup();
        for group in groups {
            let nominal_color = out
                .scene
                .instances
                .iter()
                .find(|i| i.group == group && is_colorable(i.tag))
                .and_then(|i| match i.material.base {
                    BaseColor::Solid(c) => Some(c),
                    BaseColor::Textured(_) => None,
                });
            let Some(nominal_color) = nominal_color else { continue };
            let mut stream = colors_root.child(group as u64);
            let sampled = sample_object_color(nominal_color, cfg.object_hsv_offset, &mut stream);
            for inst in out
                .scene
                .instances
                .iter_mut()
                .filter(|i| i.group == group && is_colorable(i.tag))
            {
                inst.material =
                    Material { base: BaseColor::Solid(sampled), uv_scale: inst.material.uv_scale };
            }
        }
    }

    if !cfg.camera_is_fixed() {
        let cam_root = rng.child_named("cameras");
        for (i, cam) in out.cameras.iter_mut().enumerate() {
            let mut stream = cam_root.child(i as u64);
            *cam = sample_camera(cam, cfg, &mut stream);
        }
    }

    Ok(out)
}

/// Surfaces whose identity color is jittered (never textured): task objects,
/// goal markers, and sweeping particles.
fn is_colorable(tag: SurfaceTag) -> bool {
    matches!(tag, SurfaceTag::Object | SurfaceTag::Marker)
}
