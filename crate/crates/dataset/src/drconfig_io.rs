//! Randomization-config serialization shared by manifests and run configs:
//! a `[domainrand]` section (plus `[augment]` when 2D augmentation is on)
//! and a canonical 64-bit digest binding datasets to the exact config that
//! generated them.

use crate::error::DatasetError;
use crate::kvfile::{KvFile, KvSection};
use drforge_domainrand::{DRConfig, ImgAugConfig, TextureMode};
use drforge_scene::fnv1a64;

pub const DOMAINRAND_SECTION: &str = "domainrand";
pub const AUGMENT_SECTION: &str = "augment";

const DOMAINRAND_KEYS: [&str; 10] = [
    "texture_mode",
    "light_distance_range",
    "light_azimuth_range",
    "light_polar_range",
    "light_coeff_offset",
    "object_hsv_offset",
    "camera_pos_offset",
    "camera_ang_offset",
    "camera_fov_offset",
    "img_aug",
];

const AUGMENT_KEYS: [&str; 5] =
    ["brightness_offset", "hue_offset", "saturation_range", "contrast_range", "translation_px"];

fn texture_mode_name(mode: TextureMode) -> &'static str {
    match mode {
        TextureMode::Off => "off",
        TextureMode::Procedural => "procedural",
        TextureMode::Assets => "assets",
    }
}

fn pair(v: (f64, f64)) -> String {
    format!("{} {}", v.0, v.1)
}

/// Emit the `[domainrand]` section (and `[augment]` if applicable).
pub fn dr_to_sections(cfg: &DRConfig) -> Vec<KvSection> {
    let mut s = KvSection::new(DOMAINRAND_SECTION);
    s.push("texture_mode", texture_mode_name(cfg.texture_mode));
    s.push("light_distance_range", pair(cfg.light_distance_range));
    s.push("light_azimuth_range", pair(cfg.light_azimuth_range));
    s.push("light_polar_range", pair(cfg.light_polar_range));
    s.push("light_coeff_offset", cfg.light_coeff_offset);
    let (h, sa, v) = cfg.object_hsv_offset;
    s.push("object_hsv_offset", format!("{h} {sa} {v}"));
    s.push("camera_pos_offset", cfg.camera_pos_offset);
    s.push("camera_ang_offset", cfg.camera_ang_offset);
    s.push("camera_fov_offset", cfg.camera_fov_offset);
    s.push("img_aug", if cfg.img_aug.is_some() { "on" } else { "off" });
    let mut out = vec![s];
    if let Some(aug) = &cfg.img_aug {
        let mut a = KvSection::new(AUGMENT_SECTION);
        a.push("brightness_offset", aug.brightness_offset);
        a.push("hue_offset", aug.hue_offset);
        a.push("saturation_range", pair(aug.saturation_range));
        a.push("contrast_range", pair(aug.contrast_range));
        a.push("translation_px", aug.translation_px);
        out.push(a);
    }
    out
}

/// Parse a DRConfig out of a parsed kv file. Unknown keys are hard errors.
pub fn dr_from_kv(kv: &KvFile) -> Result<DRConfig, DatasetError> {
    let s = kv.require_section(DOMAINRAND_SECTION)?;
    s.reject_unknown(&DOMAINRAND_KEYS)?;
    let mode_raw = s.require("texture_mode")?;
    let texture_mode = match mode_raw {
        "off" => TextureMode::Off,
        "procedural" => TextureMode::Procedural,
        "assets" => TextureMode::Assets,
        other => return Err(s.bad_value("texture_mode", other)),
    };
    let [d0, d1] = s.parse_floats("light_distance_range")?;
    let [a0, a1] = s.parse_floats("light_azimuth_range")?;
    let [p0, p1] = s.parse_floats("light_polar_range")?;
    let [h, sa, v] = s.parse_floats("object_hsv_offset")?;
    let aug_raw = s.require("img_aug")?;
    let img_aug = match aug_raw {
        "off" => None,
        "on" => {
            let a = kv.require_section(AUGMENT_SECTION)?;
            a.reject_unknown(&AUGMENT_KEYS)?;
            let [s0, s1] = a.parse_floats("saturation_range")?;
            let [c0, c1] = a.parse_floats("contrast_range")?;
            Some(ImgAugConfig {
                brightness_offset: a.parse("brightness_offset")?,
                hue_offset: a.parse("hue_offset")?,
                saturation_range: (s0, s1),
                contrast_range: (c0, c1),
                translation_px: a.parse("translation_px")?,
            })
        }
        other => return Err(s.bad_value("img_aug", other)),
    };
    Ok(DRConfig {
        texture_mode,
        light_distance_range: (d0, d1),
        light_azimuth_range: (a0, a1),
        light_polar_range: (p0, p1),
        light_coeff_offset: s.parse("light_coeff_offset")?,
        object_hsv_offset: (h, sa, v),
        camera_pos_offset: s.parse("camera_pos_offset")?,
        camera_ang_offset: s.parse("camera_ang_offset")?,
        camera_fov_offset: s.parse("camera_fov_offset")?,
        img_aug,
    })
}

/// Canonical 64-bit digest of a randomization config: FNV-1a over a fixed
/// little-endian field encoding. Datasets embed it so training can detect a
/// config/dataset mismatch.
pub fn dr_digest(cfg: &DRConfig) -> u64 {
    let mut bytes = Vec::with_capacity(128);
    bytes.push(match cfg.texture_mode {
        TextureMode::Off => 0u8,
        TextureMode::Procedural => 1,
        TextureMode::Assets => 2,
    });
    let mut f = |v: f64| bytes.extend_from_slice(&v.to_le_bytes());
    f(cfg.light_distance_range.0);
    f(cfg.light_distance_range.1);
    f(cfg.light_azimuth_range.0);
    f(cfg.light_azimuth_range.1);
    f(cfg.light_polar_range.0);
    f(cfg.light_polar_range.1);
    f(cfg.light_coeff_offset);
    f(cfg.object_hsv_offset.0);
    f(cfg.object_hsv_offset.1);
    f(cfg.object_hsv_offset.2);
    f(cfg.camera_pos_offset);
    f(cfg.camera_ang_offset);
    f(cfg.camera_fov_offset);
    match &cfg.img_aug {
        None => bytes.push(0),
        Some(a) => {
            bytes.push(1);
            let mut f = |v: f64| bytes.extend_from_slice(&v.to_le_bytes());
            f(a.brightness_offset);
            f(a.hue_offset);
            f(a.saturation_range.0);
            f(a.saturation_range.1);
            f(a.contrast_range.0);
            f(a.contrast_range.1);
            bytes.extend_from_slice(&(a.translation_px as i64).to_le_bytes());
        }
    }
    fnv1a64(&bytes)
}
