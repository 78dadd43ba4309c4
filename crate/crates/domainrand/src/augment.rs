//! 2D image augmentation baseline: per-image color jitter plus an integer
//! pixel translation with edge replication. Applied to training frames only;
//! evaluation frames are always used as rendered.

use crate::DomainRandError;
use drforge_render::{quantize_channel, Image};
use drforge_scene::{hsv_to_rgb, rgb_to_hsv, ColorHSV, ColorRGB, RngStream};

/// Ranges for the 2D augmentation recipe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImgAugConfig {
    /// Brightness is shifted by U[-b, +b].
    pub brightness_offset: f64,
    /// Hue is shifted by U[-h, +h] (hue wraps mod 1).
    pub hue_offset: f64,
    /// Saturation is scaled by U[lo, hi].
    pub saturation_range: (f64, f64),
    /// Contrast factor U[lo, hi], pivoting at 0.5.
    pub contrast_range: (f64, f64),
    /// Integer translation U{-t..=t} pixels per axis, edge replicated.
    pub translation_px: i32,
}

impl Default for ImgAugConfig {
    fn default() -> Self {
        ImgAugConfig {
            brightness_offset: 0.12,
            hue_offset: 0.05,
            saturation_range: (0.5, 1.5),
            contrast_range: (0.5, 1.5),
            translation_px: 4,
        }
    }
}

impl ImgAugConfig {
    /// A config under which `augment_image` is the identity.
    pub fn identity() -> Self {
        ImgAugConfig {
            brightness_offset: 0.0,
            hue_offset: 0.0,
            saturation_range: (1.0, 1.0),
            contrast_range: (1.0, 1.0),
            translation_px: 0,
        }
    }

    pub fn validate(&self) -> Result<(), DomainRandError> {
        if self.brightness_offset < 0.0 || self.hue_offset < 0.0 {
            return Err(DomainRandError::InvalidConfig("augmentation offsets must be >= 0"));
        }
        if self.saturation_range.0 <= 0.0 || self.saturation_range.1 < self.saturation_range.0 {
            return Err(DomainRandError::InvalidConfig(
                "saturation factor range must be positive and ordered",
            ));
        }
        if self.contrast_range.0 <= 0.0 || self.contrast_range.1 < self.contrast_range.0 {
            return Err(DomainRandError::InvalidConfig(
                "contrast factor range must be positive and ordered",
            ));
        }
        if self.translation_px < 0 {
            return Err(DomainRandError::InvalidConfig("translation must be >= 0 pixels"));
        }
        Ok(())
    }
}

/// Apply the color part of the augmentation to one RGB value in [0,1]:
/// hue shift (wrapping), saturation scale, contrast about 0.5, brightness
/// shift, each channel clamped to [0,1].
pub fn augment_color(
    rgb: ColorRGB,
    hue_shift: f64,
    sat_factor: f64,
    contrast: f64,
    brightness: f64,
) -> ColorRGB {
    let hsv = rgb_to_hsv(rgb);
    let shifted = ColorHSV::new(
        (hsv.h + hue_shift).rem_euclid(1.0),
        (hsv.s * sat_factor).clamp(0.0, 1.0),
        hsv.v,
    );
    let c = hsv_to_rgb(shifted);
    let adjust = |x: f64| (((x - 0.5) * contrast + 0.5) + brightness).clamp(0.0, 1.0);
    ColorRGB::new(adjust(c.r), adjust(c.g), adjust(c.b))
}

/// Shift an image by an integer pixel offset, replicating edge pixels into
/// the uncovered band. Positive `dx` moves content right, positive `dy`
/// moves it down.
pub fn translate_replicate(img: &Image, dx: i32, dy: i32) -> Image {
    let (w, h) = (img.width() as i32, img.height() as i32);
    let mut out = Image::new(img.width(), img.height());
    for y in 0..h {
        for x in 0..w {
            let sx = (x - dx).clamp(0, w - 1) as usize;
            let sy = (y - dy).clamp(0, h - 1) as usize;
            out.set_pixel(x as usize, y as usize, img.pixel(sx, sy));
        }
    }
    out
}

/// Randomized augmentation: hue -> saturation -> contrast -> brightness ->
/// integer translation. One set of parameters is drawn per image.
pub fn augment_image(img: &Image, cfg: &ImgAugConfig, rng: &mut RngStream) -> Image {
    let hue = rng.uniform(-cfg.hue_offset, cfg.hue_offset);
    let sat = rng.uniform(cfg.saturation_range.0, cfg.saturation_range.1);
    let contrast = rng.uniform(cfg.contrast_range.0, cfg.contrast_range.1);
    let brightness = rng.uniform(-cfg.brightness_offset, cfg.brightness_offset);
    let span = (2 * cfg.translation_px + 1) as usize;
    let dx = rng.index(span) as i32 - cfg.translation_px;
    let dy = rng.index(span) as i32 - cfg.translation_px;

    let mut colored = Image::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let [r, g, b] = img.pixel(x, y);
            let c = augment_color(
                ColorRGB::new(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0),
                hue,
                sat,
                contrast,
                brightness,
            );
            colored.set_pixel(
                x,
                y,
                [quantize_channel(c.r), quantize_channel(c.g), quantize_channel(c.b)],
            );
        }
    }
    translate_replicate(&colored, dx, dy)
}
