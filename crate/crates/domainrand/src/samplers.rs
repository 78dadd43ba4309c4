//! Per-factor randomization samplers. Each is a pure function of
//! (nominal value, config, rng stream) and documents its draw order, so a
//! fixed stream always produces the same sample.

use crate::config::{DRConfig, NOMINAL_LIGHT_COEFF};
use drforge_scene::{
    hsv_to_rgb, rgb_to_hsv, CameraSpec, ColorHSV, ColorRGB, LightSpec, Vec3, Workspace,
};

/// Sample a light placement and intensity. Draw order: distance, azimuth,
/// polar, diffuse offset, specular offset.
pub fn sample_light(cfg: &DRConfig, rng: &mut drforge_scene::RngStream) -> LightSpec {
    let d = rng.uniform(cfg.light_distance_range.0, cfg.light_distance_range.1);
    let azimuth = rng.uniform(cfg.light_azimuth_range.0, cfg.light_azimuth_range.1);
    let polar = rng.uniform(cfg.light_polar_range.0, cfg.light_polar_range.1);
    let center = Workspace::default().center();
    let position = center
        + Vec3::new(
            d * polar.sin() * azimuth.cos(),
            d * polar.sin() * azimuth.sin(),
            d * polar.cos(),
        );
    let psi = cfg.light_coeff_offset;
    let diffuse = (NOMINAL_LIGHT_COEFF + rng.uniform(-psi, psi)).clamp(0.0, 1.0);
    let specular = (NOMINAL_LIGHT_COEFF + rng.uniform(-psi, psi)).clamp(0.0, 1.0);
    LightSpec::new(position, diffuse, specular)
}

/// Jitter an identity color in HSV space: hue wraps around the circle,
/// saturation and value clamp. Draw order: hue, saturation, value.
pub fn sample_object_color(
    nominal: ColorRGB,
    phi: (f64, f64, f64),
    rng: &mut drforge_scene::RngStream,
) -> ColorRGB {
    let hsv = rgb_to_hsv(nominal);
    let h = (hsv.h + rng.uniform(-phi.0, phi.0)).rem_euclid(1.0);
    let s = (hsv.s + rng.uniform(-phi.1, phi.1)).clamp(0.0, 1.0);
    let v = (hsv.v + rng.uniform(-phi.2, phi.2)).clamp(0.0, 1.0);
    hsv_to_rgb(ColorHSV::new(h, s, v))
}

/// Jitter a camera: position per axis, then look-direction yaw and pitch
/// (roll stays fixed), then field of view. Draw order: x, y, z, yaw, pitch,
/// fov.
pub fn sample_camera(
    nominal: &CameraSpec,
    cfg: &DRConfig,
    rng: &mut drforge_scene::RngStream,
) -> CameraSpec {
    let p = cfg.camera_pos_offset;
    let position = nominal.position
        + Vec3::new(rng.uniform(-p, p), rng.uniform(-p, p), rng.uniform(-p, p));
    let dir = nominal.look_at - nominal.position;
    let range = dir.norm();
    let a = cfg.camera_ang_offset;
    let yaw = dir.y.atan2(dir.x) + rng.uniform(-a, a);
    let pitch = ((dir.z / range).clamp(-1.0, 1.0).asin() + rng.uniform(-a, a)).clamp(
        -std::f64::consts::FRAC_PI_2 + 1e-6,
        std::f64::consts::FRAC_PI_2 - 1e-6,
    );
    let new_dir =
        Vec3::new(pitch.cos() * yaw.cos(), pitch.cos() * yaw.sin(), pitch.sin()) * range;
    let fov_jitter_rad =
        rng.uniform(-cfg.camera_fov_offset, cfg.camera_fov_offset).to_radians();
    CameraSpec {
        position,
        look_at: position + new_dir,
        fov_y_rad: nominal.fov_y_rad + fov_jitter_rad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DRConfig;
    use drforge_scene::RngStream;

    #[test]
    fn zero_width_config_returns_the_nominal_light() {
        let cfg = DRConfig::off();
        let mut rng = RngStream::new(5).child_named("light");
        let light = sample_light(&cfg, &mut rng);
        let nominal = LightSpec::nominal();
        assert!((light.position - nominal.position).norm() < 1e-9);
        assert_eq!(light.diffuse, nominal.diffuse);
        assert_eq!(light.specular, nominal.specular);
    }

    #[test]
    fn light_coefficients_cover_the_paper_range() {
        let mut cfg = DRConfig::full();
        cfg.light_coeff_offset = 0.3;
        let mut rng = RngStream::new(9).child_named("light");
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..10_000 {
            let l = sample_light(&cfg, &mut rng);
            for c in [l.diffuse, l.specular] {
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        assert!(lo >= 0.0 && hi <= 0.6, "coefficients in [0, 0.6], got [{lo}, {hi}]");
        assert!(hi - lo > 0.5, "offset 0.3 should nearly fill [0, 0.6]");
    }

    #[test]
    fn identity_color_jitter_with_zero_offsets() {
        let nominal = ColorRGB::new(0.2, 0.7, 0.4);
        let mut rng = RngStream::new(1).child_named("color");
        let out = sample_object_color(nominal, (0.0, 0.0, 0.0), &mut rng);
        assert!((out.r - nominal.r).abs() < 1e-9);
        assert!((out.g - nominal.g).abs() < 1e-9);
        assert!((out.b - nominal.b).abs() < 1e-9);
    }

    #[test]
    fn hue_wraps_around_one() {
        // Nominal hue 0.98 pushed past 1.0 must wrap, not clamp.
        let nominal = hsv_to_rgb(ColorHSV::new(0.98, 0.9, 0.9));
        let mut seen_wrapped = false;
        for seed in 0..400 {
            let mut rng = RngStream::new(seed).child_named("color");
            let out = sample_object_color(nominal, (0.05, 0.0, 0.0), &mut rng);
            let h = rgb_to_hsv(out).h;
            assert!((0.0..1.0).contains(&h));
            if h < 0.05 {
                seen_wrapped = true;
            }
        }
        assert!(seen_wrapped, "some draws must land just past the wrap point");
    }

    #[test]
    fn zero_offsets_return_the_nominal_camera() {
        let cfg = DRConfig::off();
        let nominal = CameraSpec::orbit(
            Vec3::new(0.0, 0.0, 0.05),
            0.0,
            std::f64::consts::PI / 6.0,
            0.9,
            std::f64::consts::PI / 3.0,
        );
        let mut rng = RngStream::new(3).child_named("camera");
        let cam = sample_camera(&nominal, &cfg, &mut rng);
        assert!((cam.position - nominal.position).norm() < 1e-12);
        assert!((cam.look_at - nominal.look_at).norm() < 1e-9);
        assert_eq!(cam.fov_y_rad, nominal.fov_y_rad);
    }
}
