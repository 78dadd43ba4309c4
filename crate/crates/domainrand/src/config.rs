//! Randomization configuration: which visual factors vary and by how much.

use crate::augment::ImgAugConfig;

/// Where surface textures come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureMode {
    /// Keep the nominal solid-color surfaces.
    Off,
    /// Synthesize a fresh procedural texture per surface.
    Procedural,
    /// Draw uniformly from a loaded texture library.
    Assets,
}

/// Spherical placement of the nominal light around the workspace center;
/// evaluating the light sampler at exactly these values reproduces a light
/// equivalent to the nominal one.
pub const NOMINAL_LIGHT_DISTANCE: f64 = 1.841195263952197;
pub const NOMINAL_LIGHT_AZIMUTH: f64 = -2.356194490192345;
pub const NOMINAL_LIGHT_POLAR: f64 = 0.394176191954090;
/// Nominal diffuse/specular coefficient around which intensity jitters.
pub const NOMINAL_LIGHT_COEFF: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct DRConfig {
    pub texture_mode: TextureMode,
    /// Light position: distance/azimuth/polar ranges of a spherical offset
    /// from the workspace center.
    pub light_distance_range: (f64, f64),
    pub light_azimuth_range: (f64, f64),
    pub light_polar_range: (f64, f64),
    /// Half-width of the uniform offset added to each light coefficient.
    pub light_coeff_offset: f64,
    /// Per-channel HSV jitter half-widths for object identity colors.
    pub object_hsv_offset: (f64, f64, f64),
    /// Camera position jitter half-width, meters per axis.
    pub camera_pos_offset: f64,
    /// Look-direction yaw/pitch jitter half-width, radians.
    pub camera_ang_offset: f64,
    /// Field-of-view jitter half-width, degrees.
    pub camera_fov_offset: f64,
    /// Photometric/translation augmentation applied to training frames,
    /// or `None` for no 2D augmentation.
    pub img_aug: Option<ImgAugConfig>,
}

impl DRConfig {
    /// Everything pinned at nominal: randomizing with this config leaves a
    /// scene unchanged.
    pub fn off() -> DRConfig {
        DRConfig {
            texture_mode: TextureMode::Off,
            light_distance_range: (NOMINAL_LIGHT_DISTANCE, NOMINAL_LIGHT_DISTANCE),
            light_azimuth_range: (NOMINAL_LIGHT_AZIMUTH, NOMINAL_LIGHT_AZIMUTH),
            light_polar_range: (NOMINAL_LIGHT_POLAR, NOMINAL_LIGHT_POLAR),
            light_coeff_offset: 0.0,
            object_hsv_offset: (0.0, 0.0, 0.0),
            camera_pos_offset: 0.0,
            camera_ang_offset: 0.0,
            camera_fov_offset: 0.0,
            img_aug: None,
        }
    }

    /// The full visual-randomization recipe: procedural textures, wide light
    /// placement, intensity offset 0.3, object HSV jitter (0.05, 0.1, 0.1),
    /// camera jitter (10 cm, 0.05 rad, 1 degree).
    pub fn full() -> DRConfig {
        DRConfig {
            texture_mode: TextureMode::Procedural,
            light_distance_range: (1.0, 3.0),
            light_azimuth_range: (0.0, std::f64::consts::FRAC_PI_2),
            light_polar_range: (std::f64::consts::PI / 10.0, 4.0 * std::f64::consts::PI / 10.0),
            light_coeff_offset: 0.3,
            object_hsv_offset: (0.05, 0.1, 0.1),
            camera_pos_offset: 0.10,
            camera_ang_offset: 0.05,
            camera_fov_offset: 1.0,
            img_aug: None,
        }
    }

    pub fn validate(&self) -> Result<(), crate::DomainRandError> {
        let ordered = |r: (f64, f64)| r.0 <= r.1 && r.0.is_finite() && r.1.is_finite();
        let bad = |msg: &'static str| Err(crate::DomainRandError::InvalidConfig(msg));
        if !ordered(self.light_distance_range)
            || !ordered(self.light_azimuth_range)
            || !ordered(self.light_polar_range)
        {
            return bad("light ranges must be well-ordered and finite");
        }
        if !(0.0..=1.0).contains(&self.light_coeff_offset) {
            return bad("light coefficient offset must be in [0, 1]");
        }
        let (h, s, v) = self.object_hsv_offset;
        if ![h, s, v].iter().all(|c| (0.0..=0.5).contains(c)) {
            return bad("object HSV offsets must be in [0, 0.5]");
        }
        if self.camera_pos_offset < 0.0
            || self.camera_ang_offset < 0.0
            || self.camera_fov_offset < 0.0
        {
            return bad("camera offsets must be nonnegative");
        }
        if let Some(aug) = &self.img_aug {
            aug.validate()?;
        }
        Ok(())
    }

    /// Is the light family a single point (no light randomization)?
    pub fn light_is_fixed(&self) -> bool {
        self.light_coeff_offset == 0.0
            && self.light_distance_range.0 == self.light_distance_range.1
            && self.light_azimuth_range.0 == self.light_azimuth_range.1
            && self.light_polar_range.0 == self.light_polar_range.1
    }

    pub fn color_is_fixed(&self) -> bool {
        self.object_hsv_offset == (0.0, 0.0, 0.0)
    }

    pub fn camera_is_fixed(&self) -> bool {
        self.camera_pos_offset == 0.0
            && self.camera_ang_offset == 0.0
            && self.camera_fov_offset == 0.0
    }
}
