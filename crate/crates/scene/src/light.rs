use crate::math::Vec3;

/// Point light with separate diffuse and specular strengths. Shading treats
/// the strengths as scalar multipliers on the surface color (diffuse) and on
/// the white highlight (specular).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightSpec {
    pub position: Vec3,
    pub diffuse: f64,
    pub specular: f64,
}

impl LightSpec {
    pub fn new(position: Vec3, diffuse: f64, specular: f64) -> Self {
        LightSpec { position, diffuse, specular }
    }

    /// The fixed light used when randomization is off: overhead and slightly
    /// toward the front-left, with the nominal strengths.
    pub fn nominal() -> Self {
        LightSpec::new(Vec3::new(-0.5, -0.5, 1.8), 0.3, 0.3)
    }
}
