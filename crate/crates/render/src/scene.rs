use crate::mesh::Mesh;
use crate::texture::Texture;
use drforge_scene::{ColorRGB, LightSpec, Pose};
use std::sync::Arc;

/// What an instance's surface looks like before lighting.
#[derive(Debug, Clone)]
pub enum BaseColor {
    Solid(ColorRGB),
    Textured(Arc<Texture>),
}

#[derive(Debug, Clone)]
pub struct Material {
    pub base: BaseColor,
    /// Texture repeats per meter of surface (mesh uv coordinates are in
    /// meters).
    pub uv_scale: f64,
}

impl Material {
    pub fn solid(color: ColorRGB) -> Self {
        Material { base: BaseColor::Solid(color), uv_scale: 1.0 }
    }

    pub fn textured(texture: Arc<Texture>, uv_scale: f64) -> Self {
        Material { base: BaseColor::Textured(texture), uv_scale }
    }
}

/// Which randomization rules apply to a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceTag {
    Table,
    Wall,
    Floor,
    Marker,
    Object,
    Gripper,
}

/// One placed mesh. `group` ties together instances that belong to the same
/// physical object so color jitter moves them in lockstep.
#[derive(Debug, Clone)]
pub struct Instance {
    pub mesh: Arc<Mesh>,
    pub pose: Pose,
    pub material: Material,
    pub tag: SurfaceTag,
    pub group: u32,
}

/// Everything the rasterizer needs: geometry, lights, global ambient level,
/// and the clear color behind all geometry.
#[derive(Debug, Clone)]
pub struct Scene {
    pub instances: Vec<Instance>,
    pub lights: Vec<LightSpec>,
    pub ambient: f64,
    pub background: ColorRGB,
}

impl Scene {
    pub fn new() -> Self {
        Scene {
            instances: Vec::new(),
            lights: vec![LightSpec::nominal()],
            ambient: 0.3,
            background: ColorRGB::new(0.05, 0.05, 0.07),
        }
    }
}

impl Default for Scene {
    fn default() -> Self {
        Scene::new()
    }
}
