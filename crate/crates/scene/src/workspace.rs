use crate::math::Vec3;

/// Axis-aligned volume the gripper tip is allowed to occupy. The default is a
/// 40 cm x 40 cm footprint centered on the table with 20 cm of headroom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Workspace {
    pub min: Vec3,
    pub max: Vec3,
}

impl Workspace {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Workspace { min, max }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }

    /// Project a point onto the workspace volume (component-wise clamp).
    pub fn clamp(&self, p: Vec3) -> Vec3 {
        Vec3::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
            p.z.clamp(self.min.z, self.max.z),
        )
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace::new(Vec3::new(-0.2, -0.2, 0.0), Vec3::new(0.2, 0.2, 0.2))
    }
}
