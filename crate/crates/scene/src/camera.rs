use crate::math::Vec3;

/// Pinhole camera description. Orientation is derived from `position` and
/// `look_at` with a roll-free convention (world +z is "up" unless the view
/// axis is vertical); `fov_y_rad` is the full vertical field of view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraSpec {
    pub position: Vec3,
    pub look_at: Vec3,
    pub fov_y_rad: f64,
}

impl CameraSpec {
    pub fn new(position: Vec3, look_at: Vec3, fov_y_rad: f64) -> Self {
        CameraSpec { position, look_at, fov_y_rad }
    }

    /// Place a camera on an orbit around `target`: `azimuth` is measured
    /// about +z starting at the -y side of the table (the "front"),
    /// `elevation` is the angle above the horizontal plane, `distance` the
    /// range to the target.
    pub fn orbit(target: Vec3, azimuth: f64, elevation: f64, distance: f64, fov_y_rad: f64) -> Self {
        let horiz = distance * elevation.cos();
        let offset = Vec3::new(
            horiz * azimuth.sin(),
            -horiz * azimuth.cos(),
            distance * elevation.sin(),
        );
        CameraSpec { position: target + offset, look_at: target, fov_y_rad }
    }

    /// Camera basis in world coordinates: (right, up, forward), orthonormal,
    /// with forward pointing from the camera toward `look_at`.
    pub fn basis(&self) -> (Vec3, Vec3, Vec3) {
        let forward = (self.look_at - self.position).normalized();
        let mut world_up = Vec3::new(0.0, 0.0, 1.0);
        if forward.cross(world_up).norm() < 1e-9 {
            world_up = Vec3::new(0.0, 1.0, 0.0);
        }
        let right = forward.cross(world_up).normalized();
        let up = right.cross(forward).normalized();
        (right, up, forward)
    }
}
