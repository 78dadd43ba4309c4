use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// 3D vector with `f64` components. Conventions throughout the stack: +x right,
/// +y forward (into the table), +z up, units in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, rhs: Vec3) -> f64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn cross(self, rhs: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * rhs.z - self.z * rhs.y,
            y: self.z * rhs.x - self.x * rhs.z,
            z: self.x * rhs.y - self.y * rhs.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector in the same direction; the zero vector is returned
    /// unchanged rather than producing NaNs.
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            self / n
        } else {
            self
        }
    }

    /// Rotation about the +z axis by `yaw` radians (counterclockwise viewed
    /// from above).
    pub fn rotated_z(self, yaw: f64) -> Vec3 {
        let (s, c) = yaw.sin_cos();
        Vec3 {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
            z: self.z,
        }
    }

    /// Component-wise minimum.
    pub fn min(self, rhs: Vec3) -> Vec3 {
        Vec3 { x: self.x.min(rhs.x), y: self.y.min(rhs.y), z: self.z.min(rhs.z) }
    }

    /// Component-wise maximum.
    pub fn max(self, rhs: Vec3) -> Vec3 {
        Vec3 { x: self.x.max(rhs.x), y: self.y.max(rhs.y), z: self.z.max(rhs.z) }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, rhs: Vec3) {
        *self = *self - rhs;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, rhs: Vec3) -> Vec3 {
        rhs * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x / rhs, self.y / rhs, self.z / rhs)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Rigid placement restricted to the tabletop setting: a translation plus a
/// rotation about the vertical axis only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vec3,
    pub yaw: f64,
}

impl Pose {
    pub const IDENTITY: Pose = Pose { position: Vec3::ZERO, yaw: 0.0 };

    pub fn new(position: Vec3, yaw: f64) -> Self {
        Pose { position, yaw }
    }

    /// Map a point from this pose's local frame into the world frame.
    pub fn to_world(&self, local: Vec3) -> Vec3 {
        self.position + local.rotated_z(self.yaw)
    }

    /// Map a world-frame point into this pose's local frame.
    pub fn to_local(&self, world: Vec3) -> Vec3 {
        (world - self.position).rotated_z(-self.yaw)
    }
}

impl Default for Pose {
    fn default() -> Self {
        Pose::IDENTITY
    }
}

/// Wrap an angle into `[-pi, pi)`.
pub fn normalize_yaw(yaw: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let wrapped = yaw.rem_euclid(two_pi);
    if wrapped >= std::f64::consts::PI {
        wrapped - two_pi
    } else {
        wrapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn vector_algebra_basics() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(-4.0, 0.5, 2.0);
        assert_eq!(a + b, Vec3::new(-3.0, 2.5, 5.0));
        assert_eq!(a - b, Vec3::new(5.0, 1.5, 1.0));
        assert_eq!(a * 2.0, Vec3::new(2.0, 4.0, 6.0));
        assert!((a.dot(b) - (-4.0 + 1.0 + 6.0)).abs() < 1e-12);
        let c = a.cross(b);
        // Orthogonal to both inputs.
        assert!(c.dot(a).abs() < 1e-12);
        assert!(c.dot(b).abs() < 1e-12);
        assert!((Vec3::new(3.0, 4.0, 0.0).norm() - 5.0).abs() < 1e-12);
        assert!((Vec3::new(0.0, 0.0, 9.0).normalized().z - 1.0).abs() < 1e-12);
        assert_eq!(Vec3::ZERO.normalized(), Vec3::ZERO);
    }

    #[test]
    fn rotation_about_z_is_counterclockwise() {
        let v = Vec3::new(1.0, 0.0, 0.5).rotated_z(PI / 2.0);
        assert!((v.x - 0.0).abs() < 1e-12);
        assert!((v.y - 1.0).abs() < 1e-12);
        assert!((v.z - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pose_round_trip() {
        let pose = Pose::new(Vec3::new(0.2, -0.1, 0.05), 0.7);
        let p = Vec3::new(0.03, 0.04, 0.01);
        let w = pose.to_world(p);
        let back = pose.to_local(w);
        assert!((back - p).norm() < 1e-12);
    }

    #[test]
    fn yaw_normalization_range_and_values() {
        assert!((normalize_yaw(7.0 * PI / 2.0) - (-PI / 2.0)).abs() < 1e-12);
        assert!((normalize_yaw(PI) - (-PI)).abs() < 1e-12);
        assert!((normalize_yaw(-PI) - (-PI)).abs() < 1e-12);
        assert!((normalize_yaw(0.3) - 0.3).abs() < 1e-12);
        assert!((normalize_yaw(PI - 1e-9) - (PI - 1e-9)).abs() < 1e-15);
        for i in -20..20 {
            let a = normalize_yaw(i as f64 * 0.77);
            assert!((-PI..PI).contains(&a));
        }
        // Idempotent on its own output.
        for i in -20..20 {
            let a = normalize_yaw(i as f64 * 1.13);
            assert_eq!(normalize_yaw(a), a);
        }
    }
}
