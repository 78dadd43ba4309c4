use drforge_scene::Vec3;

/// Control period: 10 Hz.
pub const DT: f64 = 0.1;
/// Linear speed limit (Euclidean norm of `v`), m/s.
pub const V_MAX: f64 = 0.25;
/// Yaw rate limit, rad/s.
pub const W_MAX: f64 = 1.0;

/// One gripper command. `omega` is kept as a full 3-vector for interface
/// symmetry with the 6-DoF controller, but only its vertical component turns
/// anything in this tabletop world. `g` is the binary openness command
/// (1 = open).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub v: Vec3,
    pub omega: Vec3,
    pub g: u8,
}

impl Action {
    pub fn new(v: Vec3, omega: Vec3, g: u8) -> Action {
        Action { v, omega, g }
    }

    pub fn hold(g: u8) -> Action {
        Action { v: Vec3::ZERO, omega: Vec3::ZERO, g }
    }

    /// Enforce the entry invariants: |v| <= V_MAX (norm-preserving direction),
    /// |omega.z| <= W_MAX, g in {0, 1}.
    pub fn clamped(self) -> Action {
        let mut v = self.v;
        let n = v.norm();
        if n > V_MAX {
            v = v * (V_MAX / n);
        }
        let mut omega = self.omega;
        omega.z = omega.z.clamp(-W_MAX, W_MAX);
        Action { v, omega, g: self.g.min(1) }
    }

    pub fn satisfies_clamps(&self) -> bool {
        self.v.norm() <= V_MAX + 1e-12 && self.omega.z.abs() <= W_MAX + 1e-12 && self.g <= 1
    }
}
