//! 2D oriented-box overlap tests used by the horizontal push rule.

use drforge_scene::Vec3;

#[derive(Debug, Clone, Copy)]
pub struct Obb2 {
    pub cx: f64,
    pub cy: f64,
    pub hx: f64,
    pub hy: f64,
    pub yaw: f64,
}

impl Obb2 {
    fn axes(&self) -> [(f64, f64); 2] {
        let (s, c) = self.yaw.sin_cos();
        [(c, s), (-s, c)]
    }

    fn corners(&self) -> [(f64, f64); 4] {
        let [ax, ay] = self.axes();
        let mut out = [(0.0, 0.0); 4];
        for (i, (sx, sy)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].iter().enumerate()
        {
            out[i] = (
                self.cx + sx * self.hx * ax.0 + sy * self.hy * ay.0,
                self.cy + sx * self.hx * ax.1 + sy * self.hy * ay.1,
            );
        }
        out
    }
}

/// Minimum translation vector that moves `target` out of penetration with
/// `mover`, or `None` when the boxes do not overlap. The translation is
/// returned as a horizontal `Vec3` (z = 0) to apply to `target`.
pub fn obb_mtv(mover: &Obb2, target: &Obb2) -> Option<Vec3> {
    // (distance, axis, sign): smallest translation of `target` found so far.
    let mut best: Option<(f64, (f64, f64), f64)> = None;
    let m_corners = mover.corners();
    let t_corners = target.corners();
    for axis in mover.axes().into_iter().chain(target.axes()) {
        let project = |pts: &[(f64, f64); 4]| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (x, y) in pts {
                let p = x * axis.0 + y * axis.1;
                lo = lo.min(p);
                hi = hi.max(p);
            }
            (lo, hi)
        };
        let (m_lo, m_hi) = project(&m_corners);
        let (t_lo, t_hi) = project(&t_corners);
        // Directed exit distances (not plain interval overlap: when one
        // projection contains the other, the exit is longer than the
        // overlap depth).
        let push_pos = m_hi - t_lo;
        let push_neg = t_hi - m_lo;
        if push_pos <= 0.0 || push_neg <= 0.0 {
            return None;
        }
        let (dist, sign) = if push_pos <= push_neg { (push_pos, 1.0) } else { (push_neg, -1.0) };
        if best.is_none_or(|(bd, _, _)| dist < bd) {
            best = Some((dist, axis, sign));
        }
    }
    let (dist, axis, sign) = best.expect("four axes were tested");
    Some(Vec3::new(sign * dist * axis.0, sign * dist * axis.1, 0.0))
}
