use crate::state::{ObjKind, WorldState};
use crate::task::{TaskId, TaskSpec};

/// Smallest-magnitude representative of an angle modulo 90 degrees, for
/// square-on-square alignment.
pub fn wrap_quarter(a: f64) -> f64 {
    let q = std::f64::consts::FRAC_PI_2;
    let r = a.rem_euclid(q);
    if r > q / 2.0 {
        r - q
    } else {
        r
    }
}

fn horizontal_distance(a: drforge_scene::Vec3, b: drforge_scene::Vec3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Task goal predicate. Total function of (spec, state); every freshly reset
/// state evaluates to false by construction of `reset`.
pub fn success(spec: &TaskSpec, s: &WorldState) -> bool {
    match spec.task_id {
        TaskId::Stacking => {
            let (Some(red), Some(green)) =
                (s.find_kind(ObjKind::CubeRed), s.find_kind(ObjKind::CubeGreen))
            else {
                return false;
            };
            let horizontal = horizontal_distance(red.pose.position, green.pose.position);
            let gap = red.pose.position.z - green.pose.position.z;
            horizontal <= spec.stack_horizontal_tol
                && (gap - spec.stack_cube_side).abs() <= spec.stack_gap_tol
                && s.attachment.is_none()
        }
        TaskId::Pushing => {
            let (Some(cube), Some(marker)) =
                (s.find_kind(ObjKind::CubeGreen), s.find_kind(ObjKind::MarkerSquare))
            else {
                return false;
            };
            horizontal_distance(cube.pose.position, marker.pose.position) <= spec.push_tol
        }
        TaskId::PushingToPick => {
            let Some(red) = s.find_kind(ObjKind::CubeRed) else {
                return false;
            };
            // "Above the table" is measured at the cube center.
            s.attached_object_id() == Some(red.id) && red.pose.position.z >= spec.pick_height
        }
        TaskId::Sweeping => {
            let Some(marker) = s.find_kind(ObjKind::MarkerSquare) else {
                return false;
            };
            let inside = s.particles.iter().filter(|p| marker.footprint_contains(**p)).count();
            inside >= spec.sweep_required
        }
        TaskId::Assembling => {
            let (Some(nut), Some(peg)) = (s.find_kind(ObjKind::Nut), s.find_kind(ObjKind::Peg))
            else {
                return false;
            };
            horizontal_distance(nut.pose.position, peg.pose.position) <= spec.assemble_axis_tol
                && wrap_quarter(nut.pose.yaw - peg.pose.yaw).abs() <= spec.assemble_yaw_tol
                && nut.top_z() < peg.top_z()
        }
    }
}
