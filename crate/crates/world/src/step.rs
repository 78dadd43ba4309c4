use crate::action::{Action, DT};
use crate::obb::{obb_mtv, Obb2};
use crate::state::{Attachment, ObjKind, ObjectState, WorldState};
use drforge_scene::{normalize_yaw, Pose, Vec3, Workspace};

/// Openness slew rate, fraction per second.
pub const OPENNESS_RATE: f64 = 4.0;
/// A closing gripper snap-attaches the nearest graspable object whose grasp
/// point is within this distance of the tip.
pub const GRASP_TOLERANCE: f64 = 0.015;
/// Collision box of the closed gripper tip, half extents (local x, y, z).
pub const TIP_HALF_X: f64 = 0.015;
pub const TIP_HALF_Y: f64 = 0.015;
pub const TIP_HALF_Z: f64 = 0.02;
/// Sweeping particles are small foam cubes; half side used for contact.
pub const PARTICLE_HALF: f64 = 0.0075;

fn object_index(objects: &[ObjectState], id: u32) -> usize {
    objects.iter().position(|o| o.id == id).expect("object id present")
}

/// Does the peg's cross-section fit entirely inside the nut's hole at the
/// current alignment? If so, a released nut threads down around the peg
/// instead of resting on top of it.
fn nut_admits_peg(nut: &ObjectState, peg: &ObjectState) -> bool {
    let hole_half = nut.dims.y / 2.0;
    let peg_half = peg.dims.x / 2.0;
    for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let corner = peg.pose.to_world(Vec3::new(sx * peg_half, sy * peg_half, 0.0));
        let local = nut.pose.to_local(Vec3::new(corner.x, corner.y, nut.pose.position.z));
        if local.x.abs() > hole_half || local.y.abs() > hole_half {
            return false;
        }
    }
    true
}

/// Settle a released object onto the highest support below it: the table, or
/// the top of any object whose footprint contains the released object's
/// center. An aligned nut falls past its peg to the surface below.
fn drop_to_support(objects: &mut [ObjectState], idx: usize) {
    let obj = objects[idx].clone();
    let center_above_bottom = obj.pose.position.z - obj.bottom_z();
    let mut support = 0.0f64;
    for (j, other) in objects.iter().enumerate() {
        if j == idx || other.kind == ObjKind::MarkerSquare {
            continue;
        }
        if other.top_z() <= obj.bottom_z() + 1e-9
            && other.footprint_contains(obj.pose.position)
        {
            if obj.kind == ObjKind::Nut && other.kind == ObjKind::Peg && nut_admits_peg(&obj, other)
            {
                continue;
            }
            support = support.max(other.top_z());
        }
    }
    objects[idx].pose.position.z = support + center_above_bottom;
}

/// Advance the world by one control period (10 Hz). Pure function: the input
/// state is unchanged and identical `(state, action)` pairs produce identical
/// results.
///
/// Order of effects: clamp the action; integrate and workspace-clamp the
/// gripper (descent is additionally limited so a carried object cannot pass
/// through the table); slew openness; fire the grasp/release events when the
/// openness crosses half-open; move the attached object rigidly; resolve
/// closed-tip penetrations by horizontal translation; sweep particles with
/// the broom face; re-assert the table constraint.
pub fn step(s: &WorldState, a: Action) -> WorldState {
    let a = a.clamped();
    let ws = Workspace::default();
    let mut next = s.clone();

    // 1. Gripper integration and clamping.
    let mut pos = ws.clamp(s.gripper.position + a.v * DT);
    if let Some(att) = &s.attachment {
        let obj = s.object(att.object_id);
        let center_above_bottom = obj.pose.position.z - obj.bottom_z();
        let min_tip_z = center_above_bottom - att.local_offset.z;
        pos.z = pos.z.max(min_tip_z);
    }
    let yaw = normalize_yaw(s.gripper.yaw + a.omega.z * DT);
    next.gripper = Pose::new(pos, yaw);

    // 2. Openness slew toward the command.
    let target = a.g as f64;
    let max_delta = OPENNESS_RATE * DT;
    next.openness = (s.openness + (target - s.openness).clamp(-max_delta, max_delta)).clamp(0.0, 1.0);

    // 3. Grasp / release events at the half-open crossing.
    let closing_crossed = s.openness > 0.5 && next.openness <= 0.5;
    let opening_crossed = s.openness < 0.5 && next.openness >= 0.5;
    if closing_crossed && next.attachment.is_none() {
        let tip = next.gripper.position;
        let mut best: Option<(f64, u32)> = None;
        for o in &next.objects {
            if !o.graspable {
                continue;
            }
            let d = (o.grasp_point_world() - tip).norm();
            if d <= GRASP_TOLERANCE && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, o.id));
            }
        }
        if let Some((_, id)) = best {
            let idx = object_index(&next.objects, id);
            let local_offset = next.gripper.to_local(next.objects[idx].pose.position);
            let yaw_offset = normalize_yaw(next.objects[idx].pose.yaw - next.gripper.yaw);
            next.attachment = Some(Attachment { object_id: id, local_offset, yaw_offset });
        }
    } else if opening_crossed {
        if let Some(att) = next.attachment.take() {
            let idx = object_index(&next.objects, att.object_id);
            drop_to_support(&mut next.objects, idx);
        }
    }

    // 4. Attached object follows the gripper rigidly (exact composition).
    if let Some(att) = next.attachment {
        let idx = object_index(&next.objects, att.object_id);
        next.objects[idx].pose = Pose::new(
            next.gripper.to_world(att.local_offset),
            normalize_yaw(next.gripper.yaw + att.yaw_offset),
        );
    }

    // 5. Push rule: the closed tip box translates unattached movable objects
    // horizontally out of penetration.
    if next.openness <= 0.5 {
        let tip = next.gripper.position;
        let tip_box =
            Obb2 { cx: tip.x, cy: tip.y, hx: TIP_HALF_X, hy: TIP_HALF_Y, yaw: next.gripper.yaw };
        let (tip_lo, tip_hi) = (tip.z - TIP_HALF_Z, tip.z + TIP_HALF_Z);
        let attached_id = next.attached_object_id();
        for o in &mut next.objects {
            if !o.movable() || Some(o.id) == attached_id {
                continue;
            }
            if o.top_z() <= tip_lo || o.bottom_z() >= tip_hi {
                continue;
            }
            let (hx, hy) = o.half_footprint();
            let ob = Obb2 {
                cx: o.pose.position.x,
                cy: o.pose.position.y,
                hx,
                hy,
                yaw: o.pose.yaw,
            };
            if let Some(mtv) = obb_mtv(&tip_box, &ob) {
                o.pose.position += mtv;
            }
        }
    }

    // 6. The carried broom face sweeps particles the same way.
    if let Some(att) = next.attachment {
        let idx = object_index(&next.objects, att.object_id);
        if next.objects[idx].kind == ObjKind::Broom && !next.particles.is_empty() {
            let broom = next.objects[idx].clone();
            let blade_lo = broom.bottom_z();
            let blade_hi = broom.top_z();
            if blade_lo < 2.0 * PARTICLE_HALF && blade_hi > 0.0 {
                let blade = Obb2 {
                    cx: broom.pose.position.x,
                    cy: broom.pose.position.y,
                    hx: broom.dims.x / 2.0,
                    hy: broom.dims.y / 2.0,
                    yaw: broom.pose.yaw,
                };
                for p in &mut next.particles {
                    let particle =
                        Obb2 { cx: p.x, cy: p.y, hx: PARTICLE_HALF, hy: PARTICLE_HALF, yaw: 0.0 };
                    if let Some(mtv) = obb_mtv(&blade, &particle) {
                        *p += mtv;
                        p.x = p.x.clamp(ws.min.x + PARTICLE_HALF, ws.max.x - PARTICLE_HALF);
                        p.y = p.y.clamp(ws.min.y + PARTICLE_HALF, ws.max.y - PARTICLE_HALF);
                    }
                }
            }
        }
    }

    // 7. Nothing sinks below the table.
    for o in &mut next.objects {
        let depth = -o.bottom_z();
        if depth > 0.0 {
            o.pose.position.z += depth;
        }
    }

    next.time_step = s.time_step + 1;
    next
}
