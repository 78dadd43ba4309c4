use crate::error::WorldError;
use crate::state::{Attachment, ObjKind, ObjectState, WorldState, BROOM_HANDLE_HEIGHT};
use crate::task::{TaskId, TaskSpec};
use drforge_scene::{ColorRGB, Pose, RngStream, Vec3, Workspace};

/// Required clearance between object surfaces at reset (center spacing adds
/// the two circumradii on top of this).
pub const RESET_SEPARATION: f64 = 0.02;
/// Rejection budget for one reset.
pub const RESET_MAX_REJECTIONS: u32 = 1000;

pub fn nominal_color(kind: ObjKind) -> ColorRGB {
    match kind {
        ObjKind::CubeRed => ColorRGB::new(1.0, 0.05, 0.05),
        ObjKind::CubeGreen => ColorRGB::new(0.05, 0.80, 0.05),
        ObjKind::CubeYellow => ColorRGB::new(0.95, 0.90, 0.05),
        ObjKind::CubeObstacle => ColorRGB::new(0.3, 0.3, 0.9),
        ObjKind::MarkerSquare => ColorRGB::new(0.10, 0.70, 0.15),
        ObjKind::Broom => ColorRGB::new(0.45, 0.30, 0.15),
        ObjKind::Nut => ColorRGB::new(0.55, 0.55, 0.58),
        ObjKind::Peg => ColorRGB::new(0.95, 0.45, 0.65),
    }
}

/// Pink marker used by the pushing task (the sweeping marker is green).
pub const PUSH_MARKER_COLOR: ColorRGB = ColorRGB { r: 0.95, g: 0.35, b: 0.60 };

struct Placer<'a> {
    rng: &'a mut RngStream,
    ws: Workspace,
    rejections: u32,
}

impl<'a> Placer<'a> {
    fn new(rng: &'a mut RngStream) -> Self {
        Placer { rng, ws: Workspace::default(), rejections: 0 }
    }

    fn xy(
        &mut self,
        margin: f64,
        ok: impl Fn(f64, f64) -> bool,
    ) -> Result<(f64, f64), WorldError> {
        loop {
            let x = self.rng.uniform(self.ws.min.x + margin, self.ws.max.x - margin);
            let y = self.rng.uniform(self.ws.min.y + margin, self.ws.max.y - margin);
            if ok(x, y) {
                return Ok((x, y));
            }
            self.rejections += 1;
            if self.rejections >= RESET_MAX_REJECTIONS {
                return Err(WorldError::SamplingFailed(RESET_MAX_REJECTIONS));
            }
        }
    }

    fn yaw(&mut self) -> f64 {
        self.rng.uniform(-std::f64::consts::PI, std::f64::consts::PI)
    }
}

fn separated(placed: &[ObjectState], x: f64, y: f64, circum: f64) -> bool {
    placed.iter().all(|o| {
        let dx = o.pose.position.x - x;
        let dy = o.pose.position.y - y;
        (dx * dx + dy * dy).sqrt() >= o.circumradius() + circum + RESET_SEPARATION
    })
}

fn cube(id: u32, kind: ObjKind, side: f64, x: f64, y: f64, yaw: f64, color: ColorRGB) -> ObjectState {
    ObjectState {
        id,
        kind,
        pose: Pose::new(Vec3::new(x, y, side / 2.0), yaw),
        dims: Vec3::new(side, side, side),
        color,
        graspable: true,
    }
}

/// Place the gripper tip away from every object's footprint.
fn place_gripper(
    p: &mut Placer,
    objects: &[ObjectState],
    z_range: (f64, f64),
) -> Result<(Pose, f64), WorldError> {
    let (x, y) = p.xy(0.02, |x, y| {
        objects.iter().all(|o| {
            let dx = o.pose.position.x - x;
            let dy = o.pose.position.y - y;
            (dx * dx + dy * dy).sqrt() >= o.circumradius() + 0.04
        })
    })?;
    let z = p.rng.uniform(z_range.0, z_range.1);
    let yaw = p.yaw();
    Ok((Pose::new(Vec3::new(x, y, z), yaw), 1.0))
}

/// Sample a fresh episode start: objects on the table plane, gripper in free
/// space, everything uniform with rejection sampling for separation and for
/// task preconditions (the goal must not already hold).
pub fn reset(spec: &TaskSpec, rng: &mut RngStream) -> Result<WorldState, WorldError> {
    debug_assert!(spec.validate());
    let mut p = Placer::new(rng);
    let mut objects: Vec<ObjectState> = Vec::new();
    let mut particles: Vec<Vec3> = Vec::new();
    let mut attachment = None;
    let gripper;
    let openness;

    match spec.task_id {
        TaskId::Stacking => {
            let side = spec.stack_cube_side;
            let circ = side / 2.0 * std::f64::consts::SQRT_2;
            let (rx, ry) = p.xy(circ + 0.02, |_, _| true)?;
            let yaw_r = p.yaw();
            objects.push(cube(0, ObjKind::CubeRed, side, rx, ry, yaw_r, nominal_color(ObjKind::CubeRed)));
            let (gx, gy) = p.xy(circ + 0.02, |x, y| separated(&objects, x, y, circ))?;
            let yaw_g = p.yaw();
            objects.push(cube(1, ObjKind::CubeGreen, side, gx, gy, yaw_g, nominal_color(ObjKind::CubeGreen)));
            let (pose, open) = place_gripper(&mut p, &objects, (0.05, 0.18))?;
            gripper = pose;
            openness = open;
        }
        TaskId::Pushing => {
            let marker = ObjectState {
                id: 1,
                kind: ObjKind::MarkerSquare,
                pose: Pose::IDENTITY,
                dims: Vec3::new(spec.push_marker_side, spec.push_marker_side, 0.0),
                color: PUSH_MARKER_COLOR,
                graspable: false,
            };
            let m_margin = marker.circumradius() + 0.02;
            let (mx, my) = p.xy(m_margin, |_, _| true)?;
            let marker =
                ObjectState { pose: Pose::new(Vec3::new(mx, my, 0.0), 0.0), ..marker };
            let side = spec.push_cube_side;
            let circ = side / 2.0 * std::f64::consts::SQRT_2;
            let ws = p.ws;
            let (cx, cy) = p.xy(circ + 0.03, |x, y| {
                let dx = x - mx;
                let dy = y - my;
                let dist = (dx * dx + dy * dy).sqrt();
                if dist < 0.08 {
                    return false;
                }
                // The expert needs room behind the cube, on the line away
                // from the marker, to descend its tip.
                let bx = x + dx / dist * 0.075;
                let by = y + dy / dist * 0.075;
                bx >= ws.min.x + 0.025
                    && bx <= ws.max.x - 0.025
                    && by >= ws.min.y + 0.025
                    && by <= ws.max.y - 0.025
            })?;
            let yaw_c = p.yaw();
            objects.push(cube(0, ObjKind::CubeGreen, side, cx, cy, yaw_c, nominal_color(ObjKind::CubeGreen)));
            objects.push(marker);
            let (pose, open) = place_gripper(&mut p, &objects, (0.05, 0.18))?;
            gripper = pose;
            openness = open;
        }
        TaskId::PushingToPick => {
            let side = spec.pick_cube_side;
            let circ = side / 2.0 * std::f64::consts::SQRT_2;
            let (rx, ry) = p.xy(0.06, |_, _| true)?;
            let yaw_r = p.yaw();
            objects.push(cube(0, ObjKind::CubeRed, side, rx, ry, yaw_r, nominal_color(ObjKind::CubeRed)));
            let base_angle = p.rng.uniform(0.0, std::f64::consts::TAU);
            for i in 0..3 {
                let jitter = p.rng.uniform(-0.25, 0.25);
                let dist = p.rng.uniform(2.0 * circ + RESET_SEPARATION + 0.005, 0.125);
                let angle = base_angle + i as f64 * std::f64::consts::TAU / 3.0 + jitter;
                let (ox, oy) = (rx + dist * angle.cos(), ry + dist * angle.sin());
                let ws = p.ws;
                if ox.abs() > ws.max.x - circ - 0.01 || oy.abs() > ws.max.y - circ - 0.01 {
                    // Out of bounds: fall back to a free draw near the target.
                    let (fx, fy) =
                        p.xy(circ + 0.01, |x, y| separated(&objects, x, y, circ))?;
                    let yaw_o = p.yaw();
                    let hue = p.rng.uniform(0.12, 0.88);
                    let color = drforge_scene::hsv_to_rgb(drforge_scene::ColorHSV::new(
                        hue,
                        p.rng.uniform(0.7, 1.0),
                        p.rng.uniform(0.7, 1.0),
                    ));
                    objects.push(cube(1 + i, ObjKind::CubeObstacle, side, fx, fy, yaw_o, color));
                } else {
                    let yaw_o = p.yaw();
                    let hue = p.rng.uniform(0.12, 0.88);
                    let color = drforge_scene::hsv_to_rgb(drforge_scene::ColorHSV::new(
                        hue,
                        p.rng.uniform(0.7, 1.0),
                        p.rng.uniform(0.7, 1.0),
                    ));
                    objects.push(cube(1 + i, ObjKind::CubeObstacle, side, ox, oy, yaw_o, color));
                }
            }
            let (pose, open) = place_gripper(&mut p, &objects, (0.05, 0.18))?;
            gripper = pose;
            openness = open;
        }
        TaskId::Sweeping => {
            let marker = ObjectState {
                id: 1,
                kind: ObjKind::MarkerSquare,
                pose: Pose::IDENTITY,
                dims: Vec3::new(spec.sweep_marker_side, spec.sweep_marker_side, 0.0),
                color: nominal_color(ObjKind::MarkerSquare),
                graspable: false,
            };
            let (mx, my) = p.xy(spec.sweep_marker_side / 2.0 + 0.02, |_, _| true)?;
            let marker = ObjectState { pose: Pose::new(Vec3::new(mx, my, 0.0), 0.0), ..marker };
            // Particle pile: a jittered 4x4 grid minus two corners, placed
            // well away from the marker so the goal does not already hold.
            let (px, py) = p.xy(0.075, |x, y| {
                let dx = x - mx;
                let dy = y - my;
                (dx * dx + dy * dy).sqrt() >= 0.17
            })?;
            let spacing = 0.022;
            for i in 0..4 {
                for j in 0..4 {
                    if (i, j) == (0, 0) || (i, j) == (3, 3) {
                        continue;
                    }
                    let jx = p.rng.uniform(-0.003, 0.003);
                    let jy = p.rng.uniform(-0.003, 0.003);
                    particles.push(Vec3::new(
                        px + (i as f64 - 1.5) * spacing + jx,
                        py + (j as f64 - 1.5) * spacing + jy,
                        spec.sweep_particle_side / 2.0,
                    ));
                }
            }
            // The broom hangs from the gripper for the whole episode.
            let (gx, gy) = p.xy(0.05, |_, _| true)?;
            let gz = p.rng.uniform(0.16, 0.19);
            let gyaw = p.yaw();
            gripper = Pose::new(Vec3::new(gx, gy, gz), gyaw);
            openness = 0.0;
            let local_offset =
                Vec3::new(0.0, 0.0, -(spec.broom_face_height / 2.0 + BROOM_HANDLE_HEIGHT / 2.0));
            let broom_center = gripper.to_world(local_offset);
            objects.push(ObjectState {
                id: 0,
                kind: ObjKind::Broom,
                pose: Pose::new(broom_center, gyaw),
                dims: Vec3::new(spec.broom_face_width, spec.broom_thickness, spec.broom_face_height),
                color: nominal_color(ObjKind::Broom),
                graspable: true,
            });
            objects.push(marker);
            attachment = Some(Attachment { object_id: 0, local_offset, yaw_offset: 0.0 });
        }
        TaskId::Assembling => {
            let peg = ObjectState {
                id: 1,
                kind: ObjKind::Peg,
                pose: Pose::IDENTITY,
                dims: Vec3::new(spec.peg_side, spec.peg_side, spec.peg_height),
                color: nominal_color(ObjKind::Peg),
                graspable: false,
            };
            let peg_circ = peg.circumradius();
            let (px, py) = p.xy(0.07, |_, _| true)?;
            let peg_yaw = p.yaw();
            let peg = ObjectState { pose: Pose::new(Vec3::new(px, py, 0.0), peg_yaw), ..peg };
            let nut_circ = spec.nut_outer / 2.0 * std::f64::consts::SQRT_2;
            let (nx, ny) = p.xy(0.07, |x, y| {
                let dx = x - px;
                let dy = y - py;
                (dx * dx + dy * dy).sqrt() >= nut_circ + peg_circ + 0.04
            })?;
            let nut_yaw = p.yaw();
            objects.push(ObjectState {
                id: 0,
                kind: ObjKind::Nut,
                pose: Pose::new(Vec3::new(nx, ny, spec.nut_thickness / 2.0), nut_yaw),
                dims: Vec3::new(spec.nut_outer, spec.nut_hole, spec.nut_thickness),
                color: nominal_color(ObjKind::Nut),
                graspable: true,
            });
            objects.push(peg);
            let (pose, open) = place_gripper(&mut p, &objects, (0.05, 0.18))?;
            gripper = pose;
            openness = open;
        }
    }

    Ok(WorldState { gripper, openness, attachment, objects, particles, time_step: 0 })
}

/// Scene layout for the cube-localization data: green, red, and yellow 5 cm
/// cubes plus the gripper, all uniform in the workspace.
pub fn proxy_scene(rng: &mut RngStream) -> Result<WorldState, WorldError> {
    let mut p = Placer::new(rng);
    let side = 0.05;
    let circ = side / 2.0 * std::f64::consts::SQRT_2;
    let mut objects: Vec<ObjectState> = Vec::new();
    for (id, kind) in
        [(0u32, ObjKind::CubeGreen), (1, ObjKind::CubeRed), (2, ObjKind::CubeYellow)]
    {
        let (x, y) = p.xy(circ + 0.02, |x, y| separated(&objects, x, y, circ))?;
        let yaw = p.yaw();
        objects.push(cube(id, kind, side, x, y, yaw, nominal_color(kind)));
    }
    let (gripper, openness) = place_gripper(&mut p, &objects, (0.05, 0.18))?;
    Ok(WorldState { gripper, openness, attachment: None, objects, particles: Vec::new(), time_step: 0 })
}
