use crate::action::{Action, DT};
use crate::error::WorldError;
use crate::state::{ObjKind, WorldState};
use crate::step::{step, TIP_HALF_X};
use crate::success::{success, wrap_quarter};
use crate::task::{TaskId, TaskSpec};
use drforge_scene::{normalize_yaw, RngStream, Vec3};

/// The expert reports itself stuck after this many steps without progress.
pub const ORACLE_STUCK_LIMIT: u32 = 100;

/// One leg of an open-loop plan: servo the tip to `target` at `yaw` while
/// holding gripper command `g`; after arriving within the tolerances, hold
/// for `settle` extra steps (used to let the openness slew finish).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub target: Vec3,
    pub yaw: f64,
    pub g: u8,
    pub pos_tol: f64,
    pub yaw_tol: f64,
    pub settle: u32,
}

impl Waypoint {
    fn new(target: Vec3, yaw: f64, g: u8) -> Waypoint {
        Waypoint { target, yaw, g, pos_tol: 0.006, yaw_tol: 0.03, settle: 0 }
    }

    fn tol(mut self, pos_tol: f64) -> Waypoint {
        self.pos_tol = pos_tol;
        self
    }

    fn yaw_tol(mut self, yaw_tol: f64) -> Waypoint {
        self.yaw_tol = yaw_tol;
        self
    }

    fn settle(mut self, steps: u32) -> Waypoint {
        self.settle = steps;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushPhase {
    Rise,
    Travel,
    Descend,
    Drive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepPhase {
    Lift,
    Travel,
    Descend,
    Drive,
}

#[derive(Debug, Clone, PartialEq)]
enum OraclePlan {
    /// Stacking, pushing-to-pick, assembling: fixed plan from the reset state.
    Waypoints(Vec<Waypoint>),
    /// Pushing and sweeping re-plan every step from current object positions.
    Push(PushPhase),
    Sweep(SweepPhase),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    plan: OraclePlan,
    index: usize,
    settle_left: u32,
    best_progress: f64,
    no_progress: u32,
}

/// Nearest angle equivalent to `target` modulo `period`, measured from
/// `current`.
fn closest_equivalent_yaw(target: f64, period: f64, current: f64) -> f64 {
    let mut diff = (target - current).rem_euclid(period);
    if diff > period / 2.0 {
        diff -= period;
    }
    current + diff
}

fn horizontal(v: Vec3) -> Vec3 {
    Vec3::new(v.x, v.y, 0.0)
}

/// Servo command toward a pose target, exact when within one step's reach.
fn servo(s: &WorldState, target: Vec3, yaw: f64, g: u8) -> Action {
    let v = (target - s.gripper.position) * (1.0 / DT);
    let w = normalize_yaw(yaw - s.gripper.yaw) / DT;
    Action::new(v, Vec3::new(0.0, 0.0, w), g).clamped()
}

fn arrived(s: &WorldState, wp: &Waypoint) -> bool {
    (s.gripper.position - wp.target).norm() <= wp.pos_tol
        && normalize_yaw(s.gripper.yaw - wp.yaw).abs() <= wp.yaw_tol
}

fn stacking_plan(spec: &TaskSpec, s: &WorldState) -> Vec<Waypoint> {
    let red = s.find_kind(ObjKind::CubeRed).expect("stacking has a red cube");
    let green = s.find_kind(ObjKind::CubeGreen).expect("stacking has a green cube");
    let (rx, ry, rz) = (red.pose.position.x, red.pose.position.y, red.pose.position.z);
    let (gx, gy) = (green.pose.position.x, green.pose.position.y);
    let yaw = s.gripper.yaw;
    let place_z = green.top_z() + spec.stack_cube_side / 2.0 + 0.004;
    vec![
        Waypoint::new(Vec3::new(rx, ry, 0.12), yaw, 1),
        Waypoint::new(Vec3::new(rx, ry, rz), yaw, 1).tol(0.0035),
        Waypoint::new(Vec3::new(rx, ry, rz), yaw, 0).tol(0.0035).settle(4),
        Waypoint::new(Vec3::new(rx, ry, 0.15), yaw, 0),
        Waypoint::new(Vec3::new(gx, gy, 0.15), yaw, 0),
        Waypoint::new(Vec3::new(gx, gy, place_z), yaw, 0).tol(0.003),
        Waypoint::new(Vec3::new(gx, gy, place_z), yaw, 1).tol(0.003).settle(4),
        Waypoint::new(Vec3::new(gx, gy, 0.15), yaw, 1),
    ]
}

fn pick_plan(_spec: &TaskSpec, s: &WorldState) -> Vec<Waypoint> {
    let red = s.find_kind(ObjKind::CubeRed).expect("pick has a red cube");
    let (rx, ry, rz) = (red.pose.position.x, red.pose.position.y, red.pose.position.z);
    let yaw = s.gripper.yaw;
    vec![
        Waypoint::new(Vec3::new(rx, ry, 0.12), yaw, 1),
        Waypoint::new(Vec3::new(rx, ry, rz), yaw, 1).tol(0.0035),
        Waypoint::new(Vec3::new(rx, ry, rz), yaw, 0).tol(0.0035).settle(4),
        Waypoint::new(Vec3::new(rx, ry, 0.17), yaw, 0),
    ]
}

fn assembling_plan(_spec: &TaskSpec, s: &WorldState) -> Vec<Waypoint> {
    let nut = s.find_kind(ObjKind::Nut).expect("assembling has a nut");
    let peg = s.find_kind(ObjKind::Peg).expect("assembling has a peg");
    let gp = nut.grasp_point_world();
    let nut_c = nut.pose.position;
    // Grasp with the fingers astride the near bar: gripper yaw = nut yaw
    // modulo pi, whichever representative is closest.
    let y_g = closest_equivalent_yaw(nut.pose.yaw, std::f64::consts::PI, s.gripper.yaw);
    // Rotating by this much aligns the nut with the peg modulo 90 degrees.
    let delta = wrap_quarter(peg.pose.yaw - nut.pose.yaw);
    let y_ins = y_g + delta;
    // Predicted nut-origin offset in the gripper frame once grasped at `gp`.
    let off = (nut_c - gp).rotated_z(-y_g);
    let insert_tip = horizontal(peg.pose.position) - off.rotated_z(y_ins);
    vec![
        Waypoint::new(Vec3::new(gp.x, gp.y, 0.12), y_g, 1).yaw_tol(0.02),
        Waypoint::new(Vec3::new(gp.x, gp.y, nut_c.z), y_g, 1).tol(0.0025).yaw_tol(0.015),
        Waypoint::new(Vec3::new(gp.x, gp.y, nut_c.z), y_g, 0).tol(0.0025).settle(4),
        Waypoint::new(Vec3::new(gp.x, gp.y, 0.16), y_g, 0),
        Waypoint::new(Vec3::new(insert_tip.x, insert_tip.y, 0.16), y_ins, 0)
            .tol(0.003)
            .yaw_tol(0.012),
        Waypoint::new(Vec3::new(insert_tip.x, insert_tip.y, 0.04 + nut_c.z), y_ins, 0)
            .tol(0.0025)
            .yaw_tol(0.012),
        Waypoint::new(Vec3::new(insert_tip.x, insert_tip.y, 0.04 + nut_c.z), y_ins, 1).settle(4),
        Waypoint::new(Vec3::new(insert_tip.x, insert_tip.y, 0.16), y_ins, 1),
    ]
}

/// Build the expert for a freshly reset episode. Waypoint tasks plan once,
/// from this state; pushing and sweeping start their FSMs.
pub fn oracle_init(spec: &TaskSpec, s: &WorldState) -> OracleState {
    let plan = match spec.task_id {
        TaskId::Stacking => OraclePlan::Waypoints(stacking_plan(spec, s)),
        TaskId::PushingToPick => OraclePlan::Waypoints(pick_plan(spec, s)),
        TaskId::Assembling => OraclePlan::Waypoints(assembling_plan(spec, s)),
        TaskId::Pushing => OraclePlan::Push(PushPhase::Rise),
        TaskId::Sweeping => OraclePlan::Sweep(SweepPhase::Lift),
    };
    OracleState {
        plan,
        index: 0,
        settle_left: 0,
        best_progress: f64::NEG_INFINITY,
        no_progress: 0,
    }
}

/// Scalar that must keep improving; otherwise the oracle declares itself
/// stuck. Monotone improvements: waypoint index advances and the distance to
/// the current target shrinks; the pushed cube approaches the marker;
/// particles enter the marker / off-marker particles approach it.
fn progress_metric(spec: &TaskSpec, s: &WorldState, os: &OracleState) -> f64 {
    match (&os.plan, spec.task_id) {
        (OraclePlan::Waypoints(plan), _) => {
            let dist = plan
                .get(os.index.min(plan.len().saturating_sub(1)))
                .map_or(0.0, |wp| (s.gripper.position - wp.target).norm());
            os.index as f64 * 10.0 - dist
        }
        (OraclePlan::Push(_), _) => {
            let cube = s.find_kind(ObjKind::CubeGreen);
            let marker = s.find_kind(ObjKind::MarkerSquare);
            match (cube, marker) {
                (Some(c), Some(m)) => -horizontal(c.pose.position - m.pose.position).norm(),
                _ => 0.0,
            }
        }
        (OraclePlan::Sweep(_), _) => {
            let Some(marker) = s.find_kind(ObjKind::MarkerSquare) else {
                return 0.0;
            };
            let mut inside = 0usize;
            let mut off_dist = 0.0;
            for p in &s.particles {
                if marker.footprint_contains(*p) {
                    inside += 1;
                } else {
                    off_dist += horizontal(*p - marker.pose.position).norm();
                }
            }
            inside as f64 - 0.5 * off_dist
        }
    }
}

fn waypoint_action(plan: &[Waypoint], s: &WorldState, os: &mut OracleState) -> Action {
    if os.index >= plan.len() {
        // Plan exhausted: hold position (success should have fired; if not,
        // the stuck detector will end the episode).
        let last = plan.last().expect("plans are non-empty");
        return servo(s, last.target, last.yaw, last.g);
    }
    let wp = plan[os.index];
    if arrived(s, &wp) {
        if os.settle_left < wp.settle {
            os.settle_left += 1;
            return Action::hold(wp.g);
        }
        os.settle_left = 0;
        os.index += 1;
        if os.index >= plan.len() {
            return Action::hold(wp.g);
        }
        let next = plan[os.index];
        return servo(s, next.target, next.yaw, next.g);
    }
    servo(s, wp.target, wp.yaw, wp.g)
}

fn push_action(spec: &TaskSpec, s: &WorldState, phase: PushPhase) -> (Action, PushPhase) {
    let cube = s.find_kind(ObjKind::CubeGreen).expect("pushing has a cube");
    let marker = s.find_kind(ObjKind::MarkerSquare).expect("pushing has a marker");
    let tip = s.gripper.position;
    let cube_half = spec.push_cube_side / 2.0;
    let z_push = cube.pose.position.z;
    let to_marker = horizontal(marker.pose.position - cube.pose.position);
    let dist = to_marker.norm();
    if dist < 1e-9 {
        return (Action::hold(0), phase);
    }
    let dir = to_marker * (1.0 / dist);
    let behind =
        horizontal(cube.pose.position) - dir * (cube_half + TIP_HALF_X + 0.03);

    let mut phase = phase;
    if phase == PushPhase::Rise && tip.z >= 0.085 {
        phase = PushPhase::Travel;
    }
    if phase == PushPhase::Travel
        && horizontal(tip - Vec3::new(behind.x, behind.y, 0.0)).norm() <= 0.006
    {
        phase = PushPhase::Descend;
    }
    if phase == PushPhase::Descend
        && (tip - Vec3::new(behind.x, behind.y, z_push)).norm() <= 0.004
    {
        phase = PushPhase::Drive;
    }
    if phase == PushPhase::Drive {
        let rel = horizontal(tip - cube.pose.position);
        let along = rel.dot(dir);
        let lateral = (rel - dir * along).norm();
        if along > -0.005 || lateral > 0.045 {
            phase = PushPhase::Rise;
        }
    }

    let target = match phase {
        PushPhase::Rise => Vec3::new(tip.x, tip.y, 0.09),
        PushPhase::Travel => Vec3::new(behind.x, behind.y, 0.09),
        PushPhase::Descend => Vec3::new(behind.x, behind.y, z_push),
        PushPhase::Drive => {
            // Aim the tip a little inside the contact face; the penetration
            // depth sets the push speed, smaller near the goal.
            let pen = if dist > 0.06 { 0.012 } else { 0.006 };
            horizontal(cube.pose.position) - dir * (cube_half + TIP_HALF_X - pen)
                + Vec3::new(0.0, 0.0, z_push)
        }
    };
    (servo(s, target, s.gripper.yaw, 0), phase)
}

fn sweep_action(spec: &TaskSpec, s: &WorldState, phase: SweepPhase) -> (Action, SweepPhase) {
    let marker = s.find_kind(ObjKind::MarkerSquare).expect("sweeping has a marker");
    let Some(att) = s.attachment else {
        // Broom lost: hold; the stuck detector ends the episode.
        return (Action::hold(0), phase);
    };
    let broom = s.object(att.object_id);
    let tip = s.gripper.position;
    let blade_center = horizontal(broom.pose.position);
    let marker_xy = horizontal(marker.pose.position);
    let off: Vec<Vec3> =
        s.particles.iter().copied().filter(|p| !marker.footprint_contains(*p)).collect();
    if off.is_empty() {
        return (Action::hold(0), phase);
    }
    // Each pass sweeps through the straggler farthest from the marker,
    // toward the marker center; anything else inside the blade corridor is
    // collected along the way. One particle per pass is guaranteed, so the
    // progress monitor stays happy.
    let p_xy = off
        .iter()
        .map(|p| horizontal(*p))
        .max_by(|a, b| {
            (*a - marker_xy).norm().total_cmp(&(*b - marker_xy).norm())
        })
        .expect("off is non-empty");
    let to_marker = marker_xy - p_xy;
    let dist = to_marker.norm();
    if dist < 1e-9 {
        return (Action::hold(0), phase);
    }
    let dir = to_marker * (1.0 / dist);
    // How far behind the target the blade must start to also cover corridor
    // particles that lie behind it.
    let mut back = 0.0f64;
    for p in &off {
        let rel = horizontal(*p) - p_xy;
        let along = rel.dot(dir);
        let lateral = (rel - dir * along).norm();
        if lateral <= spec.broom_face_width / 2.0 - 0.005 {
            back = back.max(-along);
        }
    }
    let mut start = p_xy - dir * (back + spec.broom_thickness / 2.0 + 0.0075 + 0.02);
    // A straggler near the edge of the table may put the ideal start point
    // outside the gripper's reach; begin as far back as reachable instead.
    let ws = drforge_scene::Workspace::default();
    start.x = start.x.clamp(ws.min.x + 0.002, ws.max.x - 0.002);
    start.y = start.y.clamp(ws.min.y + 0.002, ws.max.y - 0.002);
    // The broom face is its local +/-y normal; either side pushes.
    let face_yaw =
        closest_equivalent_yaw((-dir.x).atan2(dir.y), std::f64::consts::PI, s.gripper.yaw);
    // Tip heights: the blade bottom sits 0.12 below the tip.
    let z_travel = 0.17;
    let z_sweep = 0.1205;

    let mut phase = phase;
    if phase == SweepPhase::Lift && tip.z >= 0.165 {
        phase = SweepPhase::Travel;
    }
    if phase == SweepPhase::Travel
        && horizontal(tip - start).norm() <= 0.005
        && normalize_yaw(s.gripper.yaw - face_yaw).abs() <= 0.03
    {
        phase = SweepPhase::Descend;
    }
    if phase == SweepPhase::Descend && (tip.z - z_sweep).abs() <= 0.003 {
        phase = SweepPhase::Drive;
    }

    match phase {
        SweepPhase::Lift => {
            // Straight up, no rotation while low.
            let target = Vec3::new(tip.x, tip.y, z_travel);
            (servo(s, target, s.gripper.yaw, 0), phase)
        }
        SweepPhase::Travel => {
            let target = Vec3::new(start.x, start.y, z_travel);
            (servo(s, target, face_yaw, 0), phase)
        }
        SweepPhase::Descend => {
            let target = Vec3::new(tip.x, tip.y, z_sweep);
            (servo(s, target, s.gripper.yaw, 0), phase)
        }
        SweepPhase::Drive => {
            let to_goal = marker_xy - blade_center;
            let n = to_goal.norm();
            if n <= 0.015 {
                // Face has reached the marker center: next pass.
                return (Action::hold(0), SweepPhase::Lift);
            }
            let d = to_goal * (1.0 / n);
            let step_len = n.min(0.02);
            let target = Vec3::new(tip.x + d.x * step_len, tip.y + d.y * step_len, z_sweep);
            let yaw = closest_equivalent_yaw(
                (-d.x).atan2(d.y),
                std::f64::consts::PI,
                s.gripper.yaw,
            );
            (servo(s, target, yaw, 0), phase)
        }
    }
}

/// One expert decision. Returns the action and the updated expert state;
/// fails with `OracleStuck` after `ORACLE_STUCK_LIMIT` steps without
/// progress.
pub fn oracle_step(
    spec: &TaskSpec,
    s: &WorldState,
    os: &OracleState,
) -> Result<(Action, OracleState), WorldError> {
    let mut os = os.clone();
    let progress = progress_metric(spec, s, &os);
    if progress > os.best_progress + 1e-6 {
        os.best_progress = progress;
        os.no_progress = 0;
    } else {
        os.no_progress += 1;
        if os.no_progress >= ORACLE_STUCK_LIMIT {
            return Err(WorldError::OracleStuck(ORACLE_STUCK_LIMIT));
        }
    }

    let action = match os.plan.clone() {
        OraclePlan::Waypoints(plan) => waypoint_action(&plan, s, &mut os),
        OraclePlan::Push(phase) => {
            let (a, next_phase) = push_action(spec, s, phase);
            os.plan = OraclePlan::Push(next_phase);
            a
        }
        OraclePlan::Sweep(phase) => {
            let (a, next_phase) = sweep_action(spec, s, phase);
            os.plan = OraclePlan::Sweep(next_phase);
            a
        }
    };
    debug_assert!(action.satisfies_clamps());
    Ok((action, os))
}

/// A complete expert episode: states s_0..s_T and actions a_0..a_{T-1}.
#[derive(Debug, Clone)]
pub struct OracleRollout {
    pub states: Vec<WorldState>,
    pub actions: Vec<Action>,
    pub success: bool,
}

/// Reset with `rng`, then run the scripted expert until success or the step
/// limit. `OracleStuck` and `SamplingFailed` propagate as errors.
pub fn rollout_oracle(spec: &TaskSpec, rng: &mut RngStream) -> Result<OracleRollout, WorldError> {
    let mut s = crate::reset::reset(spec, rng)?;
    let mut os = oracle_init(spec, &s);
    let mut states = Vec::new();
    let mut actions = Vec::new();
    loop {
        if success(spec, &s) {
            states.push(s);
            return Ok(OracleRollout { states, actions, success: true });
        }
        if s.time_step >= spec.max_steps {
            states.push(s);
            return Ok(OracleRollout { states, actions, success: false });
        }
        let (a, next_os) = oracle_step(spec, &s, &os)?;
        os = next_os;
        states.push(s.clone());
        actions.push(a);
        s = step(&s, a);
    }
}

/// Convenience for tests: seed -> fresh stream -> rollout.
pub fn rollout_oracle_seeded(spec: &TaskSpec, seed: u64) -> Result<OracleRollout, WorldError> {
    let mut rng = RngStream::new(seed).child_named("episode");
    rollout_oracle(spec, &mut rng)
}
