//! Tabletop manipulation world: deterministic rigid-body dynamics on a desk,
//! task resets, success predicates, and scripted experts for five tasks
//! (stacking, pushing, pushing-to-pick, sweeping, assembling).
//!
//! The simulation is kinematic and purely functional: `step` maps a state and
//! an action to the next state without mutating either, so trajectories can
//! be replayed and branched exactly.

#![forbid(unsafe_code)]

mod action;
mod error;
mod obb;
mod oracle;
mod reset;
mod state;
mod step;
mod success;
mod task;

pub use action::{Action, DT, V_MAX, W_MAX};
pub use error::WorldError;
pub use obb::{obb_mtv, Obb2};
pub use oracle::{
    oracle_init, oracle_step, rollout_oracle, rollout_oracle_seeded, OracleRollout, OracleState,
    PushPhase, SweepPhase, Waypoint, ORACLE_STUCK_LIMIT,
};
pub use reset::{
    nominal_color, proxy_scene, reset, PUSH_MARKER_COLOR, RESET_MAX_REJECTIONS, RESET_SEPARATION,
};
pub use state::{
    Attachment, ObjKind, ObjectState, WorldState, BROOM_HANDLE_HEIGHT,
};
pub use step::{
    step, GRASP_TOLERANCE, OPENNESS_RATE, PARTICLE_HALF, TIP_HALF_X, TIP_HALF_Y, TIP_HALF_Z,
};
pub use success::{success, wrap_quarter};
pub use task::{TaskId, TaskSpec};
