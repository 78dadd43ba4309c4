//! Visuomotor networks and their training loop: a compact residual image
//! encoder per camera view, a fully connected head, behavior cloning for
//! velocity-command policies, and mean-squared regression for the
//! cube-localization model used to score appearance-randomization settings.

#![forbid(unsafe_code)]

pub mod batch;
pub mod encoder;
pub mod error;
pub mod infer;
pub mod layers;
pub mod loss;
pub mod model;
pub mod params;
pub mod trainer;

pub use batch::{policy_batch, proxy_batch, AugCtx, Batch};
pub use encoder::{BlockSpec, EncCache, Encoder, EncoderPreset, FEATURE_DIM, GN_GROUPS};
pub use error::PolicyError;
pub use infer::{policy_forward, proxy_forward};
pub use loss::{bc_loss, validate_lambda, BcLoss, DEFAULT_LAMBDA};
pub use model::{
    Net, NetCache, NetSpec, PolicyConfig, PolicyOutput, ProxyConfig, DESK_HEIGHT, DESK_WIDTH,
    FULL_HEIGHT, FULL_WIDTH, GRIP_THRESHOLD, HEAD_WIDTH, POLICY_FRAMES, POLICY_OUTPUTS,
    PROXY_OUTPUTS,
};
pub use params::{ParamId, ParamSet};
pub use trainer::{
    desk_regressor_steps, desk_steps, full_scale_regressor_steps, full_scale_steps, load_model,
    train, DataSource, TrainConfig, TrainReport, CHECKPOINT_FILE, DESK_STEP_DIVISOR,
    FULL_STEPS_LONG, FULL_STEPS_SHORT, METRICS_FILE, MODEL_FILE,
};
