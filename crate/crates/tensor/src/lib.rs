//! Minimal CPU tensor library for the training stack: dense tensors over
//! `f32`/`f64`, explicit per-op forward/backward functions (reverse-mode
//! gradients without a tape), an AdamW optimizer with a cosine schedule,
//! finite-difference gradient checking, and checkpoint serialization.

#![forbid(unsafe_code)]

pub mod checkpoint;
pub mod gradcheck;
pub mod init;
pub mod kernels;
pub mod loss;
pub mod ops;
pub mod optim;
mod tensor;

pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, Checkpoint,
    CheckpointError, OptimState,
};
pub use gradcheck::grad_check;
pub use init::kaiming_uniform;
pub use loss::{bce_with_logits_loss, mse_loss};
pub use optim::{cosine_lr, AdamW, OptimizerConfig};
pub use tensor::{Scalar, Tensor};
