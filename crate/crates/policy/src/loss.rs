//! Behavior-cloning loss: a weighted sum of a mean-squared velocity term and
//! a binary cross-entropy gripper term.

use crate::error::PolicyError;
use crate::model::POLICY_OUTPUTS;
use drforge_tensor::ops::shape::{concat_features, split_features};
use drforge_tensor::{bce_with_logits_loss, mse_loss, Scalar, Tensor};

/// Default mixing weight on the velocity term (the gripper term gets `1 - λ`).
pub const DEFAULT_LAMBDA: f64 = 0.8;

/// Velocity-command loss breakdown.
#[derive(Debug, Clone, Copy)]
pub struct BcLoss<E> {
    /// `λ · L_MSE + (1 − λ) · L_BCE`.
    pub total: E,
    pub mse: E,
    pub bce: E,
}

pub fn validate_lambda(lambda: f64) -> Result<(), PolicyError> {
    if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
        return Err(PolicyError::Config(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

/// Computes the behavior-cloning loss and its gradient with respect to the
/// raw network output.
///
/// `pred` and `target` are `(N, 7)`: columns 0..6 are the commanded twist
/// (mean-squared error over all six channels), column 6 is the gripper —
/// a raw logit in `pred`, a 0/1 label in `target` (binary cross-entropy).
pub fn bc_loss<E: Scalar>(
    pred: &Tensor<E>,
    target: &Tensor<E>,
    lambda: f64,
) -> (BcLoss<E>, Tensor<E>) {
    assert_eq!(pred.shape(), target.shape(), "prediction/target shape mismatch");
    assert_eq!(pred.shape()[1], POLICY_OUTPUTS, "behavior-cloning output must be 7 wide");
    let lam = E::from_f64(lambda);
    let one_minus = E::from_f64(1.0 - lambda);

    let pred_parts = split_features(pred, &[6, 1]);
    let target_parts = split_features(target, &[6, 1]);
    let (mse, mut dmse) = mse_loss(&pred_parts[0], &target_parts[0]);
    let (bce, mut dbce) = bce_with_logits_loss(&pred_parts[1], &target_parts[1]);
    dmse.scale(lam);
    dbce.scale(one_minus);
    let dpred = concat_features(&[&dmse, &dbce]);
    let total = lam * mse + one_minus * bce;
    (BcLoss { total, mse, bce }, dpred)
}
