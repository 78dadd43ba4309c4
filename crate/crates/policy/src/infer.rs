//! Single-observation inference entry points used by closed-loop rollouts
//! and by the localization evaluator.

use crate::batch::{observation_input, proxy_input};
use crate::model::{Net, PolicyOutput, POLICY_OUTPUTS, PROXY_OUTPUTS};
use drforge_dataset::Observation;
use drforge_render::Image;
use drforge_tensor::Scalar;

/// Runs the velocity policy on one observation. Deterministic: equal
/// observations produce equal outputs. The gripper channel is returned as a
/// probability (sigmoid of the raw logit).
pub fn policy_forward<E: Scalar>(net: &Net<E>, obs: &Observation) -> PolicyOutput {
    assert_eq!(net.spec().outputs, POLICY_OUTPUTS, "not a velocity-policy network");
    let (views, proprio) = observation_input::<E>(net.spec(), obs);
    let (out, _) = net.forward(views, proprio.as_ref());
    PolicyOutput::from_row(&out.data()[..POLICY_OUTPUTS])
}

/// Runs the cube-offset regressor on a two-view frame pair. Outputs are the
/// predicted green, red, and yellow cube offsets from the gripper, meters,
/// three scalars each.
pub fn proxy_forward<E: Scalar>(net: &Net<E>, views: [&Image; 2]) -> [f64; PROXY_OUTPUTS] {
    assert_eq!(net.spec().outputs, PROXY_OUTPUTS, "not a localization network");
    let inputs = proxy_input::<E>(net.spec(), views);
    let (out, _) = net.forward(inputs, None);
    let mut result = [0.0; PROXY_OUTPUTS];
    for (slot, value) in result.iter_mut().zip(out.data()) {
        *slot = value.to_f64();
    }
    result
}
