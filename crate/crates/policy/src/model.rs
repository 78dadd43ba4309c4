//! Full network: one encoder per camera view, feature concatenation with the
//! proprioceptive vector, and a two-hidden-layer fully connected head.

use crate::encoder::{EncCache, Encoder, EncoderPreset, FEATURE_DIM};
use crate::error::PolicyError;
use crate::layers::Fc;
use crate::params::ParamSet;
use drforge_scene::{RngStream, Vec3};
use drforge_tensor::ops::activ::{relu_backward, relu_forward, sigmoid};
use drforge_tensor::ops::shape::{concat_features, split_features};
use drforge_tensor::{Scalar, Tensor};
use drforge_world::Action;

/// Velocity-command policy output width: linear velocity (3), angular
/// velocity (3), gripper logit (1).
pub const POLICY_OUTPUTS: usize = 7;
/// Cube-offset regressor output width: three cubes times a 3-D offset.
pub const PROXY_OUTPUTS: usize = 9;
/// Hidden width of the fully connected head.
pub const HEAD_WIDTH: usize = 512;
/// Frames stacked per view for the velocity policy.
pub const POLICY_FRAMES: usize = 3;
/// Proprioceptive scalars per recorded step.
pub const PROPRIO_STEP: usize = 5;

/// Frame sizes the two encoder presets are tuned for.
pub const DESK_WIDTH: usize = 120;
pub const DESK_HEIGHT: usize = 90;
pub const FULL_WIDTH: usize = 240;
pub const FULL_HEIGHT: usize = 180;

/// Structural description of a network: what goes in and what comes out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetSpec {
    pub preset: EncoderPreset,
    pub width: usize,
    pub height: usize,
    pub views: usize,
    pub frames: usize,
    pub proprio_dim: usize,
    pub outputs: usize,
}

impl NetSpec {
    pub fn channels_per_view(&self) -> usize {
        3 * self.frames
    }

    pub fn head_input_dim(&self) -> usize {
        self.views * FEATURE_DIM + self.proprio_dim
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        if self.views == 0 || self.views > 2 {
            return Err(PolicyError::Config(format!("views must be 1 or 2, got {}", self.views)));
        }
        if self.frames != 1 && self.frames != POLICY_FRAMES {
            return Err(PolicyError::Config(format!("frames must be 1 or 3, got {}", self.frames)));
        }
        if self.outputs == 0 {
            return Err(PolicyError::Config("outputs must be positive".into()));
        }
        if self.width < 9 || self.height < 9 {
            return Err(PolicyError::Config(format!(
                "frame size {}x{} too small for the encoder",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Configuration of a velocity-command policy network. The head always has
/// two hidden layers of [`HEAD_WIDTH`] and the output is always
/// [`POLICY_OUTPUTS`]; the preset picks the encoder depth, and the remaining
/// fields say how many camera views / stacked frames / proprioceptive scalars
/// the policy consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyConfig {
    pub preset: EncoderPreset,
    pub width: usize,
    pub height: usize,
    pub views: usize,
    pub frames: usize,
    pub proprio_dim: usize,
}

impl PolicyConfig {
    /// Compact two-view policy for desk-scale frames.
    pub fn desk() -> PolicyConfig {
        PolicyConfig {
            preset: EncoderPreset::Desk,
            width: DESK_WIDTH,
            height: DESK_HEIGHT,
            views: 2,
            frames: POLICY_FRAMES,
            proprio_dim: 15,
        }
    }

    /// Deep two-view policy for full-resolution frames.
    pub fn reference() -> PolicyConfig {
        PolicyConfig { preset: EncoderPreset::Reference, width: FULL_WIDTH, height: FULL_HEIGHT, ..PolicyConfig::desk() }
    }

    /// Ablation: a single camera, a single frame, and only the current-step
    /// proprioceptive scalars.
    pub fn desk_single_view() -> PolicyConfig {
        PolicyConfig { views: 1, frames: 1, proprio_dim: PROPRIO_STEP, ..PolicyConfig::desk() }
    }

    pub fn spec(&self) -> NetSpec {
        NetSpec {
            preset: self.preset,
            width: self.width,
            height: self.height,
            views: self.views,
            frames: self.frames,
            proprio_dim: self.proprio_dim,
            outputs: POLICY_OUTPUTS,
        }
    }
}

/// Configuration of the cube-offset regressor: two single-frame views, no
/// proprioception, nine regression outputs (green, red, yellow cube offsets
/// from the gripper, in that order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProxyConfig {
    pub preset: EncoderPreset,
    pub width: usize,
    pub height: usize,
}

impl ProxyConfig {
    pub fn desk() -> ProxyConfig {
        ProxyConfig { preset: EncoderPreset::Desk, width: DESK_WIDTH, height: DESK_HEIGHT }
    }

    pub fn spec(&self) -> NetSpec {
        NetSpec {
            preset: self.preset,
            width: self.width,
            height: self.height,
            views: 2,
            frames: 1,
            proprio_dim: 0,
            outputs: PROXY_OUTPUTS,
        }
    }
}

/// A network instance: per-view encoders (same architecture, independent
/// weights) plus the shared head, with all parameters in one [`ParamSet`].
pub struct Net<E: Scalar> {
    spec: NetSpec,
    pub params: ParamSet<E>,
    encoders: Vec<Encoder>,
    fc1: Fc,
    fc2: Fc,
    fc3: Fc,
}

pub struct NetCache<E: Scalar> {
    enc: Vec<EncCache<E>>,
    h_in: Tensor<E>,
    f1: Tensor<E>,
    a1: Tensor<E>,
    f2: Tensor<E>,
    a2: Tensor<E>,
}

impl<E: Scalar> Net<E> {
    pub fn new(spec: NetSpec, seed: u64) -> Result<Net<E>, PolicyError> {
        spec.validate()?;
        let mut params = ParamSet::default();
        let mut rng = RngStream::new(seed).child_named("init");
        let mut encoders = Vec::with_capacity(spec.views);
        for v in 0..spec.views {
            encoders.push(Encoder::build(
                &mut params,
                &format!("enc{v}"),
                spec.preset,
                spec.channels_per_view(),
                spec.width,
                spec.height,
                &mut rng,
            ));
        }
        let fc1 = Fc::new(&mut params, "head.fc1", spec.head_input_dim(), HEAD_WIDTH, &mut rng);
        let fc2 = Fc::new(&mut params, "head.fc2", HEAD_WIDTH, HEAD_WIDTH, &mut rng);
        let fc3 = Fc::new(&mut params, "head.fc3", HEAD_WIDTH, spec.outputs, &mut rng);
        Ok(Net { spec, params, encoders, fc1, fc2, fc3 })
    }

    pub fn spec(&self) -> &NetSpec {
        &self.spec
    }

    /// Forward pass. `views` holds one `(N, 3*frames, H, W)` tensor per
    /// camera; `proprio` is `(N, proprio_dim)` and present exactly when the
    /// spec says so. Returns `(N, outputs)` raw outputs (the gripper channel
    /// is a logit) and the cache for [`Net::backward`].
    pub fn forward(
        &self,
        views: Vec<Tensor<E>>,
        proprio: Option<&Tensor<E>>,
    ) -> (Tensor<E>, NetCache<E>) {
        assert_eq!(views.len(), self.spec.views, "wrong number of camera views");
        assert_eq!(
            proprio.is_some(),
            self.spec.proprio_dim > 0,
            "proprio tensor presence must match the network spec"
        );
        let mut feats = Vec::with_capacity(views.len());
        let mut enc = Vec::with_capacity(views.len());
        for (encoder, view) in self.encoders.iter().zip(views) {
            let expect_c = self.spec.channels_per_view();
            assert_eq!(view.shape()[1], expect_c, "view channel count mismatch");
            let (f, c) = encoder.forward(&self.params, view);
            feats.push(f);
            enc.push(c);
        }
        let mut parts: Vec<&Tensor<E>> = feats.iter().collect();
        if let Some(p) = proprio {
            assert_eq!(p.shape()[1], self.spec.proprio_dim, "proprio width mismatch");
            parts.push(p);
        }
        let h_in = concat_features(&parts);
        let f1 = self.fc1.forward(&self.params, &h_in);
        let a1 = relu_forward(&f1);
        let f2 = self.fc2.forward(&self.params, &a1);
        let a2 = relu_forward(&f2);
        let out = self.fc3.forward(&self.params, &a2);
        (out, NetCache { enc, h_in, f1, a1, f2, a2 })
    }

    /// Accumulates parameter gradients for `dout` into `grads` (one buffer
    /// per parameter, shapes as [`ParamSet::grad_buffers`] produces).
    pub fn backward(&self, cache: &NetCache<E>, dout: &Tensor<E>, grads: &mut [Tensor<E>]) {
        let mut da2 = Tensor::zeros(cache.a2.shape());
        self.fc3.backward(&self.params, &cache.a2, dout, Some(&mut da2), grads);
        let mut df2 = Tensor::zeros(cache.f2.shape());
        relu_backward(&cache.f2, &da2, &mut df2);
        let mut da1 = Tensor::zeros(cache.a1.shape());
        self.fc2.backward(&self.params, &cache.a1, &df2, Some(&mut da1), grads);
        let mut df1 = Tensor::zeros(cache.f1.shape());
        relu_backward(&cache.f1, &da1, &mut df1);
        let mut dh_in = Tensor::zeros(cache.h_in.shape());
        self.fc1.backward(&self.params, &cache.h_in, &df1, Some(&mut dh_in), grads);

        let mut sizes = vec![FEATURE_DIM; self.spec.views];
        if self.spec.proprio_dim > 0 {
            sizes.push(self.spec.proprio_dim);
        }
        let dparts = split_features(&dh_in, &sizes);
        for (v, encoder) in self.encoders.iter().enumerate() {
            encoder.backward(&self.params, &cache.enc[v], &dparts[v], grads);
        }
    }
}

/// Decoded single-observation policy output.
#[derive(Debug, Clone, Copy)]
pub struct PolicyOutput {
    pub v: Vec3,
    pub omega: Vec3,
    /// Gripper close probability (sigmoid of the raw logit).
    pub g_prob: f64,
}

/// Gripper command threshold used when a probability must become a binary
/// open/close command.
pub const GRIP_THRESHOLD: f64 = 0.5;

impl PolicyOutput {
    pub fn from_row<E: Scalar>(row: &[E]) -> PolicyOutput {
        assert_eq!(row.len(), POLICY_OUTPUTS);
        let f = |i: usize| row[i].to_f64();
        PolicyOutput {
            v: Vec3::new(f(0), f(1), f(2)),
            omega: Vec3::new(f(3), f(4), f(5)),
            g_prob: sigmoid(f(6)),
        }
    }

    /// Converts the raw command into an executable action: velocities clamped
    /// to the action-space limits, gripper closed iff
    /// `g_prob >= `[`GRIP_THRESHOLD`].
    pub fn to_action(&self) -> Action {
        Action::new(self.v, self.omega, u8::from(self.g_prob >= GRIP_THRESHOLD)).clamped()
    }
}
