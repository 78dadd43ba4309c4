//! Thin layer wrappers: each owns parameter ids in a `ParamSet` and pairs a
//! forward pass with a backward pass that accumulates into the matching
//! gradient buffers.

use crate::params::{two_muts, ParamId, ParamSet};
use drforge_scene::RngStream;
use drforge_tensor::kaiming_uniform;
use drforge_tensor::ops::conv::{conv2d_backward, conv2d_forward, ConvSpec};
use drforge_tensor::ops::linear::{linear_backward, linear_forward};
use drforge_tensor::ops::norm::{group_norm_backward, group_norm_forward, GroupNormCache};
use drforge_tensor::{Scalar, Tensor};

#[derive(Debug, Clone)]
pub struct Conv {
    pub w: ParamId,
    pub b: ParamId,
    pub spec: ConvSpec,
}

impl Conv {
    pub fn new<E: Scalar>(
        ps: &mut ParamSet<E>,
        name: &str,
        c_in: usize,
        c_out: usize,
        k: usize,
        spec: ConvSpec,
        rng: &mut RngStream,
    ) -> Conv {
        let fan_in = c_in * k * k;
        let w = ps.add(format!("{name}.w"), kaiming_uniform(&[c_out, c_in, k, k], fan_in, rng));
        let b = ps.add(format!("{name}.b"), Tensor::zeros(&[c_out]));
        Conv { w, b, spec }
    }

    pub fn forward<E: Scalar>(&self, ps: &ParamSet<E>, x: &Tensor<E>) -> Tensor<E> {
        conv2d_forward(x, ps.get(self.w), ps.get(self.b).data(), self.spec)
    }

    pub fn backward<E: Scalar>(
        &self,
        ps: &ParamSet<E>,
        x: &Tensor<E>,
        dout: &Tensor<E>,
        dx: Option<&mut Tensor<E>>,
        grads: &mut [Tensor<E>],
    ) {
        let (dw, db) = two_muts(grads, self.w, self.b);
        conv2d_backward(x, ps.get(self.w), self.spec, dout, dx, dw, db.data_mut());
    }
}

#[derive(Debug, Clone)]
pub struct Gn {
    pub gamma: ParamId,
    pub beta: ParamId,
    pub groups: usize,
}

impl Gn {
    pub fn new<E: Scalar>(
        ps: &mut ParamSet<E>,
        name: &str,
        channels: usize,
        groups: usize,
    ) -> Gn {
        let gamma = ps.add(format!("{name}.gamma"), Tensor::full(&[channels], E::ONE));
        let beta = ps.add(format!("{name}.beta"), Tensor::zeros(&[channels]));
        Gn { gamma, beta, groups }
    }

    pub fn forward<E: Scalar>(
        &self,
        ps: &ParamSet<E>,
        x: &Tensor<E>,
    ) -> (Tensor<E>, GroupNormCache<E>) {
        group_norm_forward(x, ps.get(self.gamma).data(), ps.get(self.beta).data(), self.groups)
    }

    pub fn backward<E: Scalar>(
        &self,
        ps: &ParamSet<E>,
        x: &Tensor<E>,
        cache: &GroupNormCache<E>,
        dout: &Tensor<E>,
        dx: &mut Tensor<E>,
        grads: &mut [Tensor<E>],
    ) {
        let (dgamma, dbeta) = two_muts(grads, self.gamma, self.beta);
        group_norm_backward(
            x,
            ps.get(self.gamma).data(),
            cache,
            self.groups,
            dout,
            dx,
            dgamma.data_mut(),
            dbeta.data_mut(),
        );
    }
}

#[derive(Debug, Clone)]
pub struct Fc {
    pub w: ParamId,
    pub b: ParamId,
}

impl Fc {
    pub fn new<E: Scalar>(
        ps: &mut ParamSet<E>,
        name: &str,
        in_features: usize,
        out_features: usize,
        rng: &mut RngStream,
    ) -> Fc {
        let w = ps.add(
            format!("{name}.w"),
            kaiming_uniform(&[out_features, in_features], in_features, rng),
        );
        let b = ps.add(format!("{name}.b"), Tensor::zeros(&[out_features]));
        Fc { w, b }
    }

    pub fn forward<E: Scalar>(&self, ps: &ParamSet<E>, x: &Tensor<E>) -> Tensor<E> {
        linear_forward(x, ps.get(self.w), ps.get(self.b).data())
    }

    pub fn backward<E: Scalar>(
        &self,
        ps: &ParamSet<E>,
        x: &Tensor<E>,
        dout: &Tensor<E>,
        dx: Option<&mut Tensor<E>>,
        grads: &mut [Tensor<E>],
    ) {
        let (dw, db) = two_muts(grads, self.w, self.b);
        linear_backward(x, ps.get(self.w), dout, dx, dw, db.data_mut());
    }
}
