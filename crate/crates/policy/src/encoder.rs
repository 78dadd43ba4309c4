//! Convolutional image encoder: a strided stem, a stack of residual blocks
//! with group normalization, and a fully connected projection to a fixed-size
//! feature vector. Two presets share the block design and differ in depth.

use crate::layers::{Conv, Fc, Gn};
use crate::params::ParamSet;
use drforge_scene::RngStream;
use drforge_tensor::ops::conv::ConvSpec;
use drforge_tensor::ops::activ::{relu_backward, relu_forward};
use drforge_tensor::ops::norm::GroupNormCache;
use drforge_tensor::ops::pool::{avg_pool2d_backward, avg_pool2d_forward};
use drforge_tensor::{Scalar, Tensor};

/// Length of the per-view feature vector produced by every encoder preset.
pub const FEATURE_DIM: usize = 512;
/// Group count used by every group-normalization layer.
pub const GN_GROUPS: usize = 8;
/// Stem output channels (also the input width of the first residual block).
pub const STEM_CHANNELS: usize = 16;

/// Residual block layout: input/output channel counts and first-conv stride.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSpec {
    pub c_in: usize,
    pub c_out: usize,
    pub stride: usize,
}

/// Encoder depth presets.
///
/// `Desk` is the compact variant sized for low-resolution desk-scale frames:
/// four residual blocks doubling width 16 -> 32 -> 64 -> 128, each halving the
/// spatial grid. `Reference` is the deeper 18-weight-layer variant (stem +
/// eight residual blocks + projection) for full-resolution frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderPreset {
    Desk,
    Reference,
}

impl EncoderPreset {
    pub fn blocks(self) -> Vec<BlockSpec> {
        let table: &[(usize, usize, usize)] = match self {
            EncoderPreset::Desk => &[(16, 16, 2), (16, 32, 2), (32, 64, 2), (64, 128, 2)],
            EncoderPreset::Reference => &[
                (16, 16, 1),
                (16, 16, 1),
                (16, 32, 2),
                (32, 32, 1),
                (32, 64, 2),
                (64, 64, 1),
                (64, 128, 2),
                (128, 128, 1),
            ],
        };
        table
            .iter()
            .map(|&(c_in, c_out, stride)| BlockSpec { c_in, c_out, stride })
            .collect()
    }

    /// Number of weight-carrying layers (stem conv + 2 convs per block + the
    /// final projection; skip projections excluded, as is conventional).
    pub fn weight_layers(self) -> usize {
        1 + 2 * self.blocks().len() + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            EncoderPreset::Desk => "desk",
            EncoderPreset::Reference => "reference",
        }
    }

    pub fn parse(s: &str) -> Option<EncoderPreset> {
        match s {
            "desk" => Some(EncoderPreset::Desk),
            "reference" => Some(EncoderPreset::Reference),
            _ => None,
        }
    }
}

const STEM_SPEC: ConvSpec = ConvSpec { stride: 3, pad: 0 };
const POOL_WINDOW: usize = 2;
const POOL_STRIDE: usize = 2;

struct ResBlock {
    conv1: Conv,
    gn1: Gn,
    conv2: Conv,
    gn2: Gn,
    /// 1x1 strided projection on the skip path when the block changes shape.
    proj: Option<Conv>,
}

pub struct Encoder {
    stem: Conv,
    stem_gn: Gn,
    blocks: Vec<ResBlock>,
    fc: Fc,
    /// Spatial grid after the final block, as (height, width).
    pub out_hw: (usize, usize),
    /// Flattened length fed to the projection layer.
    pub flat_dim: usize,
}

impl Encoder {
    /// Builds the layers and registers their parameters under `prefix`.
    /// Spatial dimensions are derived from the input frame size, so any
    /// resolution large enough to survive the downsampling chain works.
    pub fn build<E: Scalar>(
        ps: &mut ParamSet<E>,
        prefix: &str,
        preset: EncoderPreset,
        in_channels: usize,
        width: usize,
        height: usize,
        rng: &mut RngStream,
    ) -> Encoder {
        let stem = Conv::new(
            ps,
            &format!("{prefix}.stem.conv"),
            in_channels,
            STEM_CHANNELS,
            3,
            STEM_SPEC,
            rng,
        );
        let stem_gn = Gn::new(ps, &format!("{prefix}.stem.gn"), STEM_CHANNELS, GN_GROUPS);

        let mut h = STEM_SPEC.out_dim(height, 3);
        let mut w = STEM_SPEC.out_dim(width, 3);
        assert!(
            h >= POOL_WINDOW && w >= POOL_WINDOW,
            "input {width}x{height} too small for the encoder stem"
        );
        h = (h - POOL_WINDOW) / POOL_STRIDE + 1;
        w = (w - POOL_WINDOW) / POOL_STRIDE + 1;

        let mut blocks = Vec::new();
        let mut c_out_last = STEM_CHANNELS;
        for (i, spec) in preset.blocks().into_iter().enumerate() {
            assert_eq!(spec.c_in, c_out_last, "block {i} input width mismatch");
            let name = format!("{prefix}.block{i}");
            let main_spec = ConvSpec::new(spec.stride, 1);
            let conv1 = Conv::new(ps, &format!("{name}.conv1"), spec.c_in, spec.c_out, 3, main_spec, rng);
            let gn1 = Gn::new(ps, &format!("{name}.gn1"), spec.c_out, GN_GROUPS);
            let conv2 =
                Conv::new(ps, &format!("{name}.conv2"), spec.c_out, spec.c_out, 3, ConvSpec::new(1, 1), rng);
            let gn2 = Gn::new(ps, &format!("{name}.gn2"), spec.c_out, GN_GROUPS);
            let proj = if spec.stride != 1 || spec.c_in != spec.c_out {
                Some(Conv::new(
                    ps,
                    &format!("{name}.skip"),
                    spec.c_in,
                    spec.c_out,
                    1,
                    ConvSpec::new(spec.stride, 0),
                    rng,
                ))
            } else {
                None
            };
            let new_h = main_spec.out_dim(h, 3);
            let new_w = main_spec.out_dim(w, 3);
            assert!(new_h > 0 && new_w > 0, "block {i} collapses the spatial grid");
            h = new_h;
            w = new_w;
            c_out_last = spec.c_out;
            blocks.push(ResBlock { conv1, gn1, conv2, gn2, proj });
        }

        let flat_dim = c_out_last * h * w;
        let fc = Fc::new(ps, &format!("{prefix}.fc"), flat_dim, FEATURE_DIM, rng);
        Encoder { stem, stem_gn, blocks, fc, out_hw: (h, w), flat_dim }
    }
}

struct BlockCache<E: Scalar> {
    x: Tensor<E>,
    c1: Tensor<E>,
    g1: GroupNormCache<E>,
    r1: Tensor<E>,
    a1: Tensor<E>,
    c2: Tensor<E>,
    g2: GroupNormCache<E>,
    sum: Tensor<E>,
}

pub struct EncCache<E: Scalar> {
    input: Tensor<E>,
    stem_c: Tensor<E>,
    stem_g: GroupNormCache<E>,
    stem_r: Tensor<E>,
    stem_a: Tensor<E>,
    blocks: Vec<BlockCache<E>>,
    flat: Tensor<E>,
    fc_pre: Tensor<E>,
}

impl Encoder {
    /// Runs the encoder on an `(N, C, H, W)` batch and returns `(N, 512)`
    /// features plus the activations needed for the backward pass.
    pub fn forward<E: Scalar>(
        &self,
        ps: &ParamSet<E>,
        input: Tensor<E>,
    ) -> (Tensor<E>, EncCache<E>) {
        let stem_c = self.stem.forward(ps, &input);
        let (stem_r, stem_g) = self.stem_gn.forward(ps, &stem_c);
        let stem_a = relu_forward(&stem_r);
        let pooled = avg_pool2d_forward(&stem_a, POOL_WINDOW, POOL_STRIDE);

        let mut x = pooled;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let c1 = block.conv1.forward(ps, &x);
            let (r1, g1) = block.gn1.forward(ps, &c1);
            let a1 = relu_forward(&r1);
            let c2 = block.conv2.forward(ps, &a1);
            let (main, g2) = block.gn2.forward(ps, &c2);
            let mut sum = main;
            match &block.proj {
                Some(proj) => sum.add_assign_tensor(&proj.forward(ps, &x)),
                None => sum.add_assign_tensor(&x),
            }
            let out = relu_forward(&sum);
            blocks.push(BlockCache { x, c1, g1, r1, a1, c2, g2, sum });
            x = out;
        }

        let n = x.shape()[0];
        let flat = x.reshaped(&[n, self.flat_dim]);
        let fc_pre = self.fc.forward(ps, &flat);
        let features = relu_forward(&fc_pre);
        let cache = EncCache {
            input,
            stem_c,
            stem_g,
            stem_r,
            stem_a,
            blocks,
            flat,
            fc_pre,
        };
        (features, cache)
    }

    /// Accumulates parameter gradients for `dfeat` (gradient of the loss with
    /// respect to the returned features). Input gradients are not produced:
    /// the encoder is always the first stage of the network.
    pub fn backward<E: Scalar>(
        &self,
        ps: &ParamSet<E>,
        cache: &EncCache<E>,
        dfeat: &Tensor<E>,
        grads: &mut [Tensor<E>],
    ) {
        let mut dfc_pre = Tensor::zeros(cache.fc_pre.shape());
        relu_backward(&cache.fc_pre, dfeat, &mut dfc_pre);
        let mut dflat = Tensor::zeros(cache.flat.shape());
        self.fc.backward(ps, &cache.flat, &dfc_pre, Some(&mut dflat), grads);

        let last = cache.blocks.last().expect("encoder has at least one block");
        let mut dx = dflat.reshaped(last.sum.shape());
        for block in self.blocks.iter().zip(&cache.blocks).rev() {
            let (layer, c) = block;
            let mut dsum = Tensor::zeros(c.sum.shape());
            relu_backward(&c.sum, &dx, &mut dsum);

            let mut dc2 = Tensor::zeros(c.c2.shape());
            layer.gn2.backward(ps, &c.c2, &c.g2, &dsum, &mut dc2, grads);
            let mut da1 = Tensor::zeros(c.a1.shape());
            layer.conv2.backward(ps, &c.a1, &dc2, Some(&mut da1), grads);

            let mut dr1 = Tensor::zeros(c.r1.shape());
            relu_backward(&c.r1, &da1, &mut dr1);
            let mut dc1 = Tensor::zeros(c.c1.shape());
            layer.gn1.backward(ps, &c.c1, &c.g1, &dr1, &mut dc1, grads);

            let mut dxin = Tensor::zeros(c.x.shape());
            layer.conv1.backward(ps, &c.x, &dc1, Some(&mut dxin), grads);
            match &layer.proj {
                Some(proj) => {
                    proj.backward(ps, &c.x, &dsum, Some(&mut dxin), grads);
                }
                None => dxin.add_assign_tensor(&dsum),
            }
            dx = dxin;
        }

        let mut da = Tensor::zeros(cache.stem_a.shape());
        avg_pool2d_backward(cache.stem_a.shape(), POOL_WINDOW, POOL_STRIDE, &dx, &mut da);
        let mut dr = Tensor::zeros(cache.stem_r.shape());
        relu_backward(&cache.stem_r, &da, &mut dr);
        let mut dc = Tensor::zeros(cache.stem_c.shape());
        self.stem_gn.backward(ps, &cache.stem_c, &cache.stem_g, &dr, &mut dc, grads);
        self.stem.backward(ps, &cache.input, &dc, None, grads);
    }
}
