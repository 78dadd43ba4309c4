use crate::tensor::{Scalar, Tensor};

pub const GROUP_NORM_EPS: f64 = 1e-5;

/// Per-(sample, group) statistics kept from the forward pass for backward.
#[derive(Debug, Clone)]
pub struct GroupNormCache<E> {
    pub mean: Vec<E>,
    pub inv_std: Vec<E>,
}

/// Group normalization over `(N, C, H, W)`: channels are split into `groups`
/// contiguous groups, each normalized by its own mean/variance across
/// `(C/groups, H, W)`, then scaled by per-channel `gamma` and shifted by
/// `beta`.
pub fn group_norm_forward<E: Scalar>(
    x: &Tensor<E>,
    gamma: &[E],
    beta: &[E],
    groups: usize,
) -> (Tensor<E>, GroupNormCache<E>) {
    let (n, c, h, w) = x.dims4();
    assert!(groups > 0 && c % groups == 0, "channels {c} not divisible by groups {groups}");
    assert_eq!(gamma.len(), c);
    assert_eq!(beta.len(), c);
    let cg = c / groups;
    let m = cg * h * w;
    let inv_m = 1.0 / m as f64;
    let mut out = Tensor::zeros(x.shape());
    let mut cache =
        GroupNormCache { mean: vec![E::ZERO; n * groups], inv_std: vec![E::ZERO; n * groups] };
    for s in 0..n {
        for g in 0..groups {
            let base = (s * c + g * cg) * h * w;
            let slab = &x.data()[base..base + m];
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for &v in slab {
                let v = v.to_f64();
                sum += v;
                sum_sq += v * v;
            }
            let mean = sum * inv_m;
            let var = (sum_sq * inv_m - mean * mean).max(0.0);
            let inv_std = 1.0 / (var + GROUP_NORM_EPS).sqrt();
            cache.mean[s * groups + g] = E::from_f64(mean);
            cache.inv_std[s * groups + g] = E::from_f64(inv_std);
            let mean_e = E::from_f64(mean);
            let inv_e = E::from_f64(inv_std);
            for ci in 0..cg {
                let ch = g * cg + ci;
                let (ga, be) = (gamma[ch], beta[ch]);
                let src = &x.data()[base + ci * h * w..base + (ci + 1) * h * w];
                let dst = &mut out.data_mut()[base + ci * h * w..base + (ci + 1) * h * w];
                for (d, &v) in dst.iter_mut().zip(src) {
                    *d = (v - mean_e) * inv_e * ga + be;
                }
            }
        }
    }
    (out, cache)
}

/// Backward pass; accumulates into `dx`, `dgamma`, `dbeta`.
pub fn group_norm_backward<E: Scalar>(
    x: &Tensor<E>,
    gamma: &[E],
    cache: &GroupNormCache<E>,
    groups: usize,
    dout: &Tensor<E>,
    dx: &mut Tensor<E>,
    dgamma: &mut [E],
    dbeta: &mut [E],
) {
    let (n, c, h, w) = x.dims4();
    let cg = c / groups;
    let m = cg * h * w;
    let inv_m = E::from_f64(1.0 / m as f64);
    for s in 0..n {
        for g in 0..groups {
            let base = (s * c + g * cg) * h * w;
            let mean = cache.mean[s * groups + g];
            let inv_std = cache.inv_std[s * groups + g];

            // First pass: per-channel sums for dgamma/dbeta and the two group
            // reductions needed for dx.
            let mut sum_dyg = E::ZERO;
            let mut sum_dyg_xhat = E::ZERO;
            for ci in 0..cg {
                let ch = g * cg + ci;
                let xs = &x.data()[base + ci * h * w..base + (ci + 1) * h * w];
                let ds = &dout.data()[base + ci * h * w..base + (ci + 1) * h * w];
                let mut dg = E::ZERO;
                let mut db = E::ZERO;
                for (&xv, &dv) in xs.iter().zip(ds) {
                    let xhat = (xv - mean) * inv_std;
                    dg += dv * xhat;
                    db += dv;
                }
                dgamma[ch] += dg;
                dbeta[ch] += db;
                sum_dyg += db * gamma[ch];
                sum_dyg_xhat += dg * gamma[ch];
            }
            let mean_dyg = sum_dyg * inv_m;
            let mean_dyg_xhat = sum_dyg_xhat * inv_m;

            // Second pass: dx = inv_std * (dy*gamma - mean(dy*gamma) - xhat * mean(dy*gamma*xhat)).
            for ci in 0..cg {
                let ch = g * cg + ci;
                let ga = gamma[ch];
                let xs = &x.data()[base + ci * h * w..base + (ci + 1) * h * w];
                let ds = &dout.data()[base + ci * h * w..base + (ci + 1) * h * w];
                let dst = &mut dx.data_mut()[base + ci * h * w..base + (ci + 1) * h * w];
                for ((d, &xv), &dv) in dst.iter_mut().zip(xs).zip(ds) {
                    let xhat = (xv - mean) * inv_std;
                    *d += inv_std * (dv * ga - mean_dyg - xhat * mean_dyg_xhat);
                }
            }
        }
    }
}
