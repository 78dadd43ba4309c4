use crate::tensor::{Scalar, Tensor};

/// Optimizer and schedule settings. The schedule is cosine decay from
/// `lr_max` to `lr_min` over `total_steps`, with the endpoints pinned
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub lr_max: f64,
    pub lr_min: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub weight_decay: f64,
    pub total_steps: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            lr_max: 3e-4,
            lr_min: 1e-6,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            weight_decay: 1e-2,
            total_steps: 1000,
        }
    }
}

/// Cosine learning-rate schedule. `step` 0 returns exactly `lr_max`; any
/// step at or past `total_steps` returns exactly `lr_min`.
pub fn cosine_lr(cfg: &OptimizerConfig, step: u64) -> f64 {
    if step == 0 {
        return cfg.lr_max;
    }
    if step >= cfg.total_steps {
        return cfg.lr_min;
    }
    let t = step as f64 / cfg.total_steps as f64;
    cfg.lr_min + 0.5 * (cfg.lr_max - cfg.lr_min) * (1.0 + (std::f64::consts::PI * t).cos())
}

/// AdamW with decoupled weight decay:
/// `p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)`.
#[derive(Debug, Clone)]
pub struct AdamW<E> {
    pub cfg: OptimizerConfig,
    pub t: u64,
    pub m: Vec<Tensor<E>>,
    pub v: Vec<Tensor<E>>,
}

impl<E: Scalar> AdamW<E> {
    pub fn new(cfg: OptimizerConfig, param_shapes: &[Vec<usize>]) -> Self {
        AdamW {
            cfg,
            t: 0,
            m: param_shapes.iter().map(|s| Tensor::zeros(s)).collect(),
            v: param_shapes.iter().map(|s| Tensor::zeros(s)).collect(),
        }
    }

    /// Apply one update with the given learning rate. `params` and `grads`
    /// must be in the same fixed order as at construction.
    pub fn step(&mut self, params: &mut [Tensor<E>], grads: &[Tensor<E>], lr: f64) {
        assert_eq!(params.len(), self.m.len());
        assert_eq!(grads.len(), self.m.len());
        self.t += 1;
        let b1 = E::from_f64(self.cfg.beta1);
        let b2 = E::from_f64(self.cfg.beta2);
        let one_m_b1 = E::from_f64(1.0 - self.cfg.beta1);
        let one_m_b2 = E::from_f64(1.0 - self.cfg.beta2);
        let bc1 = E::from_f64(1.0 / (1.0 - self.cfg.beta1.powi(self.t as i32)));
        let bc2 = E::from_f64(1.0 / (1.0 - self.cfg.beta2.powi(self.t as i32)));
        let lr_e = E::from_f64(lr);
        let wd = E::from_f64(self.cfg.weight_decay);
        let eps = E::from_f64(self.cfg.eps);
        for ((p, g), (m, v)) in
            params.iter_mut().zip(grads).zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            assert_eq!(p.shape(), g.shape());
            for ((pv, &gv), (mv, vv)) in
                p.data_mut().iter_mut().zip(g.data()).zip(m.data_mut().iter_mut().zip(v.data_mut()))
            {
                *mv = b1 * *mv + one_m_b1 * gv;
                *vv = b2 * *vv + one_m_b2 * gv * gv;
                let m_hat = *mv * bc1;
                let v_hat = *vv * bc2;
                *pv = *pv - lr_e * (m_hat / (v_hat.sqrt() + eps) + wd * *pv);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_endpoints_are_exact_and_midpoint_is_halfway() {
        let cfg = OptimizerConfig { total_steps: 1000, ..OptimizerConfig::default() };
        assert_eq!(cosine_lr(&cfg, 0), 3e-4);
        assert_eq!(cosine_lr(&cfg, 1000), 1e-6);
        assert_eq!(cosine_lr(&cfg, 2000), 1e-6);
        let mid = cosine_lr(&cfg, 500);
        assert!((mid - (1e-6 + 0.5 * (3e-4 - 1e-6))).abs() < 1e-15);
        // Monotone decreasing.
        let mut prev = f64::INFINITY;
        for s in 0..=1000 {
            let lr = cosine_lr(&cfg, s);
            assert!(lr <= prev + 1e-18);
            prev = lr;
        }
    }

    #[test]
    fn adamw_matches_closed_form_recurrence() {
        // One scalar parameter, fixed gradients; compare against the update
        // equations evaluated directly.
        let cfg = OptimizerConfig {
            lr_max: 1e-2,
            weight_decay: 0.1,
            total_steps: 10,
            ..OptimizerConfig::default()
        };
        let mut opt: AdamW<f64> = AdamW::new(cfg, &[vec![1]]);
        let mut params = [Tensor::from_vec(&[1], vec![0.5f64])];
        let grads_seq = [0.3, -0.2, 0.05, 0.4, -0.1];

        let (mut p, mut m, mut v) = (0.5f64, 0.0f64, 0.0f64);
        for (i, &g) in grads_seq.iter().enumerate() {
            let lr = cosine_lr(&cfg, i as u64);
            opt.step(&mut params, &[Tensor::from_vec(&[1], vec![g])], lr);
            let t = (i + 1) as i32;
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
            let m_hat = m / (1.0 - cfg.beta1.powi(t));
            let v_hat = v / (1.0 - cfg.beta2.powi(t));
            p -= lr * (m_hat / (v_hat.sqrt() + cfg.eps) + cfg.weight_decay * p);
            assert!(
                (params[0].data()[0] - p).abs() < 1e-7,
                "step {i}: {} vs {p}",
                params[0].data()[0]
            );
        }
    }

    #[test]
    fn decay_is_decoupled_from_the_gradient() {
        // With zero gradient, the update must still shrink the parameter by
        // lr * wd * p (pure decay, no Adam denominator involvement).
        let cfg = OptimizerConfig { weight_decay: 0.5, ..OptimizerConfig::default() };
        let mut opt: AdamW<f64> = AdamW::new(cfg, &[vec![1]]);
        let mut params = [Tensor::from_vec(&[1], vec![2.0f64])];
        opt.step(&mut params, &[Tensor::zeros(&[1])], 0.01);
        assert!((params[0].data()[0] - (2.0 - 0.01 * 0.5 * 2.0)).abs() < 1e-12);
    }
}
