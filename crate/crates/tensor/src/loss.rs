use crate::ops::activ::sigmoid;
use crate::tensor::{Scalar, Tensor};

/// Mean squared error over all elements. Returns `(loss, dloss/dpred)`.
pub fn mse_loss<E: Scalar>(pred: &Tensor<E>, target: &Tensor<E>) -> (E, Tensor<E>) {
    assert_eq!(pred.shape(), target.shape());
    let n = pred.numel();
    let inv = E::from_f64(1.0 / n as f64);
    let mut grad = Tensor::zeros(pred.shape());
    let mut loss = E::ZERO;
    for ((g, &p), &t) in grad.data_mut().iter_mut().zip(pred.data()).zip(target.data()) {
        let d = p - t;
        loss += d * d;
        *g = (d + d) * inv;
    }
    (loss * inv, grad)
}

/// Binary cross-entropy on logits, numerically stable form
/// `max(x,0) - x*t + ln(1 + e^{-|x|})`, averaged over all elements.
/// Returns `(loss, dloss/dlogits)`.
pub fn bce_with_logits_loss<E: Scalar>(logits: &Tensor<E>, targets: &Tensor<E>) -> (E, Tensor<E>) {
    assert_eq!(logits.shape(), targets.shape());
    let n = logits.numel();
    let inv = E::from_f64(1.0 / n as f64);
    let mut grad = Tensor::zeros(logits.shape());
    let mut loss = E::ZERO;
    for ((g, &x), &t) in grad.data_mut().iter_mut().zip(logits.data()).zip(targets.data()) {
        loss += x.max(E::ZERO) - x * t + (-x.abs()).exp().ln_1p();
        *g = (sigmoid(x) - t) * inv;
    }
    (loss * inv, grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_value_and_gradient() {
        let p = Tensor::from_vec(&[2, 2], vec![1.0f64, 2.0, 3.0, 4.0]);
        let t = Tensor::from_vec(&[2, 2], vec![1.0, 1.0, 1.0, 1.0]);
        let (loss, grad) = mse_loss(&p, &t);
        // ((0)^2 + 1 + 4 + 9) / 4 = 3.5
        assert!((loss - 3.5).abs() < 1e-12);
        assert_eq!(grad.data(), &[0.0, 0.5, 1.0, 1.5]);
    }

    #[test]
    fn bce_matches_naive_formula_and_is_stable_at_extremes() {
        let x = Tensor::from_vec(&[4], vec![0.0f64, 2.0, -3.0, 40.0]);
        let t = Tensor::from_vec(&[4], vec![1.0, 1.0, 0.0, 0.0]);
        let (loss, grad) = bce_with_logits_loss(&x, &t);
        let naive = |x: f64, t: f64| -> f64 {
            let s = 1.0 / (1.0 + (-x).exp());
            -(t * s.ln() + (1.0 - t) * (1.0 - s).ln())
        };
        let expect = (naive(0.0, 1.0) + naive(2.0, 1.0) + naive(-3.0, 0.0) + 40.0) / 4.0;
        assert!((loss - expect).abs() < 1e-9, "{loss} vs {expect}");
        assert!(loss.is_finite());
        // Gradient is (sigmoid(x) - t) / n.
        assert!((grad.data()[0] - (0.5 - 1.0) / 4.0).abs() < 1e-12);
        assert!((grad.data()[3] - (1.0 - 0.0) / 4.0).abs() < 1e-9);
    }

    #[test]
    fn bce_gradient_matches_finite_differences() {
        let x = Tensor::from_vec(&[3], vec![0.3f64, -1.2, 2.4]);
        let t = Tensor::from_vec(&[3], vec![1.0, 0.0, 1.0]);
        let (_, grad) = bce_with_logits_loss(&x, &t);
        let h = 1e-6;
        for i in 0..3 {
            let mut xp = x.clone();
            xp.data_mut()[i] += h;
            let mut xm = x.clone();
            xm.data_mut()[i] -= h;
            let (lp, _) = bce_with_logits_loss(&xp, &t);
            let (lm, _) = bce_with_logits_loss(&xm, &t);
            let num = (lp - lm) / (2.0 * h);
            assert!((num - grad.data()[i]).abs() < 1e-8);
        }
    }
}
