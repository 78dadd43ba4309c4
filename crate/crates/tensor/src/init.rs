use crate::tensor::{Scalar, Tensor};
use drforge_scene::RngStream;

/// Kaiming-uniform initialization for ReLU networks: uniform in
/// `[-sqrt(6/fan_in), sqrt(6/fan_in)]`. For convolutions
/// `fan_in = C_in * KH * KW`; for linear layers `fan_in = in_features`.
pub fn kaiming_uniform<E: Scalar>(shape: &[usize], fan_in: usize, rng: &mut RngStream) -> Tensor<E> {
    assert!(fan_in > 0);
    let bound = (6.0 / fan_in as f64).sqrt();
    let n: usize = shape.iter().product();
    let data = (0..n).map(|_| E::from_f64(rng.uniform(-bound, bound))).collect();
    Tensor::from_vec(shape, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_respect_the_fan_in_bound_and_fill_the_range() {
        let mut rng = RngStream::new(21);
        let fan_in = 96;
        let t: Tensor<f64> = kaiming_uniform(&[64, 96], fan_in, &mut rng);
        let bound = (6.0 / fan_in as f64).sqrt();
        let mut max_seen: f64 = 0.0;
        for &v in t.data() {
            assert!(v.abs() <= bound);
            max_seen = max_seen.max(v.abs());
        }
        // With 6144 draws the max should come close to the bound.
        assert!(max_seen > 0.98 * bound);
        let mean: f64 = t.data().iter().sum::<f64>() / t.numel() as f64;
        assert!(mean.abs() < 0.01);
    }

    #[test]
    fn deterministic_given_the_stream() {
        let a: Tensor<f32> = kaiming_uniform(&[3, 3], 9, &mut RngStream::new(5).child(1));
        let b: Tensor<f32> = kaiming_uniform(&[3, 3], 9, &mut RngStream::new(5).child(1));
        assert_eq!(a, b);
    }
}
