use crate::tensor::{Scalar, Tensor};

/// Concatenate rank-2 tensors along the feature axis (dim 1). All inputs must
/// share the batch dimension.
pub fn concat_features<E: Scalar>(parts: &[&Tensor<E>]) -> Tensor<E> {
    assert!(!parts.is_empty());
    let n = parts[0].dims2().0;
    let total: usize = parts.iter().map(|p| p.dims2().1).sum();
    let mut out = Tensor::zeros(&[n, total]);
    for s in 0..n {
        let row = &mut out.data_mut()[s * total..(s + 1) * total];
        let mut off = 0;
        for p in parts {
            let (pn, pf) = p.dims2();
            assert_eq!(pn, n, "batch mismatch in concat");
            row[off..off + pf].copy_from_slice(&p.data()[s * pf..(s + 1) * pf]);
            off += pf;
        }
    }
    out
}

/// Split a rank-2 gradient back into the pieces `concat_features` joined.
pub fn split_features<E: Scalar>(dout: &Tensor<E>, sizes: &[usize]) -> Vec<Tensor<E>> {
    let (n, total) = dout.dims2();
    assert_eq!(sizes.iter().sum::<usize>(), total);
    let mut outs: Vec<Tensor<E>> = sizes.iter().map(|&f| Tensor::zeros(&[n, f])).collect();
    for s in 0..n {
        let row = &dout.data()[s * total..(s + 1) * total];
        let mut off = 0;
        for (part, &f) in outs.iter_mut().zip(sizes) {
            part.data_mut()[s * f..(s + 1) * f].copy_from_slice(&row[off..off + f]);
            off += f;
        }
    }
    outs
}

/// Element-wise sum (used for residual connections). The backward pass is the
/// identity into both addends, so callers simply reuse the output gradient.
pub fn add_tensors<E: Scalar>(a: &Tensor<E>, b: &Tensor<E>) -> Tensor<E> {
    assert_eq!(a.shape(), b.shape());
    let data = a.data().iter().zip(b.data()).map(|(&x, &y)| x + y).collect();
    Tensor::from_vec(a.shape(), data)
}

/// Flatten `(N, C, H, W)` to `(N, C*H*W)` without copying semantics beyond
/// the reshape (row-major layout already matches).
pub fn flatten<E: Scalar>(x: &Tensor<E>) -> Tensor<E> {
    let (n, c, h, w) = x.dims4();
    x.clone().reshaped(&[n, c * h * w])
}

/// Inverse of `flatten` for the gradient.
pub fn unflatten<E: Scalar>(dout: &Tensor<E>, shape4: &[usize]) -> Tensor<E> {
    assert_eq!(shape4.len(), 4);
    dout.clone().reshaped(shape4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_then_split_round_trips() {
        let a = Tensor::from_vec(&[2, 2], vec![1.0f64, 2.0, 3.0, 4.0]);
        let b = Tensor::from_vec(&[2, 3], vec![5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
        let joined = concat_features(&[&a, &b]);
        assert_eq!(joined.dims2(), (2, 5));
        assert_eq!(joined.data(), &[1.0, 2.0, 5.0, 6.0, 7.0, 3.0, 4.0, 8.0, 9.0, 10.0]);
        let parts = split_features(&joined, &[2, 3]);
        assert_eq!(parts[0].data(), a.data());
        assert_eq!(parts[1].data(), b.data());
    }

    #[test]
    fn flatten_round_trips() {
        let x = Tensor::from_vec(&[1, 2, 2, 2], (0..8).map(|i| i as f64).collect::<Vec<_>>());
        let f = flatten(&x);
        assert_eq!(f.dims2(), (1, 8));
        let back = unflatten(&f, &[1, 2, 2, 2]);
        assert_eq!(back, x);
    }
}
