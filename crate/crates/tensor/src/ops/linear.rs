use crate::kernels::{axpy, gemm_nt};
use crate::tensor::{Scalar, Tensor};

/// Fully connected layer. `x` is `(N, K)`, `weight` is `(O, K)` (row per
/// output feature), `bias` has length `O`; returns `(N, O)`.
pub fn linear_forward<E: Scalar>(x: &Tensor<E>, weight: &Tensor<E>, bias: &[E]) -> Tensor<E> {
    let (n, k) = x.dims2();
    let (o, wk) = weight.dims2();
    assert_eq!(k, wk, "feature mismatch");
    assert_eq!(bias.len(), o);
    let mut out = Tensor::zeros(&[n, o]);
    gemm_nt(x.data(), weight.data(), out.data_mut(), n, k, o, false);
    for s in 0..n {
        let row = &mut out.data_mut()[s * o..(s + 1) * o];
        for (v, b) in row.iter_mut().zip(bias) {
            *v += *b;
        }
    }
    out
}

/// Backward pass; accumulates into the gradient buffers. `dx` may be omitted
/// when the input gradient is not needed.
pub fn linear_backward<E: Scalar>(
    x: &Tensor<E>,
    weight: &Tensor<E>,
    dout: &Tensor<E>,
    mut dx: Option<&mut Tensor<E>>,
    dweight: &mut Tensor<E>,
    dbias: &mut [E],
) {
    let (n, k) = x.dims2();
    let (o, _) = weight.dims2();
    assert_eq!(dout.dims2(), (n, o));

    for s in 0..n {
        let drow = &dout.data()[s * o..(s + 1) * o];
        for (bi, &g) in dbias.iter_mut().zip(drow) {
            *bi += g;
        }
    }
    // dW[out] += sum_s dout[s, out] * x[s]; output row stays hot in cache.
    for oi in 0..o {
        let dw_row = &mut dweight.data_mut()[oi * k..(oi + 1) * k];
        for s in 0..n {
            let g = dout.data()[s * o + oi];
            if g != E::ZERO {
                axpy(g, &x.data()[s * k..(s + 1) * k], dw_row);
            }
        }
    }
    if let Some(dx) = dx.as_deref_mut() {
        for s in 0..n {
            let dx_row = &mut dx.data_mut()[s * k..(s + 1) * k];
            let drow = &dout.data()[s * o..(s + 1) * o];
            for (oi, &g) in drow.iter().enumerate() {
                if g != E::ZERO {
                    axpy(g, &weight.data()[oi * k..(oi + 1) * k], dx_row);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use drforge_scene::RngStream;

    #[test]
    fn forward_and_backward_match_reference() {
        let mut rng = RngStream::new(4);
        let (n, k, o) = (3usize, 7usize, 5usize);
        let x = Tensor::from_vec(&[n, k], (0..n * k).map(|_| rng.uniform(-1.0, 1.0)).collect());
        let w = Tensor::from_vec(&[o, k], (0..o * k).map(|_| rng.uniform(-1.0, 1.0)).collect());
        let b: Vec<f64> = (0..o).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let out = linear_forward(&x, &w, &b);
        for s in 0..n {
            for oi in 0..o {
                let mut acc = b[oi];
                for kk in 0..k {
                    acc += x.data()[s * k + kk] * w.data()[oi * k + kk];
                }
                assert!((out.data()[s * o + oi] - acc).abs() < 1e-12);
            }
        }

        let lw: Vec<f64> = (0..n * o).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let dout = Tensor::from_vec(&[n, o], lw.clone());
        let mut dx = Tensor::zeros(&[n, k]);
        let mut dw = Tensor::zeros(&[o, k]);
        let mut db = vec![0.0; o];
        linear_backward(&x, &w, &dout, Some(&mut dx), &mut dw, &mut db);

        let loss = |x: &Tensor<f64>, w: &Tensor<f64>, b: &[f64]| -> f64 {
            linear_forward(x, w, b).data().iter().zip(&lw).map(|(a, c)| a * c).sum()
        };
        let h = 1e-6;
        for idx in 0..n * k {
            let mut xp = x.clone();
            xp.data_mut()[idx] += h;
            let mut xm = x.clone();
            xm.data_mut()[idx] -= h;
            let num = (loss(&xp, &w, &b) - loss(&xm, &w, &b)) / (2.0 * h);
            assert!((num - dx.data()[idx]).abs() < 1e-5);
        }
        for idx in 0..o * k {
            let mut wp = w.clone();
            wp.data_mut()[idx] += h;
            let mut wm = w.clone();
            wm.data_mut()[idx] -= h;
            let num = (loss(&x, &wp, &b) - loss(&x, &wm, &b)) / (2.0 * h);
            assert!((num - dw.data()[idx]).abs() < 1e-5);
        }
    }
}
