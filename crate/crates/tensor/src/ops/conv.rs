use crate::kernels::{axpy, axpy2, gemm_nt};
use crate::tensor::{Scalar, Tensor};

/// Stride/padding pair for a convolution. Padding is symmetric zero-padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvSpec {
    pub stride: usize,
    pub pad: usize,
}

impl ConvSpec {
    pub const fn new(stride: usize, pad: usize) -> Self {
        ConvSpec { stride, pad }
    }

    pub fn out_dim(&self, input: usize, kernel: usize) -> usize {
        (input + 2 * self.pad - kernel) / self.stride + 1
    }
}

/// Write the transposed im2col matrix for one sample: row `p` (one output
/// pixel) holds the receptive-field values in weight order
/// `(ci, kh, kw)`, so convolution becomes row-by-row dot products.
fn im2col_t<E: Scalar>(
    sample: &[E],
    (c_in, h, w): (usize, usize, usize),
    (kh, kw): (usize, usize),
    spec: ConvSpec,
    (oh, ow): (usize, usize),
    cols: &mut [E],
) {
    let k = c_in * kh * kw;
    debug_assert_eq!(cols.len(), oh * ow * k);
    cols.fill(E::ZERO);
    for oy in 0..oh {
        let iy0 = oy * spec.stride;
        for ox in 0..ow {
            let ix0 = ox * spec.stride;
            let row = &mut cols[(oy * ow + ox) * k..(oy * ow + ox + 1) * k];
            for ci in 0..c_in {
                let plane = &sample[ci * h * w..(ci + 1) * h * w];
                for ky in 0..kh {
                    let iy = (iy0 + ky) as isize - spec.pad as isize;
                    if iy < 0 || iy >= h as isize {
                        continue;
                    }
                    let src_row = &plane[iy as usize * w..(iy as usize + 1) * w];
                    let dst = &mut row[(ci * kh + ky) * kw..(ci * kh + ky + 1) * kw];
                    for kx in 0..kw {
                        let ix = (ix0 + kx) as isize - spec.pad as isize;
                        if ix >= 0 && ix < w as isize {
                            dst[kx] = src_row[ix as usize];
                        }
                    }
                }
            }
        }
    }
}

/// 2D convolution. `input` is `(N, C_in, H, W)`, `weight` is
/// `(C_out, C_in, KH, KW)`, `bias` has length `C_out`.
pub fn conv2d_forward<E: Scalar>(
    input: &Tensor<E>,
    weight: &Tensor<E>,
    bias: &[E],
    spec: ConvSpec,
) -> Tensor<E> {
    let (n, c_in, h, w) = input.dims4();
    let (c_out, wc_in, kh, kw) = weight.dims4();
    assert_eq!(c_in, wc_in, "channel mismatch");
    assert_eq!(bias.len(), c_out);
    let oh = spec.out_dim(h, kh);
    let ow = spec.out_dim(w, kw);
    let k = c_in * kh * kw;
    let p = oh * ow;
    let mut out = Tensor::zeros(&[n, c_out, oh, ow]);
    let mut cols = vec![E::ZERO; p * k];
    for s in 0..n {
        let sample = &input.data()[s * c_in * h * w..(s + 1) * c_in * h * w];
        im2col_t(sample, (c_in, h, w), (kh, kw), spec, (oh, ow), &mut cols);
        let out_s = &mut out.data_mut()[s * c_out * p..(s + 1) * c_out * p];
        gemm_nt(weight.data(), &cols, out_s, c_out, k, p, false);
        for co in 0..c_out {
            let b = bias[co];
            for v in &mut out_s[co * p..(co + 1) * p] {
                *v += b;
            }
        }
    }
    out
}

/// Backward pass. Accumulates into `dweight`/`dbias`, and into `dinput` when
/// provided (the first layer of a network can skip the input gradient).
pub fn conv2d_backward<E: Scalar>(
    input: &Tensor<E>,
    weight: &Tensor<E>,
    spec: ConvSpec,
    dout: &Tensor<E>,
    mut dinput: Option<&mut Tensor<E>>,
    dweight: &mut Tensor<E>,
    dbias: &mut [E],
) {
    let (n, c_in, h, w) = input.dims4();
    let (c_out, _, kh, kw) = weight.dims4();
    let (dn, dc, oh, ow) = dout.dims4();
    assert_eq!(dn, n);
    assert_eq!(dc, c_out);
    assert_eq!(dweight.shape(), weight.shape());
    let k = c_in * kh * kw;
    let p = oh * ow;
    let mut cols = vec![E::ZERO; p * k];
    let mut dcols = vec![E::ZERO; p * k];
    for s in 0..n {
        let sample = &input.data()[s * c_in * h * w..(s + 1) * c_in * h * w];
        im2col_t(sample, (c_in, h, w), (kh, kw), spec, (oh, ow), &mut cols);
        let dout_s = &dout.data()[s * c_out * p..(s + 1) * c_out * p];

        // Bias: sum over pixels.
        for co in 0..c_out {
            let mut acc = E::ZERO;
            for &g in &dout_s[co * p..(co + 1) * p] {
                acc += g;
            }
            dbias[co] += acc;
        }

        // Weight gradient: dW[co] += sum_p dout[co, p] * cols[p].
        let dw = dweight.data_mut();
        for co in 0..c_out {
            let drow = &dout_s[co * p..(co + 1) * p];
            let dw_row = &mut dw[co * k..(co + 1) * k];
            let mut pp = 0;
            while pp + 2 <= p {
                axpy2(
                    drow[pp],
                    &cols[pp * k..(pp + 1) * k],
                    drow[pp + 1],
                    &cols[(pp + 1) * k..(pp + 2) * k],
                    dw_row,
                );
                pp += 2;
            }
            if pp < p {
                axpy(drow[pp], &cols[pp * k..(pp + 1) * k], dw_row);
            }
        }

        // Input gradient via the column gradient, then scatter (col2im).
        if let Some(dinp) = dinput.as_deref_mut() {
            dcols.fill(E::ZERO);
            for co in 0..c_out {
                let drow = &dout_s[co * p..(co + 1) * p];
                let w_row = &weight.data()[co * k..(co + 1) * k];
                for (pp, &g) in drow.iter().enumerate() {
                    if g != E::ZERO {
                        axpy(g, w_row, &mut dcols[pp * k..(pp + 1) * k]);
                    }
                }
            }
            let dst = &mut dinp.data_mut()[s * c_in * h * w..(s + 1) * c_in * h * w];
            for oy in 0..oh {
                for ox in 0..ow {
                    let row = &dcols[(oy * ow + ox) * k..(oy * ow + ox + 1) * k];
                    for ci in 0..c_in {
                        for ky in 0..kh {
                            let iy = (oy * spec.stride + ky) as isize - spec.pad as isize;
                            if iy < 0 || iy >= h as isize {
                                continue;
                            }
                            for kx in 0..kw {
                                let ix = (ox * spec.stride + kx) as isize - spec.pad as isize;
                                if ix >= 0 && ix < w as isize {
                                    dst[(ci * h + iy as usize) * w + ix as usize] +=
                                        row[(ci * kh + ky) * kw + kx];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
