use crate::tensor::{Scalar, Tensor};

/// Average pooling with a square window and no padding; trailing rows/columns
/// that do not fill a window are dropped.
pub fn avg_pool2d_forward<E: Scalar>(x: &Tensor<E>, window: usize, stride: usize) -> Tensor<E> {
    let (n, c, h, w) = x.dims4();
    assert!(window > 0 && stride > 0);
    assert!(h >= window && w >= window, "input {h}x{w} smaller than window {window}");
    let oh = (h - window) / stride + 1;
    let ow = (w - window) / stride + 1;
    let inv = E::from_f64(1.0 / (window * window) as f64);
    let mut out = Tensor::zeros(&[n, c, oh, ow]);
    for nc in 0..n * c {
        let plane = &x.data()[nc * h * w..(nc + 1) * h * w];
        let dst = &mut out.data_mut()[nc * oh * ow..(nc + 1) * oh * ow];
        for oy in 0..oh {
            for ox in 0..ow {
                let mut acc = E::ZERO;
                for ky in 0..window {
                    let row = &plane[(oy * stride + ky) * w + ox * stride..][..window];
                    for &v in row {
                        acc += v;
                    }
                }
                dst[oy * ow + ox] = acc * inv;
            }
        }
    }
    out
}

/// Backward of average pooling: spreads each output gradient uniformly over
/// its window. Accumulates into `dx`.
pub fn avg_pool2d_backward<E: Scalar>(
    x_shape: &[usize],
    window: usize,
    stride: usize,
    dout: &Tensor<E>,
    dx: &mut Tensor<E>,
) {
    assert_eq!(dx.shape(), x_shape);
    let (n, c, h, w) = dx.dims4();
    let (_, _, oh, ow) = dout.dims4();
    let inv = E::from_f64(1.0 / (window * window) as f64);
    for nc in 0..n * c {
        let src = &dout.data()[nc * oh * ow..(nc + 1) * oh * ow];
        let dst = &mut dx.data_mut()[nc * h * w..(nc + 1) * h * w];
        for oy in 0..oh {
            for ox in 0..ow {
                let g = src[oy * ow + ox] * inv;
                for ky in 0..window {
                    let row = &mut dst[(oy * stride + ky) * w + ox * stride..][..window];
                    for v in row {
                        *v += g;
                    }
                }
            }
        }
    }
}
