use crate::tensor::{Scalar, Tensor};

pub fn relu_forward<E: Scalar>(x: &Tensor<E>) -> Tensor<E> {
    let data = x.data().iter().map(|&v| v.max(E::ZERO)).collect();
    Tensor::from_vec(x.shape(), data)
}

/// `dx += dout * 1[x > 0]`, accumulated in place.
pub fn relu_backward<E: Scalar>(x: &Tensor<E>, dout: &Tensor<E>, dx: &mut Tensor<E>) {
    assert_eq!(x.shape(), dout.shape());
    assert_eq!(x.shape(), dx.shape());
    for ((d, &g), &v) in dx.data_mut().iter_mut().zip(dout.data()).zip(x.data()) {
        if v > E::ZERO {
            *d += g;
        }
    }
}

pub fn sigmoid<E: Scalar>(x: E) -> E {
    E::ONE / (E::ONE + (-x).exp())
}

pub fn sigmoid_forward<E: Scalar>(x: &Tensor<E>) -> Tensor<E> {
    let data = x.data().iter().map(|&v| sigmoid(v)).collect();
    Tensor::from_vec(x.shape(), data)
}

/// `dx += dout * y * (1 - y)` where `y` is the forward output.
pub fn sigmoid_backward<E: Scalar>(y: &Tensor<E>, dout: &Tensor<E>, dx: &mut Tensor<E>) {
    for ((d, &g), &yv) in dx.data_mut().iter_mut().zip(dout.data()).zip(y.data()) {
        *d += g * yv * (E::ONE - yv);
    }
}
