use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Element type for tensors: implemented by `f32` (training) and `f64`
/// (verification, e.g. finite-difference gradient checks).
pub trait Scalar:
    Copy
    + Clone
    + Debug
    + Default
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn mul_add(self, a: Self, b: Self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln_1p(self) -> Self;
    fn abs(self) -> Self;
    fn max(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Scalar for f32 {
    const ZERO: f32 = 0.0;
    const ONE: f32 = 1.0;
    fn from_f64(x: f64) -> f32 {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn mul_add(self, a: f32, b: f32) -> f32 {
        f32::mul_add(self, a, b)
    }
    fn sqrt(self) -> f32 {
        f32::sqrt(self)
    }
    fn exp(self) -> f32 {
        f32::exp(self)
    }
    fn ln_1p(self) -> f32 {
        f32::ln_1p(self)
    }
    fn abs(self) -> f32 {
        f32::abs(self)
    }
    fn max(self, other: f32) -> f32 {
        f32::max(self, other)
    }
    fn min(self, other: f32) -> f32 {
        f32::min(self, other)
    }
    fn powi(self, n: i32) -> f32 {
        f32::powi(self, n)
    }
}

impl Scalar for f64 {
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn mul_add(self, a: f64, b: f64) -> f64 {
        f64::mul_add(self, a, b)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    fn ln_1p(self) -> f64 {
        f64::ln_1p(self)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn max(self, other: f64) -> f64 {
        f64::max(self, other)
    }
    fn min(self, other: f64) -> f64 {
        f64::min(self, other)
    }
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
}

/// Dense row-major tensor (last dimension fastest). Models use rank 4
/// `(batch, channels, height, width)` for feature maps and rank 2
/// `(batch, features)` for vectors, but any rank is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<E> {
    shape: Vec<usize>,
    data: Vec<E>,
}

impl<E: Scalar> Tensor<E> {
    pub fn zeros(shape: &[usize]) -> Self {
        let numel = shape.iter().product();
        Tensor { shape: shape.to_vec(), data: vec![E::ZERO; numel] }
    }

    pub fn from_vec(shape: &[usize], data: Vec<E>) -> Self {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "shape {shape:?} does not match {} elements",
            data.len()
        );
        Tensor { shape: shape.to_vec(), data }
    }

    pub fn full(shape: &[usize], value: E) -> Self {
        let numel = shape.iter().product();
        Tensor { shape: shape.to_vec(), data: vec![value; numel] }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [E] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<E> {
        self.data
    }

    /// Reinterpret with a new shape of the same element count.
    pub fn reshaped(mut self, shape: &[usize]) -> Self {
        assert_eq!(shape.iter().product::<usize>(), self.data.len());
        self.shape = shape.to_vec();
        self
    }

    pub fn dims2(&self) -> (usize, usize) {
        assert_eq!(self.shape.len(), 2, "expected rank 2, got {:?}", self.shape);
        (self.shape[0], self.shape[1])
    }

    pub fn dims4(&self) -> (usize, usize, usize, usize) {
        assert_eq!(self.shape.len(), 4, "expected rank 4, got {:?}", self.shape);
        (self.shape[0], self.shape[1], self.shape[2], self.shape[3])
    }

    pub fn fill(&mut self, value: E) {
        self.data.fill(value);
    }

    /// Element-wise `self += other` (shapes must match).
    pub fn add_assign_tensor(&mut self, other: &Tensor<E>) {
        assert_eq!(self.shape, other.shape);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }

    pub fn scale(&mut self, k: E) {
        for a in self.data.iter_mut() {
            *a = *a * k;
        }
    }

    /// Convert element type (used to run the same model in f64 for checks).
    pub fn cast<T: Scalar>(&self) -> Tensor<T> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|x| T::from_f64(x.to_f64())).collect(),
        }
    }
}
