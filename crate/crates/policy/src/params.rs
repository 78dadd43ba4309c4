//! Named parameter storage. Layers hold indices into one flat, ordered list
//! of tensors; the same order drives the optimizer state and the checkpoint
//! layout, so training, resuming, and loading stay consistent.

use crate::error::PolicyError;
use drforge_tensor::{Scalar, Tensor};

pub type ParamId = usize;

#[derive(Debug, Clone)]
pub struct ParamSet<E> {
    names: Vec<String>,
    tensors: Vec<Tensor<E>>,
}

impl<E: Scalar> ParamSet<E> {
    pub fn new() -> ParamSet<E> {
        ParamSet { names: Vec::new(), tensors: Vec::new() }
    }

    pub fn add(&mut self, name: impl Into<String>, tensor: Tensor<E>) -> ParamId {
        let name = name.into();
        assert!(
            !self.names.contains(&name),
            "duplicate parameter name `{name}`"
        );
        self.names.push(name);
        self.tensors.push(tensor);
        self.tensors.len() - 1
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn get(&self, id: ParamId) -> &Tensor<E> {
        &self.tensors[id]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Tensor<E> {
        &mut self.tensors[id]
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id]
    }

    pub fn tensors(&self) -> &[Tensor<E>] {
        &self.tensors
    }

    pub fn tensors_mut(&mut self) -> &mut [Tensor<E>] {
        &mut self.tensors
    }

    pub fn shapes(&self) -> Vec<Vec<usize>> {
        self.tensors.iter().map(|t| t.shape().to_vec()).collect()
    }

    /// Zeroed tensors matching every parameter: one gradient buffer per
    /// parameter, in parameter order.
    pub fn grad_buffers(&self) -> Vec<Tensor<E>> {
        self.tensors.iter().map(|t| Tensor::zeros(t.shape())).collect()
    }

    pub fn total_scalars(&self) -> usize {
        self.tensors.iter().map(|t| t.numel()).sum()
    }

    /// Snapshot as named f32 tensors in parameter order (checkpoint layout).
    pub fn to_named_f32(&self) -> Vec<(String, Tensor<f32>)> {
        self.names
            .iter()
            .zip(&self.tensors)
            .map(|(n, t)| (n.clone(), t.cast::<f32>()))
            .collect()
    }

    /// Load values saved by `to_named_f32`. Every parameter must be present
    /// under its exact name with its exact shape; extras are rejected.
    pub fn load_named_f32(&mut self, named: &[(String, Tensor<f32>)]) -> Result<(), PolicyError> {
        if named.len() != self.names.len() {
            return Err(PolicyError::ParamMismatch {
                name: "(checkpoint)".to_string(),
                reason: format!(
                    "holds {} tensors, model has {}",
                    named.len(),
                    self.names.len()
                ),
            });
        }
        for (name, value) in named {
            let id = self.names.iter().position(|n| n == name).ok_or_else(|| {
                PolicyError::ParamMismatch {
                    name: name.clone(),
                    reason: "not a parameter of this model".to_string(),
                }
            })?;
            if value.shape() != self.tensors[id].shape() {
                return Err(PolicyError::ParamMismatch {
                    name: name.clone(),
                    reason: format!(
                        "shape {:?} does not match model shape {:?}",
                        value.shape(),
                        self.tensors[id].shape()
                    ),
                });
            }
            self.tensors[id] = value.cast::<E>();
        }
        Ok(())
    }
}

impl<E: Scalar> Default for ParamSet<E> {
    fn default() -> Self {
        ParamSet::new()
    }
}

/// Two distinct mutable entries of one slice (a layer's weight and bias
/// gradients are updated by a single backward call).
pub fn two_muts<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (b, a) = v.split_at_mut(i);
        (&mut a[0], &mut b[j])
    }
}
