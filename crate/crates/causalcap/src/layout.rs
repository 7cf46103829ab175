//! Ordered collections of labeled finite-dimensional subsystems.

use crate::error::OpError;
use serde::{Deserialize, Serialize};

/// An ordered list of labeled subsystems. Operator indices are mixed-radix,
/// big-endian in declared order: the first label is the most significant
/// digit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemLayout {
    systems: Vec<(String, usize)>,
}

impl SystemLayout {
    pub fn new<L: Into<String>>(systems: Vec<(L, usize)>) -> Result<Self, OpError> {
        let systems: Vec<(String, usize)> = systems
            .into_iter()
            .map(|(l, d)| (l.into(), d))
            .collect();
        for (i, (label, dim)) in systems.iter().enumerate() {
            if *dim == 0 {
                return Err(OpError::ZeroDim(label.clone()));
            }
            if systems[..i].iter().any(|(l, _)| l == label) {
                return Err(OpError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { systems })
    }

    /// The empty layout: a single one-dimensional (scalar) space.
    pub fn scalar() -> Self {
        Self { systems: vec![] }
    }

    pub fn systems(&self) -> &[(String, usize)] {
        &self.systems
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.systems.iter().map(|(l, _)| l.as_str())
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.systems.iter().map(|(_, d)| d).product()
    }

    pub fn position(&self, label: &str) -> Result<usize, OpError> {
        self.systems
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| OpError::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize, OpError> {
        self.position(label).map(|p| self.systems[p].1)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.systems.iter().any(|(l, _)| l == label)
    }

    /// Concatenation; labels must stay unique.
    pub fn concat(&self, other: &SystemLayout) -> Result<SystemLayout, OpError> {
        let mut systems = self.systems.clone();
        for (l, d) in &other.systems {
            if self.contains(l) {
                return Err(OpError::DuplicateLabel(l.clone()));
            }
            systems.push((l.clone(), *d));
        }
        Ok(SystemLayout { systems })
    }

    /// Strides for the mixed-radix index convention.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.systems.len()];
        for i in (0..self.systems.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.systems[i + 1].1;
        }
        strides
    }

    /// Decompose a flat index into per-system digits.
    pub fn decompose(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.systems.len()];
        for i in (0..self.systems.len()).rev() {
            let d = self.systems[i].1;
            digits[i] = index % d;
            index /= d;
        }
        digits
    }

    pub fn compose(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.systems.len());
        let mut index = 0usize;
        for (i, &digit) in digits.iter().enumerate() {
            index = index * self.systems[i].1 + digit;
        }
        index
    }

    /// Positions of the given labels within this layout.
    pub fn positions(&self, labels: &[&str]) -> Result<Vec<usize>, OpError> {
        labels.iter().map(|l| self.position(l)).collect()
    }

    /// Sub-layout restricted to positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> SystemLayout {
        SystemLayout {
            systems: positions.iter().map(|&p| self.systems[p].clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_label_rejected() {
        let err = SystemLayout::new(vec![("X", 2), ("X", 3)]).unwrap_err();
        assert!(matches!(err, OpError::DuplicateLabel(l) if l == "X"));
    }

    #[test]
    fn big_endian_indexing() {
        let layout = SystemLayout::new(vec![("X", 2), ("Y", 3)]).unwrap();
        assert_eq!(layout.total_dim(), 6);
        assert_eq!(layout.strides(), vec![3, 1]);
        assert_eq!(layout.decompose(5), vec![1, 2]);
        assert_eq!(layout.compose(&[1, 2]), 5);
    }

    #[test]
    fn scalar_layout() {
        let layout = SystemLayout::scalar();
        assert_eq!(layout.total_dim(), 1);
        assert_eq!(layout.compose(&[]), 0);
    }
}
