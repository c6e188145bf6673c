//! Symmetric distance matrices over labeled items.

use crate::error::PhyloError;
use crate::scalar::Scalar;

/// Symmetric, non-negative, zero-diagonal matrix with item labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    labels: Vec<String>,
    values: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Validates a full square matrix.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<T>>) -> Result<Self, PhyloError> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(PhyloError::InvalidMatrix(format!("expected a {n}x{n} matrix")));
        }
        let values: Vec<T> = rows.into_iter().flatten().collect();
        let matrix = DistanceMatrix { labels, values };
        matrix.validate()?;
        Ok(matrix)
    }

    /// Builds the matrix from a function evaluated once per unordered pair `i < j`.
    pub fn from_pairs(labels: Vec<String>, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let n = labels.len();
        let mut values = vec![T::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        DistanceMatrix { labels, values }
    }

    /// Builds from the upper triangle in row-major `(0,1), (0,2), ..., (n-2,n-1)` order.
    pub fn from_upper_triangle(labels: Vec<String>, upper: &[T]) -> Self {
        let mut it = upper.iter().copied();
        Self::from_pairs(labels, |_, _| it.next().expect("upper triangle too short"))
    }

    fn validate(&self) -> Result<(), PhyloError> {
        let n = self.len();
        let mut seen = std::collections::HashSet::new();
        for label in &self.labels {
            if !seen.insert(label.as_str()) {
                return Err(PhyloError::DuplicateLabel(label.clone()));
            }
        }
        for i in 0..n {
            if self.get(i, i) != T::zero() {
                return Err(PhyloError::InvalidMatrix(format!(
                    "non-zero diagonal at {:?}",
                    self.labels[i]
                )));
            }
            for j in 0..n {
                let v = self.get(i, j);
                if !v.as_f64().is_finite() || v < T::zero() {
                    return Err(PhyloError::InvalidMatrix(format!(
                        "entry ({}, {}) is negative or not finite",
                        self.labels[i], self.labels[j]
                    )));
                }
                if v != self.get(j, i) {
                    return Err(PhyloError::InvalidMatrix(format!(
                        "asymmetric entries for ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.labels.len() + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Strict upper triangle in row-major order.
    pub fn upper_triangle(&self) -> Vec<T> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    /// The same matrix with rows and columns permuted to follow `order`.
    pub fn reordered(&self, order: &[String]) -> Result<Self, PhyloError> {
        self.check_same_labels(order)?;
        let idx: Vec<usize> = order.iter().map(|l| self.index_of(l).unwrap()).collect();
        Ok(Self::from_pairs(order.to_vec(), |i, j| self.get(idx[i], idx[j])))
    }

    /// Errors naming labels present in only one of the two label sets.
    pub fn check_same_labels(&self, other: &[String]) -> Result<(), PhyloError> {
        crate::phylo::compare_label_sets(&self.labels, other)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DistanceMatrix<U> {
        DistanceMatrix {
            labels: self.labels.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_f64(&self) -> DistanceMatrix<f64> {
        self.map(Scalar::as_f64)
    }
}
