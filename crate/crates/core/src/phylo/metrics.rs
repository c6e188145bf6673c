use log::warn;

use crate::error::PhyloError;
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

use super::compare_label_sets;
use super::cut::{cut_tree, Clustering};
use super::tree::PhyloTree;

/// Fowlkes-Mallows index `B_k` of two clusterings of the same labels.
///
/// With `m` the contingency table of shared labels and `n` the label count,
/// `B_k = (Σ m_ij² - n) / sqrt((Σ_i m_i·² - n)(Σ_j m_·j² - n))`.
/// A zero denominator (all-singleton clustering) yields 0.
pub fn fowlkes_mallows(first: &Clustering, second: &Clustering) -> Result<f64, PhyloError> {
    compare_label_sets(&first.labels(), &second.labels())?;
    if first.k() != second.k() {
        return Err(PhyloError::BlockCountMismatch(first.k(), second.k()));
    }
    let n = first.labels().len() as f64;
    let mut table = vec![vec![0u64; second.k()]; first.k()];
    for (i, block) in first.blocks().iter().enumerate() {
        for label in block {
            let j = second.block_of(label).expect("label sets match");
            table[i][j] += 1;
        }
    }
    let square = |x: u64| (x * x) as f64;
    let t: f64 = table.iter().flatten().map(|&x| square(x)).sum::<f64>() - n;
    let p: f64 = table.iter().map(|row| square(row.iter().sum())).sum::<f64>() - n;
    let q: f64 = (0..second.k())
        .map(|j| square(table.iter().map(|row| row[j]).sum()))
        .sum::<f64>()
        - n;
    let denominator = (p * q).sqrt();
    if denominator == 0.0 {
        warn!("Fowlkes-Mallows index undefined for all-singleton clustering; reporting 0");
        return Ok(0.0);
    }
    Ok(t / denominator)
}

/// `B_k` for every `k = 2, ..., n - 1`, cutting both trees the same way.
pub fn fowlkes_mallows_table<T: Scalar>(
    first: &PhyloTree<T>,
    second: &PhyloTree<T>,
) -> Result<Vec<(usize, f64)>, PhyloError> {
    compare_label_sets(&first.leaf_labels(), &second.leaf_labels())?;
    let n = first.leaf_count();
    (2..n)
        .map(|k| Ok((k, fowlkes_mallows(&cut_tree(first, k)?, &cut_tree(second, k)?)?)))
        .collect()
}

/// Pearson correlation of the strict upper triangles of two matrices.
///
/// The second matrix is aligned to the first one's label order. Returns
/// `None` when either triangle has zero variance.
pub fn pearson<T: Scalar>(first: &DistanceMatrix<T>, second: &DistanceMatrix<T>) -> Result<Option<f64>, PhyloError> {
    if first.len() < 3 {
        return Err(PhyloError::TooFewItems {
            required: 3,
            actual: first.len(),
        });
    }
    let aligned = second.reordered(first.labels())?;
    let xs: Vec<f64> = first.upper_triangle().into_iter().map(Scalar::as_f64).collect();
    let ys: Vec<f64> = aligned.upper_triangle().into_iter().map(Scalar::as_f64).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)))
}
