//! Hierarchical clustering of distance matrices and clustering comparison.

mod cut;
mod metrics;
mod nj;
mod tree;
mod upgma;

pub use cut::{cut_tree, Clustering};
pub use metrics::{fowlkes_mallows, fowlkes_mallows_table, pearson};
pub use nj::neighbor_joining;
pub use tree::{PhyloTree, TreeNode};
pub use upgma::upgma;

use std::collections::BTreeSet;

use crate::error::PhyloError;

/// Clustering method for building a tree from a distance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Upgma,
    NeighborJoining,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "upgma" => Ok(Method::Upgma),
            "nj" | "neighbor-joining" => Ok(Method::NeighborJoining),
            other => Err(format!("unknown clustering method {other:?}")),
        }
    }
}

/// Errors unless both label collections hold the same set of labels.
pub fn compare_label_sets(first: &[String], second: &[String]) -> Result<(), PhyloError> {
    let a: BTreeSet<&String> = first.iter().collect();
    let b: BTreeSet<&String> = second.iter().collect();
    if a == b && a.len() == first.len() && b.len() == second.len() {
        return Ok(());
    }
    Err(PhyloError::LabelMismatch {
        only_first: a.difference(&b).map(|s| s.to_string()).collect(),
        only_second: b.difference(&a).map(|s| s.to_string()).collect(),
    })
}

/// Lexicographic tie-break key for a pair of cluster labels.
pub(crate) fn pair_key<'a>(x: &'a str, y: &'a str) -> (&'a str, &'a str) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}
