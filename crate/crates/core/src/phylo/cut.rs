use std::collections::BTreeSet;

use crate::error::PhyloError;
use crate::scalar::Scalar;

use super::tree::PhyloTree;

/// A partition of leaf labels into blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    /// Blocks sorted internally and by their first label.
    blocks: Vec<Vec<String>>,
}

impl Clustering {
    pub fn from_blocks(blocks: Vec<Vec<String>>) -> Self {
        let mut blocks: Vec<Vec<String>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        Clustering { blocks }
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut all: Vec<String> = self.blocks.iter().flatten().cloned().collect();
        all.sort();
        all
    }

    pub fn block_of(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.iter().any(|l| l == label))
    }

    /// Every block of `self` lies within a block of `coarser`.
    pub fn refines(&self, coarser: &Clustering) -> bool {
        self.blocks.iter().all(|b| {
            let target = coarser.block_of(&b[0]);
            target.is_some() && b.iter().all(|l| coarser.block_of(l) == target)
        })
    }
}

/// Cuts a tree into `k` clusters, `2 <= k <= n - 1`.
///
/// Trees with node heights (UPGMA) lose their `k - 1` highest internal nodes.
/// Trees without heights are treated as unrooted and lose their longest
/// edges, skipping any edge whose removal would not separate more leaves;
/// ties go to the edge whose split has the lexicographically smallest label set.
pub fn cut_tree<T: Scalar>(tree: &PhyloTree<T>, k: usize) -> Result<Clustering, PhyloError> {
    let n = tree.leaf_count();
    if n < 3 || k < 2 || k > n - 1 {
        return Err(PhyloError::ClusterCountOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    let clades = tree.clades();
    let blocks = match tree.heights() {
        Some(heights) => cut_by_height(tree, heights, k, &clades),
        None => cut_by_edges(tree, k, &clades),
    };
    Ok(Clustering::from_blocks(blocks))
}

fn cut_by_height<T: Scalar>(
    tree: &PhyloTree<T>,
    heights: &[T],
    k: usize,
    clades: &[BTreeSet<String>],
) -> Vec<Vec<String>> {
    let edge_depth = tree.edge_depths();
    let mut internal: Vec<usize> = (0..tree.nodes().len()).filter(|&v| !tree.is_leaf(v)).collect();
    // highest first; among equal heights ancestors come before descendants
    internal.sort_by(|&a, &b| {
        heights[b]
            .partial_cmp(&heights[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(edge_depth[a].cmp(&edge_depth[b]))
            .then(a.cmp(&b))
    });
    let removed: BTreeSet<usize> = internal.into_iter().take(k - 1).collect();
    let mut blocks = Vec::new();
    for &v in &removed {
        for &c in &tree.node(v).children {
            if !removed.contains(&c) {
                blocks.push(clades[c].iter().cloned().collect());
            }
        }
    }
    blocks
}

struct Edge<T> {
    /// Child endpoints; two for the edge through a degree-2 root.
    children: Vec<usize>,
    length: T,
    side: Vec<String>,
}

fn cut_by_edges<T: Scalar>(tree: &PhyloTree<T>, k: usize, clades: &[BTreeSet<String>]) -> Vec<Vec<String>> {
    let root = tree.root();
    let all: BTreeSet<String> = clades[root].clone();
    let smallest = all.iter().next().cloned().unwrap_or_default();
    let canonical_side = |clade: &BTreeSet<String>| -> Vec<String> {
        if clade.contains(&smallest) {
            all.difference(clade).cloned().collect()
        } else {
            clade.iter().cloned().collect()
        }
    };
    let root_children = &tree.node(root).children;
    let mut edges: Vec<Edge<T>> = Vec::new();
    if root_children.len() == 2 {
        let (a, b) = (root_children[0], root_children[1]);
        edges.push(Edge {
            children: vec![a, b],
            length: tree.node(a).branch_length + tree.node(b).branch_length,
            side: canonical_side(&clades[a]),
        });
    }
    for (v, node) in tree.nodes().iter().enumerate() {
        let Some(parent) = node.parent else { continue };
        if parent == root && root_children.len() == 2 {
            continue;
        }
        edges.push(Edge {
            children: vec![v],
            length: node.branch_length,
            side: canonical_side(&clades[v]),
        });
    }
    edges.sort_by(|a, b| {
        b.length
            .partial_cmp(&a.length)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.side.cmp(&b.side))
    });

    let mut cut = vec![false; tree.nodes().len()];
    let mut blocks = leaf_components(tree, &cut);
    for edge in &edges {
        if blocks.len() == k {
            break;
        }
        for &c in &edge.children {
            cut[c] = true;
        }
        let candidate = leaf_components(tree, &cut);
        if candidate.len() > blocks.len() {
            blocks = candidate;
        } else {
            for &c in &edge.children {
                cut[c] = false;
            }
        }
    }
    blocks
}

/// Leaf sets of the connected components left after removing the edges above `cut` nodes.
fn leaf_components<T: Scalar>(tree: &PhyloTree<T>, cut: &[bool]) -> Vec<Vec<String>> {
    let count = tree.nodes().len();
    let mut component = vec![usize::MAX; count];
    let mut blocks: Vec<Vec<String>> = Vec::new();
    for start in 0..count {
        if component[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut leaves = Vec::new();
        let mut stack = vec![start];
        component[start] = id;
        while let Some(v) = stack.pop() {
            let node = tree.node(v);
            if node.children.is_empty() {
                leaves.push(node.label.clone().unwrap_or_default());
            }
            let mut neighbours: Vec<usize> = node.children.iter().copied().filter(|&c| !cut[c]).collect();
            if let Some(p) = node.parent {
                if !cut[v] {
                    neighbours.push(p);
                }
            }
            for w in neighbours {
                if component[w] == usize::MAX {
                    component[w] = id;
                    stack.push(w);
                }
            }
        }
        blocks.push(leaves);
    }
    blocks.into_iter().filter(|b| !b.is_empty()).collect()
}
