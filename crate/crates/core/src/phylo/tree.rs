use std::collections::{BTreeMap, BTreeSet};

use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

/// A tree node; leaves carry labels, internal nodes carry children.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode<T> {
    pub label: Option<String>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Length of the edge to the parent (zero at the root).
    pub branch_length: T,
}

/// Rooted tree with branch lengths.
///
/// UPGMA trees also carry node heights (distance from any descendant leaf);
/// trees without heights are cut by edge length instead.
#[derive(Debug, Clone, PartialEq)]
pub struct PhyloTree<T> {
    nodes: Vec<TreeNode<T>>,
    root: usize,
    heights: Option<Vec<T>>,
}

impl<T: Scalar> PhyloTree<T> {
    pub fn from_nodes(nodes: Vec<TreeNode<T>>, root: usize, heights: Option<Vec<T>>) -> Self {
        debug_assert!(nodes[root].parent.is_none());
        PhyloTree { nodes, root, heights }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[TreeNode<T>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode<T> {
        &self.nodes[i]
    }

    pub fn heights(&self) -> Option<&[T]> {
        self.heights.as_deref()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.nodes[i].children.is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    /// Leaf labels in node order.
    pub fn leaf_labels(&self) -> Vec<String> {
        self.leaves()
            .into_iter()
            .map(|i| self.nodes[i].label.clone().unwrap_or_default())
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Nodes in preorder from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        order
    }

    /// Sum of branch lengths from the root to every node.
    pub fn depths(&self) -> Vec<T> {
        let mut depth = vec![T::zero(); self.nodes.len()];
        for v in self.preorder() {
            if let Some(p) = self.nodes[v].parent {
                depth[v] = depth[p] + self.nodes[v].branch_length;
            }
        }
        depth
    }

    /// Number of edges from the root to every node.
    pub fn edge_depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.nodes.len()];
        for v in self.preorder() {
            if let Some(p) = self.nodes[v].parent {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Leaf labels below every node.
    pub fn clades(&self) -> Vec<BTreeSet<String>> {
        let mut clades = vec![BTreeSet::new(); self.nodes.len()];
        for v in self.preorder().into_iter().rev() {
            if self.is_leaf(v) {
                clades[v].insert(self.nodes[v].label.clone().unwrap_or_default());
            } else {
                let mut set = BTreeSet::new();
                for &c in &self.nodes[v].children {
                    set.extend(clades[c].iter().cloned());
                }
                clades[v] = set;
            }
        }
        clades
    }

    fn lca(&self, mut a: usize, mut b: usize, edge_depth: &[usize]) -> usize {
        while edge_depth[a] > edge_depth[b] {
            a = self.nodes[a].parent.unwrap();
        }
        while edge_depth[b] > edge_depth[a] {
            b = self.nodes[b].parent.unwrap();
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// Path-length distances between leaves, in the given label order.
    pub fn path_distances(&self, labels: &[String]) -> DistanceMatrix<T> {
        let by_label: BTreeMap<&str, usize> = self
            .leaves()
            .into_iter()
            .map(|i| (self.nodes[i].label.as_deref().unwrap_or(""), i))
            .collect();
        let depth = self.depths();
        let edge_depth = self.edge_depths();
        let idx: Vec<usize> = labels.iter().map(|l| by_label[l.as_str()]).collect();
        DistanceMatrix::from_pairs(labels.to_vec(), |i, j| {
            let (a, b) = (idx[i], idx[j]);
            let c = self.lca(a, b, &edge_depth);
            depth[a] + depth[b] - depth[c] - depth[c]
        })
    }

    /// Whether all leaves are equidistant from the root within `tolerance`.
    pub fn is_ultrametric(&self, tolerance: f64) -> bool {
        let depth = self.depths();
        let leaf_depths: Vec<f64> = self.leaves().iter().map(|&i| depth[i].as_f64()).collect();
        let max = leaf_depths.iter().cloned().fold(f64::MIN, f64::max);
        let min = leaf_depths.iter().cloned().fold(f64::MAX, f64::min);
        max - min <= tolerance
    }

    /// Heights implied by root depths: the deepest leaf sits at height zero.
    pub fn heights_from_depths(&self) -> Vec<T> {
        let depth = self.depths();
        let total = self
            .leaves()
            .iter()
            .map(|&i| depth[i])
            .reduce(T::max_of)
            .unwrap_or_else(T::zero);
        depth.into_iter().map(|d| (total - d).max_of(T::zero())).collect()
    }

    pub fn with_heights(mut self, heights: Option<Vec<T>>) -> Self {
        self.heights = heights;
        self
    }

    /// Non-trivial leaf bipartitions, each given by the side without the smallest label.
    pub fn splits(&self) -> BTreeSet<BTreeSet<String>> {
        let all: BTreeSet<String> = self.leaf_labels().into_iter().collect();
        let smallest = all.iter().next().cloned().unwrap_or_default();
        let mut out = BTreeSet::new();
        for (v, clade) in self.clades().into_iter().enumerate() {
            if v == self.root {
                continue;
            }
            let side: BTreeSet<String> = if clade.contains(&smallest) {
                all.difference(&clade).cloned().collect()
            } else {
                clade
            };
            if side.len() >= 2 && side.len() + 2 <= all.len() {
                out.insert(side);
            }
        }
        out
    }

    /// Topology string with children ordered by their smallest leaf label; lengths omitted.
    pub fn canonical_topology(&self) -> String {
        let clades = self.clades();
        fn render<T: Scalar>(t: &PhyloTree<T>, v: usize, clades: &[BTreeSet<String>]) -> String {
            let node = t.node(v);
            if node.children.is_empty() {
                return node.label.clone().unwrap_or_default();
            }
            let mut kids: Vec<usize> = node.children.clone();
            kids.sort_by(|&a, &b| clades[a].iter().next().cmp(&clades[b].iter().next()));
            let inner: Vec<String> = kids.iter().map(|&c| render(t, c, clades)).collect();
            format!("({})", inner.join(","))
        }
        render(self, self.root, &clades)
    }

    /// Structural equality with branch lengths compared within `tolerance`.
    pub fn approx_eq(&self, other: &PhyloTree<T>, tolerance: f64) -> bool {
        fn same<T: Scalar>(a: &PhyloTree<T>, va: usize, b: &PhyloTree<T>, vb: usize, tol: f64) -> bool {
            let (na, nb) = (a.node(va), b.node(vb));
            na.label == nb.label
                && na.children.len() == nb.children.len()
                && (na.branch_length.as_f64() - nb.branch_length.as_f64()).abs() <= tol
                && na
                    .children
                    .iter()
                    .zip(&nb.children)
                    .all(|(&ca, &cb)| same(a, ca, b, cb, tol))
        }
        same(self, self.root, other, other.root, tolerance)
    }
}
