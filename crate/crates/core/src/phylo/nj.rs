use log::warn;

use crate::error::PhyloError;
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

use super::pair_key;
use super::tree::{PhyloTree, TreeNode};

/// Neighbor-joining tree construction.
///
/// Joins the pair minimizing `Q(i, j) = (r - 2)·d(i, j) - R_i - R_j`
/// (ties: lexicographically smallest pair of smallest-leaf labels). The last
/// two clusters are joined through a root at the midpoint of their edge.
/// Negative branch length estimates are set to zero.
pub fn neighbor_joining<T: Scalar>(matrix: &DistanceMatrix<T>) -> Result<PhyloTree<T>, PhyloError> {
    let n = matrix.len();
    if n < 2 {
        return Err(PhyloError::TooFewItems { required: 2, actual: n });
    }
    let mut nodes: Vec<TreeNode<T>> = matrix
        .labels()
        .iter()
        .map(|l| TreeNode {
            label: Some(l.clone()),
            parent: None,
            children: vec![],
            branch_length: T::zero(),
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut keys: Vec<String> = matrix.labels().to_vec();
    let mut dist: Vec<Vec<T>> = (0..n).map(|i| matrix.row(i).to_vec()).collect();
    let two = T::one() + T::one();

    let attach = |nodes: &mut Vec<TreeNode<T>>, child: usize, parent: usize, length: T| {
        let length = if length < T::zero() {
            warn!("neighbor joining: negative branch length {length:?} set to 0");
            T::zero()
        } else {
            length
        };
        nodes[child].parent = Some(parent);
        nodes[child].branch_length = length;
    };

    while active.len() > 2 {
        let r = active.len();
        let rf = T::from_count(r);
        let sums: Vec<T> = dist
            .iter()
            .map(|row| row.iter().fold(T::zero(), |a, &b| a + b))
            .collect();
        let q = |i: usize, j: usize| (rf - two) * dist[i][j] - sums[i] - sums[j];
        let mut best = (0, 1);
        let mut best_q = q(0, 1);
        for i in 0..r {
            for j in i + 1..r {
                let v = q(i, j);
                if v < best_q || (v == best_q && pair_key(&keys[i], &keys[j]) < pair_key(&keys[best.0], &keys[best.1]))
                {
                    best = (i, j);
                    best_q = v;
                }
            }
        }
        let (i, j) = best;
        let dij = dist[i][j];
        let li = T::half() * dij + (sums[i] - sums[j]) / (two * (rf - two));
        let lj = dij - li;
        let new_node = nodes.len();
        nodes.push(TreeNode {
            label: None,
            parent: None,
            children: vec![],
            branch_length: T::zero(),
        });
        let (first, second) = if keys[i] <= keys[j] { (i, j) } else { (j, i) };
        let lengths = if first == i { (li, lj) } else { (lj, li) };
        attach(&mut nodes, active[first], new_node, lengths.0);
        attach(&mut nodes, active[second], new_node, lengths.1);
        nodes[new_node].children = vec![active[first], active[second]];

        let merged_row: Vec<T> = (0..r).map(|k| T::half() * (dist[i][k] + dist[j][k] - dij)).collect();
        for k in 0..r {
            dist[i][k] = merged_row[k];
            dist[k][i] = merged_row[k];
        }
        dist[i][i] = T::zero();
        active[i] = new_node;
        keys[i] = keys[i].clone().min(keys[j].clone());
        active.remove(j);
        keys.remove(j);
        dist.remove(j);
        for row in &mut dist {
            row.remove(j);
        }
    }

    let (first, second) = if keys[0] <= keys[1] { (0, 1) } else { (1, 0) };
    let half = T::half() * dist[0][1];
    let root = nodes.len();
    nodes.push(TreeNode {
        label: None,
        parent: None,
        children: vec![active[first], active[second]],
        branch_length: T::zero(),
    });
    attach(&mut nodes, active[first], root, half);
    attach(&mut nodes, active[second], root, half);
    Ok(PhyloTree::from_nodes(nodes, root, None))
}
