use crate::error::PhyloError;
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

use super::pair_key;
use super::tree::{PhyloTree, TreeNode};

struct Cluster {
    node: usize,
    size: usize,
    /// Smallest leaf label, used for tie-breaking and child order.
    key: String,
}

/// Average-linkage agglomerative clustering.
///
/// Merges the closest pair of clusters (ties: lexicographically smallest pair
/// of cluster labels, a cluster being labeled by its smallest leaf label);
/// each merge creates a node at half the merge distance.
pub fn upgma<T: Scalar>(matrix: &DistanceMatrix<T>) -> Result<PhyloTree<T>, PhyloError> {
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
    let mut heights = vec![T::zero(); n];
    let mut clusters: Vec<Cluster> = matrix
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| Cluster {
            node: i,
            size: 1,
            key: l.clone(),
        })
        .collect();
    let mut dist: Vec<Vec<T>> = (0..n).map(|i| matrix.row(i).to_vec()).collect();

    while clusters.len() > 1 {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) => {
                        let (d, bd) = (dist[i][j], dist[bi][bj]);
                        let better = d < bd
                            || (d == bd
                                && pair_key(&clusters[i].key, &clusters[j].key)
                                    < pair_key(&clusters[bi].key, &clusters[bj].key));
                        if better {
                            Some((i, j))
                        } else {
                            Some((bi, bj))
                        }
                    }
                };
            }
        }
        let (i, j) = best.expect("at least two clusters");
        let merge_distance = dist[i][j];
        let height = T::half() * merge_distance;
        let new_node = nodes.len();
        let (first, second) = if clusters[i].key <= clusters[j].key {
            (i, j)
        } else {
            (j, i)
        };
        for &c in &[first, second] {
            let child = clusters[c].node;
            nodes[child].parent = Some(new_node);
            nodes[child].branch_length = (height - heights[child]).max_of(T::zero());
        }
        nodes.push(TreeNode {
            label: None,
            parent: None,
            children: vec![clusters[first].node, clusters[second].node],
            branch_length: T::zero(),
        });
        heights.push(height);

        let (si, sj) = (T::from_count(clusters[i].size), T::from_count(clusters[j].size));
        let merged_row: Vec<T> = (0..clusters.len())
            .map(|k| (si * dist[i][k] + sj * dist[j][k]) / (si + sj))
            .collect();
        let merged = Cluster {
            node: new_node,
            size: clusters[i].size + clusters[j].size,
            key: clusters[i].key.clone().min(clusters[j].key.clone()),
        };
        // replace i with the merged cluster, drop j (j > i)
        for k in 0..clusters.len() {
            dist[i][k] = merged_row[k];
            dist[k][i] = merged_row[k];
        }
        dist[i][i] = T::zero();
        clusters[i] = merged;
        clusters.remove(j);
        dist.remove(j);
        for row in &mut dist {
            row.remove(j);
        }
    }
    let root = nodes.len() - 1;
    Ok(PhyloTree::from_nodes(nodes, root, Some(heights)))
}
