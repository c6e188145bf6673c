//! Read sampling and mutated sequence families.
//!
//! Reads are drawn i.i.d. with replacement, uniformly over all start
//! positions of the source. Families of related sequences are evolved along
//! a rooted tree with a per-site substitution/insertion/deletion model and
//! come with their exact pairwise Levenshtein matrix as ground truth.

use rand::Rng as _;
use rayon::prelude::*;

use crate::alignment::levenshtein_bytes;
use crate::error::SimulationError;
use crate::matrix::DistanceMatrix;
use crate::model::{ReadSet, SequenceRecord, ALPHABET};
use crate::rng::{self, Rng};

/// Sequencing model for [`sample_reads`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationParams {
    /// Coverage `α`: expected number of reads over any position.
    pub alpha: f64,
    pub read_length: usize,
    /// Complement each read with probability 1/2.
    pub strand_noise: bool,
    /// Reverse each read with probability 1/2.
    pub orientation_noise: bool,
    pub rng_seed: u64,
}

/// Number of reads for a sequence: `floor(α·|A|/l)`.
pub fn read_count(alpha: f64, sequence_length: usize, read_length: usize) -> usize {
    (alpha * sequence_length as f64 / read_length as f64).floor() as usize
}

/// Uniform start positions in `0..=len - read_length`, drawn with replacement.
pub fn sample_positions(rng: &mut Rng, len: usize, read_length: usize, count: usize) -> Vec<usize> {
    let last = len - read_length;
    (0..count).map(|_| rng.gen_range(0..=last)).collect()
}

/// Samples a read set from `source`.
pub fn sample_reads(source: &SequenceRecord, params: &SimulationParams) -> Result<ReadSet, SimulationError> {
    let l = params.read_length;
    if l == 0 || !(params.alpha.is_finite() && params.alpha > 0.0) {
        return Err(SimulationError::InvalidParams(format!(
            "coverage must be positive and read length at least 1 (alpha = {}, l = {l})",
            params.alpha
        )));
    }
    if source.len() < l {
        return Err(SimulationError::SequenceTooShort {
            id: source.identifier.clone(),
            length: source.len(),
            read_length: l,
        });
    }
    let count = read_count(params.alpha, source.len(), l);
    if count == 0 {
        return Err(SimulationError::CoverageTooLow {
            id: source.identifier.clone(),
            alpha: params.alpha,
            length: source.len(),
            read_length: l,
        });
    }
    let mut rng = rng::seeded(params.rng_seed);
    let starts = sample_positions(&mut rng, source.len(), l, count);
    let reads = starts
        .into_iter()
        .map(|start| {
            let mut read = source.slice_read(start, l);
            if params.strand_noise && rng.gen::<bool>() {
                read = read.complement();
            }
            if params.orientation_noise && rng.gen::<bool>() {
                read = read.reverse();
            }
            read
        })
        .collect();
    Ok(ReadSet::new(source.identifier.clone(), reads)
        .with_coverage(params.alpha)
        .with_read_length(l))
}

/// Per-site mutation model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationParams {
    pub substitution_rate: f64,
    pub insertion_rate: f64,
    pub deletion_rate: f64,
    pub rng_seed: u64,
}

impl MutationParams {
    pub fn new(substitution_rate: f64, insertion_rate: f64, deletion_rate: f64) -> Self {
        MutationParams {
            substitution_rate,
            insertion_rate,
            deletion_rate,
            rng_seed: 0,
        }
    }

    /// Total divergence `rate`, split 80/10/10 between substitutions, insertions and deletions.
    pub fn divergence(rate: f64) -> Self {
        Self::new(0.8 * rate, 0.1 * rate, 0.1 * rate)
    }

    pub fn none() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        let rates = [self.substitution_rate, self.insertion_rate, self.deletion_rate];
        if rates.iter().any(|r| !(0.0..1.0).contains(r)) || rates.iter().sum::<f64>() >= 1.0 {
            return Err(SimulationError::InvalidParams(format!(
                "mutation rates must lie in [0, 1) and sum below 1, got {rates:?}"
            )));
        }
        Ok(())
    }
}

fn random_symbol(rng: &mut Rng) -> u8 {
    ALPHABET[rng.gen_range(0..4)]
}

/// Applies independent per-site edits to `source`.
///
/// At each position, with the configured probabilities: substitute a
/// uniformly chosen different symbol, delete the symbol, or insert a random
/// symbol before it.
pub fn mutate(source: &SequenceRecord, params: &MutationParams) -> Result<SequenceRecord, SimulationError> {
    params.validate()?;
    let mut rng = rng::seeded(params.rng_seed);
    let sub = params.substitution_rate;
    let del = sub + params.deletion_rate;
    let ins = del + params.insertion_rate;
    let mut out = Vec::with_capacity(source.len() + source.len() / 8);
    for &symbol in source.sequence() {
        let u: f64 = rng.gen();
        if u < sub {
            let shift = rng.gen_range(1..4);
            let index = ALPHABET.iter().position(|&s| s == symbol).expect("valid symbol");
            out.push(ALPHABET[(index + shift) % 4]);
        } else if u < del {
            // dropped
        } else if u < ins {
            out.push(random_symbol(&mut rng));
            out.push(symbol);
        } else {
            out.push(symbol);
        }
    }
    Ok(SequenceRecord::from_valid(source.identifier.clone(), out))
}

/// Uniformly random sequence over `{A, C, G, T}`.
pub fn random_sequence(identifier: impl Into<String>, length: usize, seed: u64) -> SequenceRecord {
    let mut rng = rng::seeded(seed);
    SequenceRecord::from_valid(identifier, (0..length).map(|_| random_symbol(&mut rng)).collect())
}

/// A node of a family tree; the sequence on the node is its parent's, mutated along the edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyNode {
    pub name: String,
    /// Index of the parent node; `None` means the edge starts at the ancestor.
    pub parent: Option<usize>,
    pub edge: MutationParams,
}

/// Rooted branching description. Every node is emitted as a family member;
/// the ancestor itself is not.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FamilyTree {
    pub nodes: Vec<FamilyNode>,
}

impl FamilyTree {
    pub fn add(&mut self, name: impl Into<String>, parent: Option<usize>, edge: MutationParams) -> usize {
        if let Some(p) = parent {
            assert!(p < self.nodes.len(), "parent must be added before its children");
        }
        self.nodes.push(FamilyNode {
            name: name.into(),
            parent,
            edge,
        });
        self.nodes.len() - 1
    }

    /// Leaves hanging directly off the ancestor, one per divergence rate.
    pub fn star(rates: &[f64]) -> Self {
        let mut tree = FamilyTree::default();
        for (i, &rate) in rates.iter().enumerate() {
            tree.add(format!("star{}", i + 1), None, MutationParams::divergence(rate));
        }
        tree
    }

    /// Star leaves plus a chain in which each member descends from the previous one.
    pub fn star_plus_chain(star_rates: &[f64], chain_rates: &[f64]) -> Self {
        let mut tree = Self::star(star_rates);
        let mut parent = None;
        for (i, &rate) in chain_rates.iter().enumerate() {
            parent = Some(tree.add(format!("chain{}", i + 1), parent, MutationParams::divergence(rate)));
        }
        tree
    }
}

/// Evolved sequences plus their exact pairwise Levenshtein matrix.
#[derive(Debug, Clone)]
pub struct Family {
    pub sequences: Vec<SequenceRecord>,
    pub reference: DistanceMatrix<f64>,
}

/// Evolves a random ancestor of length `ancestor_length` along `tree`.
pub fn make_family(ancestor_length: usize, tree: &FamilyTree, rng_seed: u64) -> Result<Family, SimulationError> {
    let ancestor = random_sequence("ancestor", ancestor_length, rng::derive_seed(rng_seed, "ancestor"));
    let mut sequences: Vec<SequenceRecord> = Vec::with_capacity(tree.nodes.len());
    for node in &tree.nodes {
        let parent = match node.parent {
            Some(p) if p < sequences.len() => &sequences[p],
            Some(p) => {
                return Err(SimulationError::InvalidParams(format!(
                    "node {:?} refers to parent {p} that is not defined before it",
                    node.name
                )))
            }
            None => &ancestor,
        };
        let edge = node
            .edge
            .with_seed(rng::derive_seed(rng_seed ^ node.edge.rng_seed, &node.name));
        let mut child = mutate(parent, &edge)?;
        child.identifier = node.name.clone();
        sequences.push(child);
    }
    let reference = reference_matrix(&sequences);
    Ok(Family { sequences, reference })
}

/// Exact pairwise Levenshtein distances between full sequences.
pub fn reference_matrix(sequences: &[SequenceRecord]) -> DistanceMatrix<f64> {
    let n = sequences.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let upper: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| levenshtein_bytes(sequences[i].sequence(), sequences[j].sequence()) as f64)
        .collect();
    let labels = sequences.iter().map(|s| s.identifier.clone()).collect();
    DistanceMatrix::from_upper_triangle(labels, &upper)
}
