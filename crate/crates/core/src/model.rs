//! Alphabet, reads, read sets and sequence records.

use std::fmt;

use crate::error::ModelError;

/// The four nucleotide symbols, in profile index order.
pub const ALPHABET: [u8; 4] = *b"ACGT";

/// Index of a nucleotide in [`ALPHABET`]; `None` for anything else.
#[inline]
pub fn symbol_index(symbol: u8) -> Option<usize> {
    match symbol {
        b'A' => Some(0),
        b'C' => Some(1),
        b'G' => Some(2),
        b'T' => Some(3),
        _ => None,
    }
}

#[inline]
fn complement_symbol(symbol: u8) -> u8 {
    match symbol {
        b'A' => b'T',
        b'T' => b'A',
        b'C' => b'G',
        b'G' => b'C',
        other => other,
    }
}

/// How symbols outside `{A, C, G, T}` are treated at ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InvalidSymbolPolicy {
    /// Reject the offending read or sequence.
    #[default]
    Reject,
    /// Replace `N` by `A`; any other foreign symbol is still rejected.
    ReplaceNWithA,
}

/// Validates and upper-cases raw bytes into a nucleotide string.
pub fn normalize_symbols(raw: &[u8], policy: InvalidSymbolPolicy) -> Result<Vec<u8>, ModelError> {
    raw.iter()
        .enumerate()
        .map(|(position, &byte)| {
            let upper = byte.to_ascii_uppercase();
            match upper {
                b'A' | b'C' | b'G' | b'T' => Ok(upper),
                b'N' if policy == InvalidSymbolPolicy::ReplaceNWithA => Ok(b'A'),
                _ => Err(ModelError::InvalidSymbol {
                    symbol: byte as char,
                    position,
                }),
            }
        })
        .collect()
}

/// A DNA string over `{A, C, G, T}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Read(Vec<u8>);

impl Read {
    /// Builds a read from raw bytes, normalizing case and rejecting foreign symbols.
    pub fn new(raw: impl AsRef<[u8]>) -> Result<Self, ModelError> {
        Self::with_policy(raw, InvalidSymbolPolicy::Reject)
    }

    pub fn with_policy(raw: impl AsRef<[u8]>, policy: InvalidSymbolPolicy) -> Result<Self, ModelError> {
        normalize_symbols(raw.as_ref(), policy).map(Read)
    }

    /// The empty word.
    pub fn empty() -> Self {
        Read(Vec::new())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Interchanges A with T and C with G.
    pub fn complement(&self) -> Read {
        Read(self.0.iter().map(|&s| complement_symbol(s)).collect())
    }

    pub fn reverse(&self) -> Read {
        Read(self.0.iter().rev().copied().collect())
    }

    pub fn reverse_complement(&self) -> Read {
        Read(self.0.iter().rev().map(|&s| complement_symbol(s)).collect())
    }

    /// Applies one of the strand/orientation transforms.
    pub fn transformed(&self, transform: Transform) -> Read {
        match transform {
            Transform::Identity => self.clone(),
            Transform::Complement => self.complement(),
            Transform::Reverse => self.reverse(),
            Transform::ReverseComplement => self.reverse_complement(),
        }
    }

    pub(crate) fn from_valid(bytes: Vec<u8>) -> Self {
        debug_assert!(bytes.iter().all(|&b| symbol_index(b).is_some()));
        Read(bytes)
    }
}

impl fmt::Debug for Read {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Read({})", self)
    }
}

impl fmt::Display for Read {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Reads only ever hold ASCII nucleotides.
        f.write_str(std::str::from_utf8(&self.0).unwrap_or("?"))
    }
}

impl std::str::FromStr for Read {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Read::new(s)
    }
}

pub fn complement(read: &Read) -> Read {
    read.complement()
}

pub fn reverse(read: &Read) -> Read {
    read.reverse()
}

pub fn reverse_complement(read: &Read) -> Read {
    read.reverse_complement()
}

/// A strand/orientation transform applied to the second read of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transform {
    Identity,
    Complement,
    Reverse,
    ReverseComplement,
}

impl Transform {
    /// Transforms that must be tried when strand and/or orientation are unknown.
    pub fn applicable(strand_known: bool, orientation_known: bool) -> &'static [Transform] {
        use Transform::*;
        match (strand_known, orientation_known) {
            (true, true) => &[Identity],
            (false, true) => &[Identity, Complement],
            (true, false) => &[Identity, Reverse],
            (false, false) => &[Identity, Complement, Reverse, ReverseComplement],
        }
    }
}

/// A multiset of reads sampled from one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadSet {
    label: String,
    reads: Vec<Read>,
    /// Coverage `α` the set was sequenced (or simulated) at, when known.
    pub declared_coverage: Option<f64>,
    /// Nominal read length `l`, when known.
    pub declared_read_length: Option<usize>,
}

impl ReadSet {
    pub fn new(label: impl Into<String>, reads: Vec<Read>) -> Self {
        ReadSet {
            label: label.into(),
            reads,
            declared_coverage: None,
            declared_read_length: None,
        }
    }

    /// Convenience constructor from string literals; panics on invalid symbols.
    pub fn from_strs(label: impl Into<String>, reads: &[&str]) -> Self {
        let reads = reads
            .iter()
            .map(|r| Read::new(r).expect("invalid read literal"))
            .collect();
        ReadSet::new(label, reads)
    }

    pub fn with_coverage(mut self, coverage: f64) -> Self {
        self.declared_coverage = Some(coverage);
        self
    }

    pub fn with_read_length(mut self, read_length: usize) -> Self {
        self.declared_read_length = Some(read_length);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn reads(&self) -> &[Read] {
        &self.reads
    }

    /// Cardinality of the multiset, duplicates included.
    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// Multiset union; declared metadata is taken from `self`.
    pub fn union(&self, other: &ReadSet) -> ReadSet {
        let mut reads = self.reads.clone();
        reads.extend(other.reads.iter().cloned());
        ReadSet {
            label: self.label.clone(),
            reads,
            declared_coverage: self.declared_coverage,
            declared_read_length: self.declared_read_length,
        }
    }

    /// Multiset equality: same reads with the same multiplicities, any order.
    pub fn multiset_eq(&self, other: &ReadSet) -> bool {
        let mut a: Vec<&Read> = self.reads.iter().collect();
        let mut b: Vec<&Read> = other.reads.iter().collect();
        a.sort();
        b.sort();
        a == b
    }

    /// Median read length, used when no read length was declared.
    pub fn median_read_length(&self) -> Option<usize> {
        if self.reads.is_empty() {
            return None;
        }
        let mut lengths: Vec<usize> = self.reads.iter().map(Read::len).collect();
        lengths.sort_unstable();
        Some(lengths[lengths.len() / 2])
    }

    pub(crate) fn with_reads(&self, reads: Vec<Read>) -> ReadSet {
        ReadSet {
            label: self.label.clone(),
            reads,
            declared_coverage: self.declared_coverage,
            declared_read_length: self.declared_read_length,
        }
    }
}

/// A named source sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRecord {
    pub identifier: String,
    sequence: Vec<u8>,
}

impl SequenceRecord {
    pub fn new(identifier: impl Into<String>, sequence: impl AsRef<[u8]>) -> Result<Self, ModelError> {
        Self::with_policy(identifier, sequence, InvalidSymbolPolicy::Reject)
    }

    pub fn with_policy(
        identifier: impl Into<String>,
        sequence: impl AsRef<[u8]>,
        policy: InvalidSymbolPolicy,
    ) -> Result<Self, ModelError> {
        Ok(SequenceRecord {
            identifier: identifier.into(),
            sequence: normalize_symbols(sequence.as_ref(), policy)?,
        })
    }

    pub(crate) fn from_valid(identifier: impl Into<String>, sequence: Vec<u8>) -> Self {
        SequenceRecord {
            identifier: identifier.into(),
            sequence,
        }
    }

    pub fn sequence(&self) -> &[u8] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// The whole sequence viewed as a single (long) read.
    pub fn as_read(&self) -> Read {
        Read::from_valid(self.sequence.clone())
    }

    /// Substring `[start, start + len)` as a read.
    pub fn slice_read(&self, start: usize, len: usize) -> Read {
        Read::from_valid(self.sequence[start..start + len].to_vec())
    }
}
