//! Assembly-free estimates of the Levenshtein distance between DNA sequences,
//! computed directly from their read sets, plus the clustering pipeline used
//! to evaluate them.
//!
//! Distance types are generic over a [`Scalar`]: use `f64` for production
//! runs and [`Exact`] (a 64-bit rational) when identities must hold exactly.
//! The aliases at the crate root fix the scalar to one of the two.
//!
//! ```
//! use readset_dist::{mes, MatchConfigF64, ReadSet};
//!
//! let a = ReadSet::from_strs("A", &["ATC", "ATC", "GGG"]);
//! let b = ReadSet::from_strs("B", &["ATA", "GGG"]);
//! let d = mes(&a, &b, &MatchConfigF64::default()).unwrap();
//! assert!((d - 7.0 / 12.0).abs() < 1e-12);
//! ```

pub mod alignment;
pub mod distance;
pub mod error;
pub mod formats;
pub mod matrix;
pub mod model;
pub mod phylo;
pub mod qgram;
pub mod rng;
pub mod scalar;
pub mod simulator;

pub use alignment::{compute_margin_t, levenshtein, margin_gap_levenshtein, margin_gap_penalty, MarginGapParams};
pub use distance::{
    best_match_approx, distance_matrix, downsample, me_directed, mes, set_distance, variant_distance, EmbeddingParams,
    Estimator, MatchConfig, PreparedSet, Preset,
};
pub use error::{AlignError, DistanceError, FormatError, ModelError, PhyloError, SimulationError};
pub use matrix::DistanceMatrix;
pub use model::{
    complement, reverse, reverse_complement, InvalidSymbolPolicy, Read, ReadSet, SequenceRecord, Transform,
};
pub use phylo::{cut_tree, fowlkes_mallows, neighbor_joining, pearson, upgma, Clustering, Method, PhyloTree};
pub use qgram::{qgram_distance, qgram_profile, QGramProfile};
pub use scalar::Scalar;
pub use simulator::{make_family, mutate, sample_reads, FamilyTree, MutationParams, SimulationParams};

/// Exact rational scalar.
pub type Exact = num_rational::Rational64;

pub type MatchConfigF64 = MatchConfig<f64>;
pub type MatchConfigExact = MatchConfig<Exact>;
pub type DistanceMatrixF64 = DistanceMatrix<f64>;
pub type DistanceMatrixExact = DistanceMatrix<Exact>;
pub type MarginGapParamsF64 = MarginGapParams<f64>;
pub type PhyloTreeF64 = PhyloTree<f64>;
