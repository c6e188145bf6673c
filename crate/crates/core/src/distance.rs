//! Read-set distance estimators.
//!
//! The estimators form a ladder, each rung adding one refinement to the
//! symmetric Monge-Elkan distance between two read sets:
//!
//! | preset   | adds                                                       |
//! |----------|------------------------------------------------------------|
//! | `ME`     | directed Monge-Elkan: mean best-match distance             |
//! | `MES`    | average of both directions                                 |
//! | `MESS`   | scaling by the larger set cardinality                      |
//! | `MESSG`  | margin-gap Levenshtein as the read distance                |
//! | `MESSGM` | missing-read threshold: poor best matches count as `l`     |
//! | `MESSGq` | q-gram candidate filtering plus down-sampling              |
//!
//! Strand and orientation uncertainty are handled independently of the rung:
//! the second read of every pair is tried under each applicable transform.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use log::debug;
use rand::seq::index::sample;
use rayon::prelude::*;

use crate::alignment::{levenshtein_bytes, margin_gap_dp, margin_schedule, MarginGapParams};
use crate::error::DistanceError;
use crate::matrix::DistanceMatrix;
use crate::model::{Read, ReadSet, Transform};
use crate::qgram::{qgram_profile, QGramProfile, MAX_Q};
use crate::rng;
use crate::scalar::Scalar;

/// Default missing-read threshold fraction `θ'`.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.35;
/// Default down-sampling target coverage for the embedding preset.
pub const DEFAULT_SAMPLE_COVERAGE: f64 = 2.0;

/// Named rungs of the estimator ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Me,
    Mes,
    Mess,
    Messg,
    Messgm,
    Messgq,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Me,
        Preset::Mes,
        Preset::Mess,
        Preset::Messg,
        Preset::Messgm,
        Preset::Messgq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Me => "me",
            Preset::Mes => "mes",
            Preset::Mess => "mess",
            Preset::Messg => "messg",
            Preset::Messgm => "messgm",
            Preset::Messgq => "messgq",
        }
    }

    pub fn uses_margin_gaps(self) -> bool {
        matches!(self, Preset::Messg | Preset::Messgm | Preset::Messgq)
    }
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown preset {s:?}"))
    }
}

/// What a pairwise entry estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Estimator {
    /// The Monge-Elkan family configured by the remaining fields.
    #[default]
    MongeElkan,
    /// Baseline: `max(|R_A|, |R_B|)`.
    MaxCardinality,
}

/// q-gram candidate filtering for best-match search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingParams {
    pub q: usize,
    /// Candidates kept per transform variant.
    pub candidates: usize,
    /// Stop evaluating candidates once `dist_q / 6` reaches the best distance so far.
    /// Only valid with plain Levenshtein (the bound does not hold for margin gaps).
    pub exact_pruning: bool,
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        EmbeddingParams {
            q: 3,
            candidates: 5,
            exact_pruning: false,
        }
    }
}

/// Full configuration of a read-set distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig<T> {
    pub estimator: Estimator,
    pub strand_known: bool,
    pub orientation_known: bool,
    pub use_scaling: bool,
    pub margin_gaps: Option<MarginGapParams<T>>,
    /// Missing-read threshold `θ'` in `(0, 1)`; a best match at distance
    /// `>= θ'·l` is replaced by `l`.
    pub threshold_fraction: Option<T>,
    pub embedding: Option<EmbeddingParams>,
    pub sample_to_coverage: Option<f64>,
    pub rng_seed: u64,
}

impl<T: Scalar> Default for MatchConfig<T> {
    fn default() -> Self {
        MatchConfig {
            estimator: Estimator::MongeElkan,
            strand_known: true,
            orientation_known: true,
            use_scaling: false,
            margin_gaps: None,
            threshold_fraction: None,
            embedding: None,
            sample_to_coverage: None,
            rng_seed: 0,
        }
    }
}

impl<T: Scalar> MatchConfig<T> {
    /// Configuration for a ladder rung. Rungs with margin gaps need the grace size `t`.
    pub fn preset(preset: Preset, margin_t: Option<T>) -> Result<Self, DistanceError> {
        let mut cfg = MatchConfig::default();
        if matches!(preset, Preset::Me | Preset::Mes) {
            return Ok(cfg);
        }
        cfg.use_scaling = true;
        if preset.uses_margin_gaps() {
            let t = margin_t.ok_or_else(|| {
                DistanceError::InvalidConfig(format!(
                    "preset {} needs a grace margin t (or coverage and read length to derive it)",
                    preset.name()
                ))
            })?;
            cfg.margin_gaps = Some(MarginGapParams::new(t)?);
        }
        if matches!(preset, Preset::Messgm | Preset::Messgq) {
            cfg.threshold_fraction = Some(default_threshold());
        }
        if preset == Preset::Messgq {
            cfg.embedding = Some(EmbeddingParams::default());
            cfg.sample_to_coverage = Some(DEFAULT_SAMPLE_COVERAGE);
        }
        Ok(cfg)
    }

    /// Baseline estimator `max(|R_A|, |R_B|)`.
    pub fn baseline_max_cardinality() -> Self {
        MatchConfig {
            estimator: Estimator::MaxCardinality,
            ..MatchConfig::default()
        }
    }

    pub fn with_strand_known(mut self, known: bool) -> Self {
        self.strand_known = known;
        self
    }

    pub fn with_orientation_known(mut self, known: bool) -> Self {
        self.orientation_known = known;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn transforms(&self) -> &'static [Transform] {
        Transform::applicable(self.strand_known, self.orientation_known)
    }

    pub fn validate(&self) -> Result<(), DistanceError> {
        if let Some(theta) = self.threshold_fraction {
            if !(theta > T::zero() && theta < T::one()) {
                return Err(DistanceError::InvalidConfig(format!(
                    "threshold fraction must lie in (0, 1), got {theta:?}"
                )));
            }
        }
        if let Some(e) = &self.embedding {
            if !(1..=MAX_Q).contains(&e.q) {
                return Err(DistanceError::InvalidConfig(format!(
                    "q must lie in 1..={MAX_Q}, got {}",
                    e.q
                )));
            }
            if e.candidates == 0 {
                return Err(DistanceError::InvalidConfig("candidate count must be positive".into()));
            }
            if e.exact_pruning && (self.margin_gaps.is_some() || e.q != 3) {
                return Err(DistanceError::InvalidConfig(
                    "exact pruning relies on the q = 3 lower bound of plain Levenshtein; \
                     it cannot be combined with margin gaps or other q"
                        .into(),
                ));
            }
        }
        if let Some(c) = self.sample_to_coverage {
            if !(c.is_finite() && c > 0.0) {
                return Err(DistanceError::InvalidConfig(format!(
                    "sampling coverage must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }
}

fn default_threshold<T: Scalar>() -> T {
    // 0.35 = 7/20, exact for rational scalars
    T::from_count(7) / T::from_count(20)
}

/// A read set made ready for repeated distance queries: transformed copies,
/// margin schedules and (optionally) q-gram profiles are computed once.
#[derive(Debug, Clone)]
pub struct PreparedSet<T> {
    label: String,
    original_len: usize,
    /// `variants[k][i]` is read `i` under the `k`-th applicable transform.
    variants: Vec<Vec<Read>>,
    /// Profiles parallel to `variants`, present when embedding is enabled.
    profiles: Option<Vec<Vec<QGramProfile>>>,
    schedules: BTreeMap<usize, Vec<T>>,
}

impl<T: Scalar> PreparedSet<T> {
    /// Prepares `set` as is (no down-sampling).
    pub fn new(set: &ReadSet, cfg: &MatchConfig<T>) -> Result<Self, DistanceError> {
        Self::build(set, set.len(), cfg)
    }

    /// Applies the configured down-sampling first; the original cardinality is kept for scaling.
    pub fn sampled(set: &ReadSet, cfg: &MatchConfig<T>) -> Result<Self, DistanceError> {
        match cfg.sample_to_coverage {
            Some(target) => Self::build(&downsample(set, target, cfg)?, set.len(), cfg),
            None => Self::new(set, cfg),
        }
    }

    fn build(set: &ReadSet, original_len: usize, cfg: &MatchConfig<T>) -> Result<Self, DistanceError> {
        if set.is_empty() {
            return Err(DistanceError::EmptyReadSet {
                label: set.label().to_string(),
            });
        }
        let mut schedules = BTreeMap::new();
        if let Some(params) = &cfg.margin_gaps {
            for read in set.reads() {
                if let Entry::Vacant(slot) = schedules.entry(read.len()) {
                    params.validate_for(read.len())?;
                    slot.insert(margin_schedule(read.len(), params.t()));
                }
            }
        }
        let variants: Vec<Vec<Read>> = cfg
            .transforms()
            .iter()
            .map(|&tr| set.reads().iter().map(|r| r.transformed(tr)).collect())
            .collect();
        let profiles = cfg.embedding.map(|e| {
            variants
                .iter()
                .map(|reads| reads.iter().map(|r| qgram_profile(r, e.q)).collect())
                .collect()
        });
        Ok(PreparedSet {
            label: set.label().to_string(),
            original_len,
            variants,
            profiles,
            schedules,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Cardinality before any down-sampling.
    pub fn original_len(&self) -> usize {
        self.original_len
    }

    /// Reads actually used for matching (after down-sampling).
    pub fn reads(&self) -> &[Read] {
        &self.variants[0]
    }

    fn identity_profile(&self, i: usize) -> Option<&QGramProfile> {
        self.profiles.as_ref().map(|p| &p[0][i])
    }
}

/// Base read distance: margin-gap Levenshtein when configured, plain otherwise.
#[inline]
fn base_distance<T: Scalar>(
    a: &Read,
    b: &Read,
    a_side: &PreparedSet<T>,
    b_side: &PreparedSet<T>,
    cfg: &MatchConfig<T>,
) -> T {
    if cfg.margin_gaps.is_some() {
        margin_gap_dp(
            a.as_bytes(),
            &a_side.schedules[&a.len()],
            b.as_bytes(),
            &b_side.schedules[&b.len()],
        )
    } else {
        T::from_count(levenshtein_bytes(a.as_bytes(), b.as_bytes()))
    }
}

/// Minimum base distance between `a` and `b` over the applicable transforms of `b`.
pub fn variant_distance<T: Scalar>(a: &Read, b: &Read, cfg: &MatchConfig<T>) -> Result<T, DistanceError> {
    let a_set = PreparedSet::new(&ReadSet::new("a", vec![a.clone()]), &without_embedding(cfg))?;
    let b_set = PreparedSet::new(&ReadSet::new("b", vec![b.clone()]), &without_embedding(cfg))?;
    Ok(exact_best_match(a, &a_set, &b_set, cfg))
}

fn without_embedding<T: Scalar>(cfg: &MatchConfig<T>) -> MatchConfig<T> {
    MatchConfig {
        embedding: None,
        ..cfg.clone()
    }
}

fn exact_best_match<T: Scalar>(a: &Read, a_side: &PreparedSet<T>, b_side: &PreparedSet<T>, cfg: &MatchConfig<T>) -> T {
    let mut best: Option<T> = None;
    for variant in &b_side.variants {
        for b in variant {
            let d = base_distance(a, b, a_side, b_side, cfg);
            best = Some(best.map_or(d, |cur| cur.min_of(d)));
        }
    }
    best.expect("prepared sets are non-empty")
}

/// Approximate best match of `a_side.reads()[a_index]` among the q-gram candidates of `b_side`.
fn approx_best_match<T: Scalar>(
    a_index: usize,
    a_side: &PreparedSet<T>,
    b_side: &PreparedSet<T>,
    cfg: &MatchConfig<T>,
    embedding: &EmbeddingParams,
) -> T {
    let a = &a_side.reads()[a_index];
    let a_profile = a_side.identity_profile(a_index).expect("embedding profiles prepared");
    let b_profiles = b_side.profiles.as_ref().expect("embedding profiles prepared");
    let six = T::from_count(6);
    let mut best: Option<T> = None;
    for (variant, profiles) in b_side.variants.iter().zip(b_profiles) {
        let mut ranked: Vec<(u64, usize)> = profiles
            .iter()
            .enumerate()
            .map(|(i, p)| (a_profile.l1_distance(p), i))
            .collect();
        let keep = embedding.candidates.min(ranked.len());
        if keep < ranked.len() {
            ranked.select_nth_unstable(keep - 1);
            ranked.truncate(keep);
        }
        ranked.sort_unstable();
        for (qdist, i) in ranked {
            if embedding.exact_pruning {
                if let Some(cur) = best {
                    if T::from_count(qdist as usize) / six >= cur {
                        break;
                    }
                }
            }
            let d = base_distance(a, &variant[i], a_side, b_side, cfg);
            best = Some(best.map_or(d, |cur| cur.min_of(d)));
        }
    }
    best.expect("prepared sets are non-empty")
}

/// Best-match distance of a single read against a read set using q-gram candidates.
///
/// Keeps the `c` reads of `set` (per transform) closest to `a` in q-gram
/// distance, ties by read index, and returns the smallest read distance among
/// them. This is an upper bound on the exact best match.
pub fn best_match_approx<T: Scalar>(a: &Read, set: &ReadSet, cfg: &MatchConfig<T>) -> Result<T, DistanceError> {
    cfg.validate()?;
    let embedding = cfg
        .embedding
        .ok_or_else(|| DistanceError::InvalidConfig("best_match_approx needs an embedding configuration".into()))?;
    let a_side = PreparedSet::new(&ReadSet::new("query", vec![a.clone()]), cfg)?;
    let b_side = PreparedSet::new(set, cfg)?;
    Ok(approx_best_match(0, &a_side, &b_side, cfg, &embedding))
}

/// Missing-read rule: a best match at `>= θ'·l_a` counts as `l_a`.
#[inline]
fn clamp_missing<T: Scalar>(best: T, read_len: usize, cfg: &MatchConfig<T>) -> T {
    match cfg.threshold_fraction {
        Some(theta) => {
            let l = T::from_count(read_len);
            if best >= theta * l {
                l
            } else {
                best
            }
        }
        None => best,
    }
}

fn mean<T: Scalar>(values: &[T]) -> T {
    let sum = values.iter().fold(T::zero(), |acc, &v| acc + v);
    sum / T::from_count(values.len())
}

/// Per-read best-match contributions `μ(a)` for every read of `a_side`.
fn directed_contributions<T: Scalar>(a_side: &PreparedSet<T>, b_side: &PreparedSet<T>, cfg: &MatchConfig<T>) -> Vec<T> {
    a_side
        .reads()
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let best = match &cfg.embedding {
                Some(e) => approx_best_match(i, a_side, b_side, cfg, e),
                None => exact_best_match(a, a_side, b_side, cfg),
            };
            clamp_missing(best, a.len(), cfg)
        })
        .collect()
}

fn me_prepared<T: Scalar>(a_side: &PreparedSet<T>, b_side: &PreparedSet<T>, cfg: &MatchConfig<T>) -> T {
    mean(&directed_contributions(a_side, b_side, cfg))
}

fn mes_prepared<T: Scalar>(a_side: &PreparedSet<T>, b_side: &PreparedSet<T>, cfg: &MatchConfig<T>) -> T {
    let (forward, backward) = if cfg.embedding.is_some() {
        (me_prepared(a_side, b_side, cfg), me_prepared(b_side, a_side, cfg))
    } else {
        exact_both_directions(a_side, b_side, cfg)
    };
    T::half() * (forward + backward)
}

/// Both directed means from one pass over the pair table.
///
/// Every transform is an isometry of the read distance and its own inverse,
/// so `min_v d(a, v(b)) = min_v d(b, v(a))`; the column minima of the
/// forward table are the backward best matches.
fn exact_both_directions<T: Scalar>(a_side: &PreparedSet<T>, b_side: &PreparedSet<T>, cfg: &MatchConfig<T>) -> (T, T) {
    let b_reads = b_side.reads();
    let per_row: Vec<(T, Vec<T>)> = a_side
        .reads()
        .par_iter()
        .map(|a| {
            let mut column = vec![None::<T>; b_reads.len()];
            for variant in &b_side.variants {
                for (j, b) in variant.iter().enumerate() {
                    let d = base_distance(a, b, a_side, b_side, cfg);
                    column[j] = Some(column[j].map_or(d, |cur: T| cur.min_of(d)));
                }
            }
            let column: Vec<T> = column.into_iter().map(|d| d.expect("at least one transform")).collect();
            let row_best = column.iter().copied().reduce(T::min_of).expect("non-empty set");
            (clamp_missing(row_best, a.len(), cfg), column)
        })
        .collect();
    let forward: Vec<T> = per_row.iter().map(|(mu, _)| *mu).collect();
    let backward: Vec<T> = (0..b_reads.len())
        .map(|j| {
            let best = per_row
                .iter()
                .map(|(_, col)| col[j])
                .reduce(T::min_of)
                .expect("non-empty set");
            clamp_missing(best, b_reads[j].len(), cfg)
        })
        .collect();
    (mean(&forward), mean(&backward))
}

/// Directed Monge-Elkan distance: mean over reads of `R_A` of their best-match distance in `R_B`.
pub fn me_directed<T: Scalar>(ra: &ReadSet, rb: &ReadSet, cfg: &MatchConfig<T>) -> Result<T, DistanceError> {
    cfg.validate()?;
    let a_side = PreparedSet::new(ra, cfg)?;
    let b_side = PreparedSet::new(rb, cfg)?;
    Ok(me_prepared(&a_side, &b_side, cfg))
}

/// Symmetric Monge-Elkan distance: the average of both directions.
pub fn mes<T: Scalar>(ra: &ReadSet, rb: &ReadSet, cfg: &MatchConfig<T>) -> Result<T, DistanceError> {
    cfg.validate()?;
    let a_side = PreparedSet::new(ra, cfg)?;
    let b_side = PreparedSet::new(rb, cfg)?;
    Ok(mes_prepared(&a_side, &b_side, cfg))
}

fn set_distance_prepared<T: Scalar>(a_side: &PreparedSet<T>, b_side: &PreparedSet<T>, cfg: &MatchConfig<T>) -> T {
    let largest = T::from_count(a_side.original_len.max(b_side.original_len));
    match cfg.estimator {
        Estimator::MaxCardinality => largest,
        Estimator::MongeElkan => {
            let d = mes_prepared(a_side, b_side, cfg);
            if cfg.use_scaling {
                largest * d
            } else {
                d
            }
        }
    }
}

/// The configured read-set distance: optional down-sampling, symmetric
/// Monge-Elkan, then optional scaling by the larger original cardinality.
pub fn set_distance<T: Scalar>(ra: &ReadSet, rb: &ReadSet, cfg: &MatchConfig<T>) -> Result<T, DistanceError> {
    cfg.validate()?;
    let a_side = PreparedSet::sampled(ra, cfg)?;
    let b_side = PreparedSet::sampled(rb, cfg)?;
    Ok(set_distance_prepared(&a_side, &b_side, cfg))
}

/// Uniform sample without replacement down to `target_coverage`.
///
/// Keeps `round(|R| · target / α₀)` reads in their original order. The
/// stream is seeded from `cfg.rng_seed` and the set label, so the result
/// does not depend on which other sets are processed or in what order.
pub fn downsample<T: Scalar>(
    set: &ReadSet,
    target_coverage: f64,
    cfg: &MatchConfig<T>,
) -> Result<ReadSet, DistanceError> {
    let declared = set.declared_coverage.ok_or_else(|| DistanceError::MissingCoverage {
        label: set.label().to_string(),
    })?;
    if declared <= target_coverage {
        return Ok(set.clone());
    }
    let keep = ((set.len() as f64) * target_coverage / declared).round() as usize;
    let keep = keep.clamp(1, set.len());
    let mut rng = rng::for_label(cfg.rng_seed, set.label());
    let mut chosen = sample(&mut rng, set.len(), keep).into_vec();
    chosen.sort_unstable();
    let reads = chosen.into_iter().map(|i| set.reads()[i].clone()).collect();
    let mut sampled = set.with_reads(reads);
    sampled.declared_coverage = Some(target_coverage);
    Ok(sampled)
}

/// Pairwise distance matrix over read sets.
///
/// Sets are prepared (sampled, transformed, profiled) once; pairs are then
/// evaluated in parallel on the current rayon pool. Each unordered pair is
/// computed exactly once, so the result is symmetric and independent of
/// scheduling.
pub fn distance_matrix<T: Scalar>(sets: &[ReadSet], cfg: &MatchConfig<T>) -> Result<DistanceMatrix<T>, DistanceError> {
    cfg.validate()?;
    if sets.len() < 2 {
        return Err(DistanceError::TooFewSets(sets.len()));
    }
    let prepared: Vec<PreparedSet<T>> = sets
        .par_iter()
        .map(|s| {
            PreparedSet::sampled(s, cfg).map_err(|e| match e {
                DistanceError::Align(_) => DistanceError::Set {
                    label: s.label().to_string(),
                    source: Box::new(e),
                },
                other => other,
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    for p in &prepared {
        if p.reads().len() < p.original_len {
            debug!(
                "{}: down-sampled {} -> {} reads",
                p.label,
                p.original_len,
                p.reads().len()
            );
        }
    }
    let n = sets.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let upper: Vec<T> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = set_distance_prepared(&prepared[i], &prepared[j], cfg);
            debug!("{} vs {}: {:?}", prepared[i].label, prepared[j].label, d);
            d
        })
        .collect();
    let labels = sets.iter().map(|s| s.label().to_string()).collect();
    Ok(DistanceMatrix::from_upper_triangle(labels, &upper))
}
