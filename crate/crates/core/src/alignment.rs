//! Pairwise string distances: Levenshtein and the margin-gap variant.
//!
//! The margin-gap distance is a global alignment in which gap runs touching
//! either end of either string ("margin gaps") are charged by a piecewise
//! linear schedule instead of one unit per symbol. Short margin gaps (up to
//! the grace size `t`) are free; the schedule still sums to the string length
//! so that the distance from any word to the empty word is its length.

use log::warn;

use crate::error::AlignError;
use crate::model::Read;
use crate::scalar::Scalar;

/// Plain edit distance (unit insertions, deletions and substitutions).
///
/// Runs in `O(|a||b|)` time with a single row of `min(|a|, |b|) + 1` cells.
pub fn levenshtein(a: &Read, b: &Read) -> usize {
    levenshtein_bytes(a.as_bytes(), b.as_bytes())
}

pub fn levenshtein_bytes(a: &[u8], b: &[u8]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, &lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let up = row[j + 1];
            let sub = diag + usize::from(lc != sc);
            row[j + 1] = sub.min(up + 1).min(row[j] + 1);
            diag = up;
        }
    }
    row[short.len()]
}

/// Grace margin for margin-gap alignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginGapParams<T> {
    t: T,
}

impl<T: Scalar> MarginGapParams<T> {
    /// Wraps a grace size; `t` must be non-negative.
    pub fn new(t: T) -> Result<Self, AlignError> {
        if t < T::zero() {
            return Err(AlignError::MarginTooLarge {
                t: t.as_f64(),
                length: 0,
            });
        }
        Ok(MarginGapParams { t })
    }

    /// Grace size derived from read length and coverage, rejected unless `t < l/2`.
    pub fn for_coverage(read_length: usize, coverage: T) -> Result<Self, AlignError> {
        let params = MarginGapParams {
            t: compute_margin_t(read_length, coverage),
        };
        params.validate_for(read_length)?;
        Ok(params)
    }

    pub fn t(&self) -> T {
        self.t
    }

    /// Checks `t < l/2` for a string of length `l`. The empty string is exempt.
    pub fn validate_for(&self, length: usize) -> Result<(), AlignError> {
        if length == 0 {
            return Ok(());
        }
        let doubled = self.t + self.t;
        if doubled < T::from_count(length) && self.t >= T::zero() {
            Ok(())
        } else {
            Err(AlignError::MarginTooLarge {
                t: self.t.as_f64(),
                length,
            })
        }
    }
}

/// Grace margin size `t = (l/α - 1) / 2`, clamped at zero.
///
/// The caller must still check `t < l/2` before use (see
/// [`MarginGapParams::validate_for`]).
pub fn compute_margin_t<T: Scalar>(read_length: usize, coverage: T) -> T {
    let l = T::from_count(read_length);
    let t = T::half() * (l / coverage - T::one());
    if t < T::zero() {
        warn!(
            "grace margin formula is negative for l = {read_length}, coverage = {:?}; using t = 0",
            coverage
        );
        T::zero()
    } else {
        t
    }
}

/// Cost of the margin gap symbol at distance `x` from the string boundary.
///
/// `l` is the length of the string whose symbol is gapped. Zero for
/// `x <= t - 1`, linear up to `x <= l - t`, and 2 beyond.
///
/// # Panics
///
/// If `x >= l` or `t >= l/2`.
pub fn margin_gap_penalty<T: Scalar>(x: usize, l: usize, t: T) -> T {
    assert!(x < l, "margin position {x} outside a string of length {l}");
    let two = T::one() + T::one();
    let lf = T::from_count(l);
    assert!(
        t + t < lf && t >= T::zero(),
        "grace margin {t:?} violates 0 <= t < l/2 for l = {l}"
    );
    let xf = T::from_count(x);
    if xf + T::one() <= t {
        T::zero()
    } else if xf + t <= lf {
        two * (xf - t + T::one()) / (lf + T::one() - two * t)
    } else {
        two
    }
}

/// Penalties `g(0), g(1), ..., g(l - 1)` for one string.
pub fn margin_schedule<T: Scalar>(l: usize, t: T) -> Vec<T> {
    (0..l).map(|x| margin_gap_penalty(x, l, t)).collect()
}

/// Global alignment cost with discounted margin gaps.
///
/// Interior gaps, substitutions and matches cost 1, 1 and 0. A leading gap
/// consuming the first `m` symbols of a string of length `l_s` costs
/// `g(0) + ... + g(m-1)`; a trailing gap is charged symmetrically, counting
/// from the string's end. Each string uses its own length in `g`.
pub fn margin_gap_levenshtein<T: Scalar>(a: &Read, b: &Read, params: &MarginGapParams<T>) -> Result<T, AlignError> {
    params.validate_for(a.len())?;
    params.validate_for(b.len())?;
    let schedule_a = margin_schedule(a.len(), params.t);
    let schedule_b = margin_schedule(b.len(), params.t);
    Ok(margin_gap_dp(a.as_bytes(), &schedule_a, b.as_bytes(), &schedule_b))
}

/// Margin-gap DP with caller-supplied schedules (`schedule_x[i] = g(i; |x|, t)`).
pub(crate) fn margin_gap_dp<T: Scalar>(a: &[u8], schedule_a: &[T], b: &[u8], schedule_b: &[T]) -> T {
    debug_assert_eq!(a.len(), schedule_a.len());
    debug_assert_eq!(b.len(), schedule_b.len());
    if a.is_empty() {
        return T::from_count(b.len());
    }
    if b.is_empty() {
        return T::from_count(a.len());
    }
    // Rows walk the longer string so the row buffer is min(|a|, |b|) + 1 long.
    let (rows, g_rows, cols, g_cols) = if a.len() >= b.len() {
        (a, schedule_a, b, schedule_b)
    } else {
        (b, schedule_b, a, schedule_a)
    };
    let n = rows.len();
    let m = cols.len();
    let one = T::one();

    let mut row = Vec::with_capacity(m + 1);
    let mut acc = T::zero();
    row.push(acc);
    for &g in g_cols {
        acc = acc + g;
        row.push(acc);
    }

    for i in 1..=n {
        let rc = rows[i - 1];
        let mut diag = row[0];
        row[0] = row[0] + g_rows[i - 1];
        if i < n {
            for j in 1..m {
                let up = row[j];
                let sub = if rc == cols[j - 1] { diag } else { diag + one };
                row[j] = sub.min_of(up + one).min_of(row[j - 1] + one);
                diag = up;
            }
        } else {
            // last row: `rows` is used up, so consuming cols[j-1] is a trailing margin gap
            for j in 1..m {
                let up = row[j];
                let sub = if rc == cols[j - 1] { diag } else { diag + one };
                row[j] = sub.min_of(up + one).min_of(row[j - 1] + g_cols[m - j]);
                diag = up;
            }
        }
        // last column: consuming rows[i-1] is a trailing margin gap of `rows`
        let up = row[m];
        let sub = if rc == cols[m - 1] { diag } else { diag + one };
        let left_cost = if i == n { g_cols[0] } else { one };
        row[m] = sub.min_of(up + g_rows[n - i]).min_of(row[m - 1] + left_cost);
    }
    row[m]
}
