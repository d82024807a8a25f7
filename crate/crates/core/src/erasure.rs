//! Erasure correctability via rank conditions, erasure decoding by linear
//! solve, the column/row rank duality, exact pattern enumeration oracles,
//! and seeded Monte-Carlo estimation of erasure-correction probability.

use itertools::Itertools;
use rayon::prelude::*;

use crate::channel::{sample_pattern, sample_points_iid, trial_rng, CorruptionModel, Pattern};
use crate::gf2::{BitMatrix, BitVector};
use crate::rm::{binom, binom_sum, eval_matrix, eval_vector, RmCode};

/// A received word with some coordinates lost: `known` masks the surviving
/// positions and `values` carries their bits (zero elsewhere).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasedWord {
    known: BitVector,
    values: BitVector,
}

impl ErasedWord {
    /// # Panics
    ///
    /// Panics if the masks differ in length or `values` is set outside
    /// `known`.
    pub fn new(known: BitVector, values: BitVector) -> Self {
        assert_eq!(known.len(), values.len(), "length mismatch");
        assert!(
            values.hadamard(&known) == values,
            "values must vanish outside the known mask"
        );
        ErasedWord { known, values }
    }

    /// Erase the coordinates of `pattern` from a full word.
    pub fn erase(word: &BitVector, pattern: &Pattern) -> Self {
        assert_eq!(word.len(), pattern.n(), "length mismatch");
        let known = pattern.complement().indicator();
        ErasedWord {
            values: word.hadamard(&known),
            known,
        }
    }

    pub fn n(&self) -> usize {
        self.known.len()
    }

    pub fn known(&self) -> &BitVector {
        &self.known
    }

    pub fn values(&self) -> &BitVector {
        &self.values
    }

    /// The erased coordinate set.
    pub fn erased(&self) -> Pattern {
        Pattern::from_indicator(&self.known).complement()
    }
}

/// Outcome of erasure decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErasureDecode {
    /// Exactly one codeword matches the known coordinates.
    Unique(BitVector),
    /// At least two codewords match.
    Ambiguous,
    /// No codeword matches.
    Inconsistent,
}

/// Whether the erasure pattern `s` is uniquely recoverable for the code
/// `ker(h)`: true iff the columns of `h` indexed by `s` are linearly
/// independent.
///
/// # Panics
///
/// Panics if `s.n() != h.cols()`.
pub fn erasure_correctable(h: &BitMatrix, s: &Pattern) -> bool {
    assert_eq!(s.n(), h.cols(), "pattern blocklength mismatch");
    h.select_columns(s.support()).rank() == s.weight()
}

/// Decode erasures for the code `ker(h)` by solving on the parity-check
/// side: the unknowns are the erased coordinates, so the cost scales with
/// the erasure count rather than the code dimension.
///
/// # Panics
///
/// Panics if `w.n() != h.cols()`.
pub fn decode_erasures(h: &BitMatrix, w: &ErasedWord) -> ErasureDecode {
    assert_eq!(w.n(), h.cols(), "word blocklength mismatch");
    let erased = w.erased();
    // h * x = 0 with x fixed on known coordinates:
    //   h[erased] * y = h * known-part
    let rhs = h.mat_vec(w.values());
    let a = h.select_columns(erased.support());
    match a.solve_any(&rhs) {
        None => ErasureDecode::Inconsistent,
        Some(y) => {
            if a.rank() < erased.weight() {
                return ErasureDecode::Ambiguous;
            }
            let mut word = w.values().clone();
            for (yi, &coord) in erased.support().iter().enumerate() {
                word.set(coord, y.get(yi));
            }
            ErasureDecode::Unique(word)
        }
    }
}

/// The two sides of the rank duality for a degree-`d` evaluation matrix and
/// an erasure set `s`: whether `E(m, d)[s]` has full column rank, and
/// whether `E(m, m-d-1)[s^c]` has full row rank. The two are always equal.
///
/// # Panics
///
/// Panics if `d > m - 1` or `s.n() != 2^m`.
pub fn dual_rank_equivalence(m: u32, d: u32, s: &Pattern) -> (bool, bool) {
    assert!(d < m, "need d <= m - 1");
    let n = 1usize << m;
    assert_eq!(s.n(), n, "pattern blocklength mismatch");
    let col_side = eval_matrix(m, d).select_columns(s.support()).rank() == s.weight();
    let dual = eval_matrix(m, m - d - 1).select_columns(s.complement().support());
    let row_side = dual.rank() == n - binom_sum(m, d) as usize;
    (col_side, row_side)
}

/// Exact erasure-correction census: over all `C(n, s)` patterns of weight
/// `s`, the number that are uniquely recoverable for `ker(h)` and the
/// total. First-class so acceptance checks can call it directly.
pub fn exact_erasure_success(h: &BitMatrix, s: usize) -> (u64, u64) {
    let n = h.cols();
    let mut good = 0u64;
    let mut total = 0u64;
    for combo in (0..n).combinations(s) {
        total += 1;
        if h.select_columns(&combo).rank() == s {
            good += 1;
        }
    }
    debug_assert_eq!(total as u128, binom(n as u32, s as u32));
    (good, total)
}

/// Normal-approximation 95% confidence halfwidth for a success fraction.
pub(crate) fn confidence_halfwidth(fraction: f64, trials: u64) -> f64 {
    1.96 * (fraction * (1.0 - fraction) / trials as f64).sqrt()
}

/// Monte-Carlo estimate of the probability that a random pattern from
/// `model` is a correctable erasure pattern for `code`. Returns the success
/// fraction and its 95% confidence halfwidth. Trials run in parallel over
/// per-trial substreams of `seed`, so the counts are independent of the
/// worker count.
pub fn mc_erasure_success(
    code: &RmCode,
    model: &CorruptionModel,
    trials: u64,
    seed: u64,
) -> (f64, f64) {
    let h = code.parity_check();
    let n = code.blocklength();
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let pattern = sample_pattern(model, n, &mut rng);
            u64::from(erasure_correctable(&h, &pattern))
        })
        .sum();
    let f = successes as f64 / trials as f64;
    (f, confidence_halfwidth(f, trials))
}

/// Monte-Carlo estimate of the probability that `s` points drawn i.i.d.
/// uniform (with replacement) have degree-`r` evaluation vectors spanning
/// the whole `C(m, <= r)`-dimensional space.
pub fn mc_span_success(m: u32, r: u32, s: usize, trials: u64, seed: u64) -> f64 {
    let k = binom_sum(m, r) as usize;
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let points = sample_points_iid(m, s, &mut rng);
            if s < k {
                return 0;
            }
            let rows: Vec<BitVector> = points.iter().map(|&u| eval_vector(m, r, u)).collect();
            u64::from(BitMatrix::from_rows(&rows).rank() == k)
        })
        .sum();
    successes as f64 / trials as f64
}
