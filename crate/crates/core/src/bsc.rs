//! The error (bit-flip) side of the lab: syndromes, the pattern-parity
//! relation, affine invariance, brute-force unique decodability, maximum
//! likelihood decoding, the erasures-to-errors tensor reduction checks, and
//! the square-companion construction showing the degree-2 reduction fails.

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;

use crate::channel::{sample_pattern, trial_rng, CorruptionModel, Pattern};
use crate::error::{budget_err, LabError};
use crate::gf2::{BitMatrix, BitVector};
use crate::rm::{binom, binom_sum, eval_matrix, eval_vector, tensor_power, RmCode};

/// A list of points of `F_2^m`, viewed as an `m x s` matrix whose columns
/// are the points. Duplicate columns are allowed; as a set (mod-2
/// multiplicity) it corresponds to a [`Pattern`] over `2^m` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMatrix {
    m: u32,
    cols: Vec<u64>,
}

impl PointMatrix {
    /// # Panics
    ///
    /// Panics if a point falls outside `F_2^m`.
    pub fn new(m: u32, cols: Vec<u64>) -> Self {
        assert!(m <= 63);
        assert!(cols.iter().all(|&u| u < 1u64 << m), "point outside F_2^{m}");
        PointMatrix { m, cols }
    }

    pub fn from_pattern(m: u32, pattern: &Pattern) -> Self {
        assert_eq!(pattern.n(), 1usize << m, "pattern blocklength mismatch");
        PointMatrix {
            m,
            cols: pattern.support().iter().map(|&i| i as u64).collect(),
        }
    }

    /// The pattern of the column set, provided the columns are distinct.
    pub fn to_pattern(&self) -> Option<Pattern> {
        let mut sorted = self.cols.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Pattern::new(
            1usize << self.m,
            sorted.iter().map(|&u| u as usize).collect(),
        ))
    }

    /// The column multiset reduced mod 2: points appearing an even number
    /// of times cancel.
    pub fn to_pattern_mod2(&self) -> Pattern {
        let mut ind = BitVector::zeros(1usize << self.m);
        for &u in &self.cols {
            let i = u as usize;
            ind.set(i, !ind.get(i));
        }
        Pattern::from_indicator(&ind)
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn s(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn columns(&self) -> &[u64] {
        &self.cols
    }

    /// Columns compared as multisets.
    pub fn same_columns(&self, other: &PointMatrix) -> bool {
        let mut a = self.cols.clone();
        let mut b = other.cols.clone();
        a.sort_unstable();
        b.sort_unstable();
        self.m == other.m && a == b
    }

    /// XOR of the degree-`r` evaluation vectors of the columns, counted
    /// with multiplicity.
    pub fn syndrome(&self, r: u32) -> BitVector {
        let mut acc = BitVector::zeros(binom_sum(self.m, r) as usize);
        for &u in &self.cols {
            acc.xor_assign(&eval_vector(self.m, r, u));
        }
        acc
    }

    /// Whether the degree-`r` evaluation vectors of the columns are
    /// linearly independent.
    pub fn evaluations_independent(&self, r: u32) -> bool {
        let rows: Vec<BitVector> = self
            .cols
            .iter()
            .map(|&u| eval_vector(self.m, r, u))
            .collect();
        BitMatrix::from_rows(&rows).rank() == self.s()
    }
}

/// A syndrome `H * z`, tagged with the evaluation-matrix parameters
/// `(m, degree)` when `H` was one, so syndromes taken under different
/// parity checks never compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    pub bits: BitVector,
    pub eval_params: Option<(u32, u32)>,
}

/// The syndrome of an error pattern under an arbitrary parity-check matrix.
///
/// # Panics
///
/// Panics if `z.n() != h.cols()`.
pub fn syndrome(h: &BitMatrix, z: &Pattern) -> Syndrome {
    assert_eq!(z.n(), h.cols(), "pattern blocklength mismatch");
    Syndrome {
        bits: h.mat_vec(&z.indicator()),
        eval_params: None,
    }
}

/// The syndrome of an error pattern under `E(m, degree)`, computed as the
/// XOR of the evaluation vectors of the pattern's points.
pub fn rm_syndrome(m: u32, degree: u32, z: &Pattern) -> Syndrome {
    let points = PointMatrix::from_pattern(m, z);
    Syndrome {
        bits: points.syndrome(degree),
        eval_params: Some((m, degree)),
    }
}

/// Pattern parity: `U ~_r V` iff every monomial of degree at most `r` sums
/// to the same parity over the columns of `U` and of `V` — equivalently,
/// iff the two column multisets have equal syndromes under `E(m, r)`.
///
/// # Panics
///
/// Panics if the two matrices have different `m`.
pub fn patterns_equiv(u: &PointMatrix, v: &PointMatrix, r: u32) -> bool {
    assert_eq!(u.m(), v.m(), "variable count mismatch");
    u.syndrome(r) == v.syndrome(r)
}

/// The combinatorial form of pattern parity, kept as an independent
/// implementation for cross-validation: for every row subset `I` of size at
/// most `r` and every bit pattern `z` on `I`, the number of columns whose
/// restriction to `I` equals `z` must agree mod 2 between `U` and `V`.
pub fn patterns_equiv_combinatorial(u: &PointMatrix, v: &PointMatrix, r: u32) -> bool {
    assert_eq!(u.m(), v.m(), "variable count mismatch");
    let m = u.m();
    let count = |points: &PointMatrix, rows: &[u32], z: u64| -> u32 {
        points
            .columns()
            .iter()
            .filter(|&&col| {
                rows.iter()
                    .enumerate()
                    .all(|(bi, &row)| (col >> row) & 1 == (z >> bi) & 1)
            })
            .count() as u32
    };
    for j in 0..=r.min(m) {
        for rows in (0..m).combinations(j as usize) {
            for z in 0u64..1 << j {
                if count(u, &rows, z) % 2 != count(v, &rows, z) % 2 {
                    return false;
                }
            }
        }
    }
    true
}

/// Apply a linear transformation to every column: column `i` becomes
/// `t * u_i`.
///
/// # Panics
///
/// Panics unless `t` is `m x m`.
pub fn affine_transform(u: &PointMatrix, t: &BitMatrix) -> PointMatrix {
    let m = u.m() as usize;
    assert_eq!((t.rows(), t.cols()), (m, m), "transform must be m x m");
    let row_masks: Vec<u64> = (0..m).map(|i| t.row(i).words()[0]).collect();
    let cols = u
        .columns()
        .iter()
        .map(|&col| {
            let mut out = 0u64;
            for (i, &mask) in row_masks.iter().enumerate() {
                if ((mask & col).count_ones() & 1) == 1 {
                    out |= 1 << i;
                }
            }
            out
        })
        .collect();
    PointMatrix::new(u.m(), cols)
}

/// How many weight-at-most-`s` patterns over `n` coordinates exist.
fn patterns_up_to(n: usize, s: usize) -> u128 {
    (0..=s).map(|j| binom(n as u32, j as u32)).sum()
}

/// Whether the error pattern `u` has a unique syndrome under `h` among all
/// patterns of weight at most `|u|`: true iff no `V != U` with
/// `|V| <= |U|` satisfies `H 1_V = H 1_U`.
///
/// Searches whichever side is cheaper: the kernel of `h` (collisions are
/// exactly `1_U + c` for nonzero codewords `c` with `w(1_U + c) <= |U|`) or
/// the patterns of weight at most `|u|` directly. Errors out, rather than
/// truncating, when both enumerations exceed `budget`.
pub fn unique_error_decodable(h: &BitMatrix, u: &Pattern, budget: u64) -> Result<bool, LabError> {
    assert_eq!(u.n(), h.cols(), "pattern blocklength mismatch");
    let n = h.cols();
    let s = u.weight();
    let kappa = n - h.rank();
    let kernel_cost: u128 = if kappa >= 127 {
        u128::MAX
    } else {
        1u128 << kappa
    };
    let pattern_cost = patterns_up_to(n, s);
    if kernel_cost.min(pattern_cost) > budget as u128 {
        return Err(budget_err(
            "unique_error_decodable enumeration",
            kernel_cost.min(pattern_cost),
            budget as u128,
        ));
    }
    let ind = u.indicator();
    if kernel_cost <= pattern_cost {
        let basis = h.kernel_basis();
        let rows: Vec<BitVector> = (0..basis.rows()).map(|i| basis.row(i)).collect();
        let mut current = BitVector::zeros(n);
        for i in 1u64..1 << kappa {
            current.xor_assign(&rows[i.trailing_zeros() as usize]);
            if current.distance(&ind) <= s {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        let syn_u = h.mat_vec(&ind);
        for j in 0..=s {
            for combo in (0..n).combinations(j) {
                if combo == u.support() {
                    continue;
                }
                if h.mat_vec(&BitVector::from_support(n, &combo)) == syn_u {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// All nonzero kernel elements of `h`, materialised for repeated collision
/// checks. Errors when `2^dim(ker h)` exceeds `budget`.
fn kernel_elements(h: &BitMatrix, budget: u64) -> Result<Vec<BitVector>, LabError> {
    let kappa = h.cols() - h.rank();
    let count: u128 = if kappa >= 127 {
        u128::MAX
    } else {
        1u128 << kappa
    };
    if count > budget as u128 {
        return Err(budget_err("kernel enumeration", count, budget as u128));
    }
    let basis = h.kernel_basis();
    let rows: Vec<BitVector> = (0..basis.rows()).map(|i| basis.row(i)).collect();
    let mut out = Vec::with_capacity((count - 1) as usize);
    let mut current = BitVector::zeros(h.cols());
    for i in 1u64..1 << kappa {
        current.xor_assign(&rows[i.trailing_zeros() as usize]);
        out.push(current.clone());
    }
    Ok(out)
}

/// `1_U` collides with some lighter-or-equal pattern iff a nonzero kernel
/// element lies within distance `|U|` of it.
fn collides(kernel: &[BitVector], ind: &BitVector, s: usize) -> bool {
    kernel.iter().any(|c| c.distance(ind) <= s)
}

/// The orthogonal square companion matrix `B` of even size `s >= 4`: rows
/// `1..=s-2` have ones in columns `1`, `2` and `i + 2`; row `s - 1` is
/// `(1, 0, 1, ..., 1)`; row `s` is `(0, 1, 1, ..., 1)`. Satisfies
/// `B * B^T = I`, and every row has odd weight.
///
/// # Panics
///
/// Panics if `s` is odd or below 4.
pub fn companion_matrix(s: usize) -> BitMatrix {
    assert!(
        s >= 4 && s.is_multiple_of(2),
        "companion matrix needs even s >= 4"
    );
    BitMatrix::from_fn(s, s, |i, j| {
        if i < s - 2 {
            j == 0 || j == 1 || j == i + 2
        } else if i == s - 2 {
            j != 1
        } else {
            j != 0
        }
    })
}

/// The companion point matrix `V = U * B`. Column `j` of `V` is the XOR of
/// the columns of `U` selected by column `j` of `B`, so `U` and `V` have
/// equal syndromes under `E(m, 2)` however `U` was chosen.
///
/// # Panics
///
/// Panics if `u.s()` is odd or below 4.
pub fn companion_ub(u: &PointMatrix) -> PointMatrix {
    let s = u.s();
    let b = companion_matrix(s);
    let cols = (0..s)
        .map(|j| {
            (0..s)
                .filter(|&i| b.get(i, j))
                .fold(0u64, |acc, i| acc ^ u.columns()[i])
        })
        .collect();
    PointMatrix::new(u.m(), cols)
}

/// Outcome report of a reduction sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    /// Patterns inspected (before the independence filter).
    pub checked: u64,
    /// Patterns passing the independence precondition.
    pub independent: u64,
    /// Independent patterns that were nevertheless not uniquely decodable.
    pub violations: u64,
    /// True when the sweep sampled instead of enumerating exhaustively.
    pub sampled: bool,
}

/// Verify the erasures-to-errors reduction at `(m, r)`: every point set `U`
/// with `|U| <= s_max` whose degree-`r` evaluation vectors are linearly
/// independent must have a unique syndrome under `E(m, 2r + 1)`.
///
/// Runs exhaustively when the pattern count fits in `budget`, otherwise
/// falls back to `budget` seeded samples and flags the report as sampled.
pub fn check_erasures_to_errors(
    m: u32,
    r: u32,
    s_max: usize,
    budget: u64,
    seed: u64,
) -> Result<ReductionReport, LabError> {
    assert!(2 * r < m, "syndrome degree 2r + 1 must not exceed m");
    let n = 1usize << m;
    let h_err = eval_matrix(m, 2 * r + 1);
    let kernel = kernel_elements(&h_err, budget)?;
    let mut report = ReductionReport {
        checked: 0,
        independent: 0,
        violations: 0,
        sampled: false,
    };
    let mut inspect = |support: Vec<usize>| {
        report.checked += 1;
        let pattern = Pattern::new(n, support);
        let points = PointMatrix::from_pattern(m, &pattern);
        if !points.evaluations_independent(r) {
            return;
        }
        report.independent += 1;
        if collides(&kernel, &pattern.indicator(), pattern.weight()) {
            report.violations += 1;
        }
    };
    if patterns_up_to(n, s_max) <= budget as u128 {
        for size in 0..=s_max {
            for combo in (0..n).combinations(size) {
                inspect(combo);
            }
        }
    } else {
        report.sampled = true;
        for t in 0..budget {
            let mut rng = trial_rng(seed, t);
            let size = rng.random_range(1..=s_max);
            let pattern = sample_pattern(&CorruptionModel::UniformWeight(size as f64), n, &mut rng);
            inspect(pattern.support().to_vec());
        }
    }
    Ok(report)
}

/// Random parity-check matrix with full row rank and distinct nonzero
/// columns, by rejection sampling. The tensor reduction identifies column
/// index sets with sets of column vectors, so matrices with repeated or
/// zero columns are degenerate for it.
///
/// # Panics
///
/// Panics unless `1 <= rows <= 20` and `rows <= cols <= 2^rows - 1`.
pub fn random_check_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    assert!((1..=20).contains(&rows));
    assert!(
        rows <= cols && cols < 1 << rows,
        "cols must fit distinct nonzero columns"
    );
    loop {
        let mut pool: Vec<u64> = (1..1u64 << rows).collect();
        for i in 0..cols {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
        }
        let cand = BitMatrix::from_fn(rows, cols, |i, j| (pool[j] >> i) & 1 == 1);
        if cand.rank() == rows {
            return cand;
        }
    }
}

/// Verify the general tensor reduction for an arbitrary parity-check
/// matrix: every linearly independent column set `S` of `h` must have a
/// unique syndrome under the Hadamard tensor cube of `h`. Expects matrices
/// with distinct columns (see [`random_check_matrix`]); with a repeated
/// column, the index sets holding single copies collide by construction.
pub fn check_general_reduction(
    h: &BitMatrix,
    budget: u64,
    seed: u64,
) -> Result<ReductionReport, LabError> {
    let n = h.cols();
    let s_max = h.rank();
    let h3 = tensor_power(h, 3);
    let kernel = kernel_elements(&h3, budget)?;
    let mut report = ReductionReport {
        checked: 0,
        independent: 0,
        violations: 0,
        sampled: false,
    };
    let mut inspect = |support: Vec<usize>| {
        report.checked += 1;
        if h.select_columns(&support).rank() != support.len() {
            return;
        }
        report.independent += 1;
        let pattern = Pattern::new(n, support);
        if collides(&kernel, &pattern.indicator(), pattern.weight()) {
            report.violations += 1;
        }
    };
    if patterns_up_to(n, s_max) <= budget as u128 {
        for size in 0..=s_max {
            for combo in (0..n).combinations(size) {
                inspect(combo);
            }
        }
    } else {
        report.sampled = true;
        for t in 0..budget {
            let mut rng = trial_rng(seed, t);
            let size = rng.random_range(1..=s_max);
            let pattern = sample_pattern(&CorruptionModel::UniformWeight(size as f64), n, &mut rng);
            inspect(pattern.support().to_vec());
        }
    }
    Ok(report)
}

/// Outcome of maximum-likelihood decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MlDecode {
    /// A strictly closest codeword exists.
    Unique(BitVector),
    /// Two or more codewords attain the minimum distance.
    Tie,
}

/// Exhaustive maximum-likelihood decoding: sweep all `2^k` codewords in
/// Gray-code order and keep the closest. A non-unique minimiser reports
/// [`MlDecode::Tie`] and counts as a failure.
///
/// Errors when `2^k` exceeds `budget`.
pub fn ml_decode(code: &RmCode, received: &BitVector, budget: u64) -> Result<MlDecode, LabError> {
    assert_eq!(received.len(), code.blocklength(), "length mismatch");
    let k = code.dimension();
    let count: u128 = if k >= 127 { u128::MAX } else { 1u128 << k };
    if count > budget as u128 {
        return Err(budget_err("ML codeword sweep", count, budget as u128));
    }
    let generator = code.generator();
    let rows: Vec<BitVector> = (0..generator.rows()).map(|i| generator.row(i)).collect();
    let mut cw = BitVector::zeros(code.blocklength());
    let mut best = cw.clone();
    let mut best_dist = cw.distance(received);
    let mut tie = false;
    for i in 1u64..1 << k {
        cw.xor_assign(&rows[i.trailing_zeros() as usize]);
        let d = cw.distance(received);
        match d.cmp(&best_dist) {
            std::cmp::Ordering::Less => {
                best_dist = d;
                best = cw.clone();
                tie = false;
            }
            std::cmp::Ordering::Equal => tie = true,
            std::cmp::Ordering::Greater => {}
        }
    }
    Ok(if tie {
        MlDecode::Tie
    } else {
        MlDecode::Unique(best)
    })
}

/// Success criterion for [`mc_bsc_success`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BscMethod {
    /// A trial succeeds iff the sampled pattern has a unique syndrome among
    /// patterns of at most its weight; this is the default criterion.
    SyndromeCollision,
    /// A trial encodes a random message, flips the sampled pattern, decodes
    /// by exhaustive ML and succeeds iff the original codeword is returned
    /// with no tie. Agrees with the collision criterion trial by trial.
    FullMl,
}

/// Monte-Carlo estimate of the probability that a random error pattern is
/// uniquely correctable for `code`. Returns the success fraction and the
/// 95% halfwidth. The pattern substream depends only on `(seed, trial)`, so
/// the two methods see identical patterns on matched seeds.
pub fn mc_bsc_success(
    code: &RmCode,
    model: &CorruptionModel,
    trials: u64,
    seed: u64,
    method: BscMethod,
    budget: u64,
) -> Result<(f64, f64), LabError> {
    let n = code.blocklength();
    let h = code.parity_check();
    let kernel = kernel_elements(&h, budget)?;
    if method == BscMethod::FullMl {
        let count: u128 = if code.dimension() >= 127 {
            u128::MAX
        } else {
            1u128 << code.dimension()
        };
        if count > budget as u128 {
            return Err(budget_err("ML codeword sweep", count, budget as u128));
        }
    }
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let pattern = sample_pattern(model, n, &mut rng);
            let ok = match method {
                BscMethod::SyndromeCollision => {
                    !collides(&kernel, &pattern.indicator(), pattern.weight())
                }
                BscMethod::FullMl => {
                    let bits: Vec<bool> = (0..code.dimension())
                        .map(|_| rng.random_bool(0.5))
                        .collect();
                    let cw = code.encode(&BitVector::from_bits(bits));
                    let mut received = cw.clone();
                    received.xor_assign(&pattern.indicator());
                    matches!(
                        ml_decode(code, &received, budget).expect("budget checked above"),
                        MlDecode::Unique(ref x) if *x == cw
                    )
                }
            };
            u64::from(ok)
        })
        .sum();
    let f = successes as f64 / trials as f64;
    Ok((f, crate::erasure::confidence_halfwidth(f, trials)))
}

/// Exact census of bad error patterns: over all `C(n, s)` patterns of
/// weight `s`, how many have a syndrome collision with a pattern of weight
/// at most `s`. Returns `(bad, total)`. First-class so acceptance checks
/// can call it directly.
pub fn exact_bad_fraction(h: &BitMatrix, s: usize, budget: u64) -> Result<(u64, u64), LabError> {
    let n = h.cols();
    let total_patterns = binom(n as u32, s as u32);
    if total_patterns > budget as u128 {
        return Err(budget_err(
            "pattern enumeration",
            total_patterns,
            budget as u128,
        ));
    }
    let kernel = kernel_elements(h, budget)?;
    let mut bad = 0u64;
    let mut total = 0u64;
    for combo in (0..n).combinations(s) {
        total += 1;
        let ind = BitVector::from_support(n, &combo);
        if collides(&kernel, &ind, s) {
            bad += 1;
        }
    }
    Ok((bad, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::random_invertible;

    const BUDGET: u64 = 1 << 26;

    /// The two 6 x 6 fixtures that agree on all patterns of size 2 but not
    /// of size 3: the identity points and their companion under B.
    fn fixture_pair() -> (PointMatrix, PointMatrix) {
        let a = PointMatrix::new(6, vec![1, 2, 4, 8, 16, 32]);
        let b = PointMatrix::new(6, vec![31, 47, 49, 50, 52, 56]);
        (a, b)
    }

    #[test]
    fn syndrome_of_empty_pattern_is_zero() {
        let h = eval_matrix(3, 1);
        let s = syndrome(&h, &Pattern::empty(8));
        assert!(s.bits.is_zero());
    }

    #[test]
    fn syndrome_of_codeword_support_is_zero() {
        // the all-ones word is a codeword of ker E(m, r) for r >= 1
        let h = eval_matrix(3, 1);
        let full = Pattern::full(8);
        // E(3,1) * 1 has parity 2^3 = 0 on the constant row and on each x_i
        assert!(syndrome(&h, &full).bits.is_zero());
    }

    #[test]
    fn syndrome_of_single_point_is_its_evaluation() {
        let h = eval_matrix(3, 1);
        let z = Pattern::new(8, vec![1]);
        assert_eq!(syndrome(&h, &z).bits.to_string(), "1100");
        assert_eq!(rm_syndrome(3, 1, &z).bits, syndrome(&h, &z).bits);
    }

    #[test]
    fn rm_syndrome_tags_do_not_cross_compare() {
        let z = Pattern::new(8, vec![3]);
        assert_ne!(rm_syndrome(3, 1, &z), syndrome(&eval_matrix(3, 1), &z));
    }

    #[test]
    fn fixture_is_equivalent_at_2_not_3() {
        let (a, b) = fixture_pair();
        assert!(patterns_equiv(&a, &b, 2));
        assert!(!patterns_equiv(&a, &b, 3));
        assert!(patterns_equiv_combinatorial(&a, &b, 2));
        assert!(!patterns_equiv_combinatorial(&a, &b, 3));
    }

    #[test]
    fn equivalence_is_reflexive() {
        let (_, b) = fixture_pair();
        for r in 0..=4 {
            assert!(patterns_equiv(&b, &b, r));
        }
    }

    #[test]
    fn duplicate_columns_cancel() {
        let u = PointMatrix::new(3, vec![5, 5, 1]);
        let v = PointMatrix::new(3, vec![1]);
        for r in 0..=3 {
            assert!(patterns_equiv(&u, &v, r));
        }
        assert_eq!(u.to_pattern_mod2(), Pattern::new(8, vec![1]));
        assert!(u.to_pattern().is_none());
        assert!(v.to_pattern().is_some());
    }

    #[test]
    fn combinatorial_and_syndrome_definitions_agree_on_random_inputs() {
        for t in 0..200u64 {
            let mut rng = trial_rng(100, t);
            let m = 4;
            let s = rng.random_range(0..=5);
            let s2 = rng.random_range(0..=5);
            let u = PointMatrix::new(m, (0..s).map(|_| rng.random_range(0..16)).collect());
            let v = PointMatrix::new(m, (0..s2).map(|_| rng.random_range(0..16)).collect());
            for r in 0..=2 {
                assert_eq!(
                    patterns_equiv(&u, &v, r),
                    patterns_equiv_combinatorial(&u, &v, r),
                    "u={u:?} v={v:?} r={r}"
                );
            }
        }
    }

    #[test]
    fn affine_transform_cases() {
        let (_, b) = fixture_pair();
        let id = BitMatrix::identity(6);
        assert_eq!(affine_transform(&b, &id), b);
        let zero = BitMatrix::zeros(6, 6);
        assert!(affine_transform(&b, &zero)
            .columns()
            .iter()
            .all(|&c| c == 0));
    }

    #[test]
    fn invertible_transforms_preserve_equivalence() {
        for t in 0..200u64 {
            let mut rng = trial_rng(200, t);
            let m = rng.random_range(3..=6);
            let s = rng.random_range(1..=4usize);
            let cols = |rng: &mut rand_chacha::ChaCha8Rng| {
                (0..s).map(|_| rng.random_range(0..1u64 << m)).collect()
            };
            let u = PointMatrix::new(m, cols(&mut rng));
            let v = PointMatrix::new(m, cols(&mut rng));
            let a = random_invertible(m as usize, &mut rng);
            for r in 0..=3u32.min(m) {
                assert_eq!(
                    patterns_equiv(&u, &v, r),
                    patterns_equiv(&affine_transform(&u, &a), &affine_transform(&v, &a), r)
                );
            }
        }
    }

    #[test]
    fn empty_pattern_is_uniquely_decodable() {
        let h = eval_matrix(4, 2);
        assert_eq!(
            unique_error_decodable(&h, &Pattern::empty(16), BUDGET),
            Ok(true)
        );
    }

    #[test]
    fn independent_basis_points_are_uniquely_decodable_under_cubes() {
        for m in 3..=5u32 {
            let h = eval_matrix(m, 3);
            for s in 1..=m as usize {
                let support: Vec<usize> = (0..s).map(|i| 1usize << i).collect();
                let u = Pattern::new(1 << m, support);
                assert_eq!(
                    unique_error_decodable(&h, &u, BUDGET),
                    Ok(true),
                    "m={m} s={s}"
                );
            }
        }
    }

    #[test]
    fn kernel_and_pattern_routes_agree() {
        // compare the automatic route choice against a plain exhaustive
        // syndrome comparison on every small pattern of E(3,1)
        let h = eval_matrix(3, 1);
        for size in 0..=3usize {
            for combo in (0..8).combinations(size) {
                let u = Pattern::new(8, combo);
                let a = unique_error_decodable(&h, &u, BUDGET).unwrap();
                let syn_u = h.mat_vec(&u.indicator());
                let mut collision = false;
                for j in 0..=u.weight() {
                    for v in (0..8).combinations(j) {
                        if v == u.support() {
                            continue;
                        }
                        if h.mat_vec(&BitVector::from_support(8, &v)) == syn_u {
                            collision = true;
                        }
                    }
                }
                assert_eq!(a, !collision, "u = {:?}", u.support());
            }
        }
    }

    #[test]
    fn companion_matrix_is_the_displayed_b_at_s6() {
        let b = companion_matrix(6);
        let want =
            BitMatrix::from_text("6 6\n111000\n110100\n110010\n110001\n101111\n011111").unwrap();
        assert_eq!(b, want);
    }

    #[test]
    fn companion_matrix_is_orthogonal() {
        for s in [4, 6, 8, 10, 12, 14, 16, 18, 20] {
            let b = companion_matrix(s);
            assert_eq!(b.mul_transpose(&b), BitMatrix::identity(s), "s = {s}");
        }
    }

    #[test]
    fn companion_of_identity_points_is_the_fixture() {
        let (a, b) = fixture_pair();
        assert_eq!(companion_ub(&a), b);
    }

    #[test]
    fn companion_collides_at_degree_2() {
        for t in 0..50u64 {
            let mut rng = trial_rng(300, t);
            let u = PointMatrix::new(10, (0..6).map(|_| rng.random_range(0..1024)).collect());
            let v = companion_ub(&u);
            assert!(patterns_equiv(&u, &v, 2), "seed {t}");
        }
    }

    #[test]
    fn companion_witnesses_non_unique_decoding() {
        // a degree-2 syndrome collision with a genuinely different pattern
        let mut found = false;
        for t in 0..20u64 {
            let mut rng = trial_rng(400, t);
            let mut pts: Vec<u64> = Vec::new();
            while pts.len() < 6 {
                let p = rng.random_range(0..32u64);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            let u = PointMatrix::new(5, pts);
            let v = companion_ub(&u);
            if v.same_columns(&u) {
                continue;
            }
            let up = u.to_pattern().unwrap();
            let vp = v.to_pattern_mod2();
            if vp == up {
                continue;
            }
            let h = eval_matrix(5, 2);
            assert!(vp.weight() <= up.weight());
            assert_eq!(syndrome(&h, &up).bits, syndrome(&h, &vp).bits);
            assert_eq!(unique_error_decodable(&h, &up, BUDGET), Ok(false));
            found = true;
            break;
        }
        assert!(found, "no usable companion witness in 20 seeds");
    }

    #[test]
    fn erasures_to_errors_reduction_holds_small() {
        let report = check_erasures_to_errors(4, 1, 4, BUDGET, 0).unwrap();
        assert_eq!(report.violations, 0);
        assert!(!report.sampled);
        assert!(report.independent > 0);

        let report = check_erasures_to_errors(5, 1, 3, BUDGET, 0).unwrap();
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn erasures_to_errors_sampling_mode_flags_report() {
        let report = check_erasures_to_errors(4, 1, 4, 100, 9).unwrap();
        assert!(report.sampled);
        assert_eq!(report.checked, 100);
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn general_reduction_identity_and_random() {
        let report = check_general_reduction(&BitMatrix::identity(5), BUDGET, 0).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.independent, report.checked);

        let mut rng = trial_rng(500, 0);
        let h = random_check_matrix(4, 12, &mut rng);
        let report = check_general_reduction(&h, BUDGET, 0).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.independent < report.checked, "dependent sets exist");
    }

    #[test]
    fn general_reduction_skips_dependent_column_sets() {
        // a repeated column can never appear in an independent set; the
        // single copies DO collide with each other (equal columns are
        // indistinguishable by any syndrome), which is why the reduction's
        // hypotheses require distinct columns
        let mut h = BitMatrix::zeros(2, 3);
        h.set(0, 0, true);
        h.set(0, 1, true);
        h.set(1, 2, true);
        let report = check_general_reduction(&h, BUDGET, 0).unwrap();
        assert_eq!(report.checked, 7);
        assert_eq!(report.independent, 6);
        assert_eq!(report.violations, 4);
    }

    #[test]
    fn random_check_matrices_have_distinct_columns_and_full_rank() {
        for t in 0..30u64 {
            let mut rng = trial_rng(501, t);
            let rows = rng.random_range(2..=5usize);
            let cols = rng.random_range(rows..=(1 << rows) - 1);
            let h = random_check_matrix(rows, cols, &mut rng);
            assert_eq!(h.rank(), rows);
            let mut seen: Vec<u64> = (0..cols)
                .map(|j| (0..rows).fold(0u64, |acc, i| acc | (u64::from(h.get(i, j)) << i)))
                .collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), cols, "columns repeat");
            assert!(!seen.contains(&0), "zero column");
        }
    }

    #[test]
    fn ml_decodes_exact_codeword_and_ties() {
        let code = RmCode::new(1, 0);
        let cw = BitVector::ones(2);
        assert_eq!(ml_decode(&code, &cw, BUDGET), Ok(MlDecode::Unique(cw)));
        let half: BitVector = "01".parse().unwrap();
        assert_eq!(ml_decode(&code, &half, BUDGET), Ok(MlDecode::Tie));
    }

    #[test]
    fn ml_corrects_one_error_within_half_distance() {
        let code = RmCode::new(3, 1);
        for t in 0..20u64 {
            let mut rng = trial_rng(600, t);
            let bits: Vec<bool> = (0..4).map(|_| rng.random_bool(0.5)).collect();
            let cw = code.encode(&BitVector::from_bits(bits));
            let flip = rng.random_range(0..8);
            let mut received = cw.clone();
            received.set(flip, !received.get(flip));
            assert_eq!(
                ml_decode(&code, &received, BUDGET),
                Ok(MlDecode::Unique(cw.clone()))
            );
        }
    }

    #[test]
    fn ml_budget_is_enforced() {
        let code = RmCode::new(4, 2);
        let out = ml_decode(&code, &BitVector::zeros(16), 100);
        assert!(matches!(out, Err(LabError::BudgetExceeded { .. })));
    }

    #[test]
    fn mc_bsc_extremes_and_small_cases() {
        let code = RmCode::new(3, 1);
        let (f, _) = mc_bsc_success(
            &code,
            &CorruptionModel::UniformWeight(0.0),
            128,
            1,
            BscMethod::SyndromeCollision,
            BUDGET,
        )
        .unwrap();
        assert_eq!(f, 1.0);
        // d = 4 corrects any single error uniquely
        let (f, _) = mc_bsc_success(
            &code,
            &CorruptionModel::UniformWeight(1.0),
            128,
            1,
            BscMethod::SyndromeCollision,
            BUDGET,
        )
        .unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn collision_and_ml_criteria_match_on_matched_seeds() {
        for (m, r, s) in [(3, 1, 2), (4, 1, 4), (4, 2, 3)] {
            let code = RmCode::new(m, r);
            let model = CorruptionModel::UniformWeight(s as f64);
            let (a, _) =
                mc_bsc_success(&code, &model, 300, 42, BscMethod::SyndromeCollision, BUDGET)
                    .unwrap();
            let (b, _) = mc_bsc_success(&code, &model, 300, 42, BscMethod::FullMl, BUDGET).unwrap();
            assert_eq!(a, b, "criteria diverged for RM({m},{r}) at s={s}");
        }
    }

    #[test]
    fn mc_bsc_matches_exact_enumeration() {
        let code = RmCode::new(4, 0);
        let h = code.parity_check();
        let (bad, total) = exact_bad_fraction(&h, 4, BUDGET).unwrap();
        assert_eq!(total, 1820);
        let exact = 1.0 - bad as f64 / total as f64;
        let (f, hw) = mc_bsc_success(
            &code,
            &CorruptionModel::UniformWeight(4.0),
            4000,
            2015,
            BscMethod::SyndromeCollision,
            BUDGET,
        )
        .unwrap();
        assert!((f - exact).abs() <= 1.5 * hw + 1e-9, "f={f} exact={exact}");
    }
}
