//! Exact weight-distribution enumeration for small Reed-Muller codes, the
//! weight-distribution and union bound evaluators, the generalized Hamming
//! weight hierarchy with its unique gap representation, and two exact
//! binomial identity checkers.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{budget_err, LabError};
use crate::gf2::BitVector;
use crate::rm::{binom_sum, binom_sum_sat, RmCode};

/// Exact weight -> count map of a code, covering all `2^k` codewords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    code: RmCode,
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn code(&self) -> RmCode {
        self.code
    }

    pub fn n(&self) -> usize {
        self.code.blocklength()
    }

    /// Count of codewords of weight exactly `w`.
    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    /// `(weight, count)` pairs with nonzero count, ascending by weight.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// Smallest nonzero codeword weight (the minimum distance).
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map(|(w, _)| w)
    }
}

/// Exact weight distribution of `RM(m, r)` by sweeping the message space in
/// Gray-code order: each step XORs a single generator row into the current
/// codeword and updates the weight incrementally. Blocks of the message
/// space run in parallel and merge by addition, so the counts do not
/// depend on the worker count.
///
/// Errors when `2^k` exceeds `budget`.
pub fn enumerate_weights(m: u32, r: u32, budget: u64) -> Result<WeightDistribution, LabError> {
    let code = RmCode::new(m, r);
    let k = code.dimension();
    let needed: u128 = if k >= 127 { u128::MAX } else { 1u128 << k };
    if needed > budget as u128 {
        return Err(budget_err("codeword enumeration", needed, budget as u128));
    }
    let n = code.blocklength();
    let generator = code.generator();
    let rows: Vec<BitVector> = (0..k).map(|i| generator.row(i)).collect();
    let total: u64 = 1 << k;

    let block_bits = k.min(8) as u32;
    let blocks: u64 = 1 << block_bits;
    let block_size = total >> block_bits;

    let encode_gray = |index: u64| -> BitVector {
        let gray = index ^ (index >> 1);
        let mut cw = BitVector::zeros(n);
        for (b, row) in rows.iter().enumerate() {
            if (gray >> b) & 1 == 1 {
                cw.xor_assign(row);
            }
        }
        cw
    };

    let counts = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let start = block * block_size;
            let mut local = vec![0u64; n + 1];
            let mut cw = encode_gray(start);
            let mut weight = cw.weight();
            local[weight] += 1;
            for i in start + 1..start + block_size {
                let row = &rows[i.trailing_zeros() as usize];
                let words = cw.words_mut();
                for (w, s) in words.iter_mut().zip(row.words()) {
                    let before = w.count_ones() as usize;
                    *w ^= s;
                    weight = weight + w.count_ones() as usize - before;
                }
                local[weight] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    Ok(WeightDistribution { code, counts })
}

/// Cumulative weight count: the number of codewords of relative weight at
/// most `alpha`.
///
/// # Panics
///
/// Panics if `alpha` is outside `[0, 1]`.
pub fn cumulative_w(dist: &WeightDistribution, alpha: f64) -> u128 {
    assert!((0.0..=1.0).contains(&alpha), "alpha {alpha} outside [0, 1]");
    let n = dist.n() as f64;
    dist.nonzero()
        .filter(|&(w, _)| w as f64 <= alpha * n)
        .map(|(_, c)| c as u128)
        .sum()
}

/// The weight-distribution bound exponent: the bound on the number of
/// codewords of relative weight at most `(1 - eps) 2^-ell` is
/// `(1/eps)^(8 c ell^4 C(m-ell, <= r-ell))`, so its base-2 logarithm is
/// `8 c ell^4 C(m-ell, <= r-ell) log2(1/eps)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KlpBound {
    /// The exact integer factor `8 ell^4 C(m-ell, <= r-ell)`.
    pub exponent_coeff: u128,
    /// `c * exponent_coeff * log2(1/eps)`.
    pub log2_bound: f64,
}

/// Evaluate the bound exponent at `(m, r, ell, eps)` with a caller-supplied
/// absolute constant `c` (the bound itself would be astronomically large,
/// so only the exponent is returned). Requires `1 <= ell <= r - 1 < m / 4`,
/// `0 < eps <= 1/2` and `c > 0`.
pub fn klp_bound(m: u32, r: u32, ell: u32, eps: f64, c: f64) -> Result<KlpBound, LabError> {
    if ell < 1 || r < 1 || ell > r - 1 {
        return Err(LabError::Domain(format!(
            "need 1 <= ell <= r - 1, got ell={ell} r={r}"
        )));
    }
    if 4 * (r - 1) >= m {
        return Err(LabError::Domain(format!(
            "need r - 1 < m / 4, got r={r} m={m}"
        )));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(LabError::Domain(format!("eps {eps} outside (0, 1/2]")));
    }
    if c <= 0.0 {
        return Err(LabError::Domain(format!("constant c {c} must be positive")));
    }
    let coeff = 8u128 * (ell as u128).pow(4) * binom_sum(m - ell, r - ell);
    Ok(KlpBound {
        exponent_coeff: coeff,
        log2_bound: c * coeff as f64 * (1.0 / eps).log2(),
    })
}

fn big_binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The union bound on the fraction of weight-`s` error patterns with a
/// colliding syndrome, evaluated exactly from a weight distribution:
///
/// `sum_w N(w) C(w, w/2) C(n - w, s - w/2) / C(n, s)`
///
/// over even nonzero weights `w` in the distribution (weights above `2s`
/// contribute nothing). The result is a bound, not a probability, and may
/// exceed 1.
///
/// # Panics
///
/// Panics if `s > n / 2`.
pub fn bsc_union_bound(dist: &WeightDistribution, s: usize) -> BigRational {
    let n = dist.n();
    assert!(2 * s <= n, "union bound requires s <= n / 2");
    let mut numerator = BigInt::zero();
    for (w, count) in dist.nonzero() {
        if w == 0 || w % 2 != 0 {
            continue;
        }
        let half = w / 2;
        if half > s {
            continue;
        }
        numerator += BigInt::from(count) * big_binom(w, half) * big_binom(n - w, s - half);
    }
    BigRational::new(numerator, big_binom(n, s))
}

/// The unique gap representation of `0 <= a <= C(m, <= r)`:
/// `a = sum_i C(m_i, <= r_i)` with `m_i - r_i = m - r - i + 1`, found
/// greedily by taking the largest feasible `m_i` at each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeiRepresentation {
    /// The `(m_i, r_i)` pairs, in order of increasing `i`.
    pub parts: Vec<(u32, u32)>,
}

impl WeiRepresentation {
    /// Reconstruct `a` from the parts.
    pub fn value(&self) -> u128 {
        self.parts
            .iter()
            .map(|&(mi, ri)| binom_sum_sat(mi, ri))
            .sum()
    }
}

/// Compute the gap representation of `a` for the code `RM(m, r)`.
///
/// # Panics
///
/// Panics if `a > C(m, <= r)`.
pub fn wei_rep(a: u64, m: u32, r: u32) -> WeiRepresentation {
    assert!(
        (a as u128) <= binom_sum(m, r),
        "a = {a} exceeds the dimension of RM({m},{r})"
    );
    let mut parts = Vec::new();
    let mut remaining = a as u128;
    let mut step: i64 = 1;
    while remaining > 0 {
        let gap = m as i64 - r as i64 - step + 1;
        let mut candidate: Option<(u32, u32)> = None;
        let mut mi = gap.max(0) as u32;
        loop {
            let ri = (mi as i64 - gap) as u32;
            if binom_sum_sat(mi, ri) <= remaining {
                candidate = Some((mi, ri));
                mi += 1;
            } else {
                break;
            }
        }
        let (mi, ri) = candidate.expect("gap representation step always has a unit term");
        remaining -= binom_sum_sat(mi, ri);
        parts.push((mi, ri));
        step += 1;
    }
    let rep = WeiRepresentation { parts };
    debug_assert_eq!(rep.value(), a as u128);
    rep
}

/// The `a`-th generalized Hamming weight of `RM(m, r)`:
/// `d_a = sum_i 2^(m_i)` over the gap representation of `a`.
///
/// # Panics
///
/// Panics if `a` is outside `1..=C(m, <= r)`.
pub fn ghw(m: u32, r: u32, a: u64) -> u64 {
    assert!(a >= 1, "generalized Hamming weights start at a = 1");
    wei_rep(a, m, r)
        .parts
        .iter()
        .map(|&(mi, _)| 1u64 << mi)
        .sum()
}

/// Number of `a`-dimensional subspaces of `F_2^k` (the Gaussian binomial),
/// saturating at `u128::MAX` on overflow.
pub fn gaussian_binomial(k: u32, a: u32) -> u128 {
    if a > k {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 1..=a {
        let num = (1u128 << (k - i + 1)) - 1;
        let den = (1u128 << i) - 1;
        match acc.checked_mul(num) {
            Some(v) => acc = v / den,
            None => return u128::MAX,
        }
    }
    acc
}

/// Exact minimum support size over all `a`-dimensional subcodes of
/// `RM(m, r)`, by enumerating subspaces of the message space through their
/// canonical reduced-echelon bases (each subspace counted exactly once).
/// The support of a subcode is the coordinate-wise OR of any basis of it.
///
/// Errors when the subspace count exceeds `budget`.
///
/// # Panics
///
/// Panics if `a` is outside `1..=k`.
pub fn ghw_bruteforce(m: u32, r: u32, a: usize, budget: u64) -> Result<u64, LabError> {
    let code = RmCode::new(m, r);
    let k = code.dimension();
    assert!(a >= 1 && a <= k, "subcode dimension {a} outside 1..={k}");
    let count = gaussian_binomial(k as u32, a as u32);
    if count > budget as u128 {
        return Err(budget_err("subspace enumeration", count, budget as u128));
    }
    let generator = code.generator();
    let rows: Vec<BitVector> = (0..k).map(|i| generator.row(i)).collect();
    let encode_mask = |mask: u64| -> BitVector {
        let mut cw = BitVector::zeros(code.blocklength());
        let mut rest = mask;
        while rest != 0 {
            cw.xor_assign(&rows[rest.trailing_zeros() as usize]);
            rest &= rest - 1;
        }
        cw
    };

    let mut best = u64::MAX;
    let mut seen: u128 = 0;
    for pivots in (0..k).combinations(a) {
        let mut is_pivot = vec![false; k];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // free slots of the echelon basis: (row, column) pairs right of
        // each pivot, excluding pivot columns
        let free: Vec<(usize, usize)> = (0..a)
            .flat_map(|row| {
                let p = pivots[row];
                (p + 1..k).filter(|&c| !is_pivot[c]).map(move |c| (row, c))
            })
            .collect();
        assert!(free.len() < 64, "free slot count exceeds odometer width");
        for assignment in 0u64..1 << free.len() {
            let mut masks: Vec<u64> = pivots.iter().map(|&p| 1u64 << p).collect();
            for (bit, &(row, col)) in free.iter().enumerate() {
                if (assignment >> bit) & 1 == 1 {
                    masks[row] |= 1 << col;
                }
            }
            let mut support = BitVector::zeros(code.blocklength());
            for &mask in &masks {
                support.or_assign(&encode_mask(mask));
            }
            best = best.min(support.weight() as u64);
            seen += 1;
        }
    }
    debug_assert_eq!(seen, count);
    Ok(best)
}

/// Exact check of the binomial difference identity
/// `C(m, <= r) - sum_{i=1..t} C(m - i, <= r - 1) = C(m - t, <= r)`.
/// Degrees past the variable count saturate, as the identity's terms do.
///
/// # Panics
///
/// Panics if `r < 1` or `t > m`.
pub fn binomial_identity_check(m: u32, r: u32, t: u32) -> bool {
    assert!(r >= 1, "identity needs r >= 1");
    assert!(t <= m, "identity needs t <= m");
    let lhs_sum: u128 = (1..=t).map(|i| binom_sum_sat(m - i, r - 1)).sum();
    let lhs = binom_sum_sat(m, r) - lhs_sum;
    lhs == binom_sum_sat(m - t, r)
}

/// Result of the small-degree estimation check: the hypothesis status is
/// reported separately from the inequality verdict, so hypothesis-violating
/// inputs are distinguishable from genuine inequality failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimationCheck {
    /// Whether `r < sqrt(delta m / (4 log2 m))` and `eps > m^(-r/2)` hold.
    pub hypotheses_met: bool,
    /// Whether `C(m - log2 C(m,<=r) - log2(1/eps), <= r) > (1 - delta) C(m, <= r)`,
    /// with the left argument floored.
    pub inequality_holds: bool,
}

/// Numerically evaluate the small-degree estimation inequality.
pub fn estimation_small_r_check(m: u32, r: u32, delta: f64, eps: f64) -> EstimationCheck {
    assert!(m >= 2 && r >= 1 && r <= m);
    assert!(delta > 0.0 && delta < 1.0, "delta {delta} outside (0, 1)");
    assert!(eps > 0.0 && eps <= 1.0, "eps {eps} outside (0, 1]");
    let mf = m as f64;
    let hypotheses_met =
        (r as f64) < (delta * mf / (4.0 * mf.log2())).sqrt() && eps > mf.powf(-(r as f64) / 2.0);
    let k = binom_sum(m, r);
    let arg = mf - (k as f64).log2() - (1.0 / eps).log2();
    let lhs = if arg < 0.0 {
        0u128
    } else {
        binom_sum_sat(arg.floor() as u32, r)
    };
    let inequality_holds = lhs as f64 > (1.0 - delta) * k as f64;
    EstimationCheck {
        hypotheses_met,
        inequality_holds,
    }
}
