//! Reed-Muller code construction: monomial enumeration, evaluation matrices,
//! evaluation vectors, the tensor-product generator, duality, and Hadamard
//! tensor powers.
//!
//! Conventions used by the whole crate:
//!
//! * Points of `F_2^m` are `u64` indices: variable `x_i` is bit `i - 1` of
//!   the index, so `x_1` varies fastest along the columns.
//! * Monomials are variable-subset bitmasks and are ordered canonically by
//!   ascending degree, ties broken by ascending mask value. This order fixes
//!   the row order of every evaluation matrix and the coordinate order of
//!   every syndrome. [`monomials_lex`] gives the tensor (mask-ascending)
//!   order as a permutation helper.

use itertools::Itertools;

use crate::gf2::{BitMatrix, BitVector};

/// Exact binomial coefficient, wide enough for `n <= 64`.
pub fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(m, <= r)`, the number of monomials of degree at most `r` on `m`
/// variables. Exact up to `m = 64`.
///
/// # Panics
///
/// Panics if `r > m`.
pub fn binom_sum(m: u32, r: u32) -> u128 {
    assert!(r <= m, "degree {r} exceeds variable count {m}");
    (0..=r).map(|i| binom(m, i)).sum()
}

/// `C(m, <= min(r, m))`: the same sum with the degree capped at `m`, for
/// identities whose intermediate terms run past the variable count.
pub(crate) fn binom_sum_sat(m: u32, r: u32) -> u128 {
    binom_sum(m, r.min(m))
}

/// A monomial over `m` Boolean variables, stored as the bitmask of its
/// variable set (bit `i - 1` set iff `x_i` is present). The empty mask is
/// the constant monomial 1. Monomials order canonically: by degree, ties
/// by ascending mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: u64,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.vars).cmp(&(other.degree(), other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial { vars: 0 };

    pub fn from_mask(vars: u64) -> Self {
        Monomial { vars }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.vars
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.vars.count_ones()
    }

    /// Evaluate at a point: 1 iff every variable of the monomial is set in
    /// the point's coordinates.
    #[inline]
    pub fn evaluate(&self, point: u64) -> bool {
        self.vars & point == self.vars
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.vars == 0 {
            return f.write_str("1");
        }
        let mut rest = self.vars;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            write!(f, "x{}", i + 1)?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// All monomials of degree at most `r` on `m` variables, in canonical order
/// (degree ascending, then mask ascending).
///
/// # Panics
///
/// Panics if `r > m` or `m > 30`.
pub fn monomials(m: u32, r: u32) -> Vec<Monomial> {
    assert!(r <= m, "degree {r} exceeds variable count {m}");
    assert!(m <= 30, "monomial enumeration capped at m = 30");
    let mut out = Vec::with_capacity(binom_sum(m, r) as usize);
    for degree in 0..=r {
        for mask in 0u64..1 << m {
            if mask.count_ones() == degree {
                out.push(Monomial::from_mask(mask));
            }
        }
    }
    out
}

/// The same monomials in mask-ascending (tensor) order, the row order in
/// which the full evaluation matrix becomes the iterated Kronecker square.
pub fn monomials_lex(m: u32, r: u32) -> Vec<Monomial> {
    let mut out = monomials(m, r);
    out.sort_by_key(Monomial::mask);
    out
}

/// A Reed-Muller code `RM(m, r)`: evaluations of all `m`-variate polynomials
/// of degree at most `r` on all `2^m` points.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RmCode {
    m: u32,
    r: u32,
}

impl RmCode {
    /// # Panics
    ///
    /// Panics if `r > m`.
    pub fn new(m: u32, r: u32) -> Self {
        assert!(r <= m, "order {r} exceeds variable count {m}");
        RmCode { m, r }
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Blocklength `n = 2^m`.
    pub fn blocklength(&self) -> usize {
        1usize << self.m
    }

    /// Dimension `k = C(m, <= r)`.
    pub fn dimension(&self) -> usize {
        binom_sum(self.m, self.r) as usize
    }

    /// Minimum distance `d = 2^(m - r)`.
    pub fn distance(&self) -> usize {
        1usize << (self.m - self.r)
    }

    /// Rate `k / n`.
    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.blocklength() as f64
    }

    /// Generator matrix: the evaluation matrix `E(m, r)` (rows generate the
    /// code).
    pub fn generator(&self) -> BitMatrix {
        eval_matrix(self.m, self.r)
    }

    /// Parity-check matrix by duality: `E(m, m - r - 1)`. For `r = m` the
    /// code is the full space and the parity check is an empty `0 x n`
    /// matrix.
    pub fn parity_check(&self) -> BitMatrix {
        if self.r == self.m {
            BitMatrix::zeros(0, self.blocklength())
        } else {
            eval_matrix(self.m, self.m - self.r - 1)
        }
    }

    /// Encode a message of polynomial coefficients (canonical monomial
    /// order) into its length-`n` evaluation vector.
    ///
    /// # Panics
    ///
    /// Panics if `message.len() != k`.
    pub fn encode(&self, message: &BitVector) -> BitVector {
        assert_eq!(message.len(), self.dimension(), "message length mismatch");
        self.generator().row_combination(message)
    }
}

/// The evaluation matrix `E(m, r)`: rows are truth tables of the monomials
/// of degree at most `r` in canonical order, columns are the points of
/// `F_2^m` in index order. Entry `(f, u)` is `f(u)`.
///
/// # Panics
///
/// Panics if `r > m`.
pub fn eval_matrix(m: u32, r: u32) -> BitMatrix {
    let monos = monomials(m, r);
    let n = 1usize << m;
    BitMatrix::from_fn(monos.len(), n, |i, j| monos[i].evaluate(j as u64))
}

/// `E(m, r)` with the rows permuted into mask-ascending (tensor) order.
pub fn eval_matrix_lex(m: u32, r: u32) -> BitMatrix {
    let monos = monomials_lex(m, r);
    let n = 1usize << m;
    BitMatrix::from_fn(monos.len(), n, |i, j| monos[i].evaluate(j as u64))
}

/// The evaluation vector of a point: all monomial values of degree at most
/// `r` at `point`, in canonical order. Equals column `point` of `E(m, r)`.
pub fn eval_vector(m: u32, r: u32, point: u64) -> BitVector {
    let monos = monomials(m, r);
    BitVector::from_bits(monos.iter().map(|f| f.evaluate(point)))
}

/// The tensor-product generator `G(m, r)`: the `m`-fold Kronecker power of
/// `[[1, 1], [0, 1]]`, keeping the rows of weight at least `2^(m - r)`. Its
/// row set equals the row set of [`eval_matrix`]`(m, r)`; the rows come out
/// in mask-ascending order, so `generator_tensor(m, m)` is exactly
/// [`eval_matrix_lex`]`(m, m)`.
///
/// # Panics
///
/// Panics if `r > m`.
pub fn generator_tensor(m: u32, r: u32) -> BitMatrix {
    assert!(r <= m, "order {r} exceeds variable count {m}");
    let mut g = BitMatrix::from_fn(1, 1, |_, _| true);
    for _ in 0..m {
        let (rows, cols) = (g.rows(), g.cols());
        let mut next = BitMatrix::zeros(2 * rows, 2 * cols);
        for i in 0..rows {
            for j in g.row(i).iter_ones() {
                next.set(i, j, true);
                next.set(i, j + cols, true);
                next.set(i + rows, j + cols, true);
            }
        }
        g = next;
    }
    let min_weight = 1usize << (m - r);
    let keep: Vec<usize> = (0..g.rows())
        .filter(|&i| g.row(i).weight() >= min_weight)
        .collect();
    g.select_rows(&keep)
}

/// The `m x 2^m` point matrix whose column `j` is the coordinate vector of
/// point `j` (row `i` is the truth table of `x_{i+1}`).
pub fn point_matrix(m: u32) -> BitMatrix {
    let n = 1usize << m;
    BitMatrix::from_fn(m as usize, n, |i, j| (j >> i) & 1 == 1)
}

/// The Hadamard tensor power `H^{tensor ell}`: one row per subset of at most
/// `ell` rows of `H`, holding the coordinate-wise product of the subset
/// (the empty subset contributes an all-ones row). Rows are ordered by
/// subset size ascending, then index-set lexicographic; duplicates are
/// retained, so the row count is exactly `C(H.rows, <= ell)`.
///
/// # Panics
///
/// Panics if `ell == 0`.
pub fn tensor_power(h: &BitMatrix, ell: usize) -> BitMatrix {
    assert!(ell >= 1, "tensor power requires ell >= 1");
    let mut rows = vec![BitVector::ones(h.cols())];
    for j in 1..=ell.min(h.rows()) {
        for combo in (0..h.rows()).combinations(j) {
            let mut row = h.row(combo[0]);
            for &i in &combo[1..] {
                row = row.hadamard(&h.row(i));
            }
            rows.push(row);
        }
    }
    BitMatrix::from_rows(&rows)
}
