//! Bit-packed dense linear algebra over GF(2).
//!
//! Vectors and matrices store 64 coordinates per machine word, with bit `i`
//! of word `i / 64` holding coordinate `i`. Elimination and products run as
//! word-wide XOR streams. Trailing bits past the logical length of the last
//! word are kept zero. All operations return new values; inputs are never
//! mutated, so values are safe to share across threads for reading.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::LabError;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Mask selecting the valid bits of the final word of a `len`-bit value.
#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => u64::MAX,
        k => (1u64 << k) - 1,
    }
}

/// A packed GF(2) vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.mask_tail();
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            if *b {
                v.set(i, true);
            }
        }
        v
    }

    /// Indicator vector of `support` inside `0..len`.
    ///
    /// # Panics
    ///
    /// Panics if an index is out of range.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for len {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for len {}",
            self.len
        );
        let w = &mut self.words[i / WORD_BITS];
        if value {
            *w |= 1u64 << (i % WORD_BITS);
        } else {
            *w &= !(1u64 << (i % WORD_BITS));
        }
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming distance to `other`.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn distance(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }

    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn or_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a |= b;
        }
    }

    /// Coordinate-wise (Hadamard) product: `w_i = u_i * v_i`.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn hadamard(&self, rhs: &BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len, "length mismatch");
        let words = self
            .words
            .iter()
            .zip(&rhs.words)
            .map(|(a, b)| a & b)
            .collect();
        BitVector {
            len: self.len,
            words,
        }
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi * WORD_BITS;
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(base + tz)
                }
            })
        })
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    fn mask_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(LabError::Parse(format!("invalid bit character {other:?}"))),
            }
        }
        Ok(v)
    }
}

/// A packed row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> bool>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// # Panics
    ///
    /// Panics if the rows do not all have the same length.
    pub fn from_rows(rows: &[BitVector]) -> Self {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        if value {
            *w |= 1u64 << (j % WORD_BITS);
        } else {
            *w &= !(1u64 << (j % WORD_BITS));
        }
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Copy of row `i`.
    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(b * self.stride);
        head[a * self.stride..(a + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    /// In-place reduction to reduced row-echelon form. Returns the pivot
    /// columns in strictly increasing order; their count is the rank.
    /// Pivots are chosen as the first nonzero entry in each column.
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        let mut src = vec![0u64; self.stride];
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let found = (pivot_row..self.rows).find(|&r| self.get(r, col));
            let Some(r) = found else { continue };
            self.swap_rows(pivot_row, r);
            src.copy_from_slice(self.row_words(pivot_row));
            for other in 0..self.rows {
                if other != pivot_row && self.get(other, col) {
                    for (d, s) in self.row_words_mut(other).iter_mut().zip(&src) {
                        *d ^= s;
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    /// Rank of the matrix over GF(2).
    pub fn rank(&self) -> usize {
        self.clone().echelonize().len()
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut r = self.clone();
        let pivots = r.echelonize();
        (r, pivots)
    }

    /// Solve `self * x = b` for any one witness `x`, with free variables set
    /// to zero. Returns `None` when the system is inconsistent.
    ///
    /// # Panics
    ///
    /// Panics if `b.len() != self.rows()`.
    pub fn solve_any(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        // trailing bits of every row are zero, so a word copy lands cleanly
        // in the wider augmented rows
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.row_words_mut(i)[..self.stride].copy_from_slice(self.row_words(i));
            aug.set(i, self.cols, b.get(i));
        }
        let pivots = aug.echelonize();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &col) in pivots.iter().enumerate() {
            x.set(col, aug.get(row, self.cols));
        }
        Some(x)
    }

    /// Basis of the right kernel `{x : self * x = 0}`, one basis vector per
    /// row. The row count is `cols - rank`.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (bi, &f) in free.iter().enumerate() {
            basis.set(bi, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    basis.set(bi, p, true);
                }
            }
        }
        basis
    }

    /// Matrix product over GF(2).
    ///
    /// # Panics
    ///
    /// Panics if `self.cols() != rhs.rows()`.
    pub fn mat_mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in self.row(i).iter_ones() {
                let src = rhs.row_words(j).to_vec();
                for (d, s) in out.row_words_mut(i).iter_mut().zip(&src) {
                    *d ^= s;
                }
            }
        }
        out
    }

    /// `self * rhs^T` without materialising the transpose.
    ///
    /// # Panics
    ///
    /// Panics if `self.cols() != rhs.cols()`.
    pub fn mul_transpose(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.cols, "dimension mismatch in product");
        let mut out = BitMatrix::zeros(self.rows, rhs.rows);
        for i in 0..self.rows {
            let a = self.row_words(i);
            for j in 0..rhs.rows {
                let parity = a
                    .iter()
                    .zip(rhs.row_words(j))
                    .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones());
                if parity & 1 == 1 {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * x`.
    ///
    /// # Panics
    ///
    /// Panics if `x.len() != self.cols()`.
    pub fn mat_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "dimension mismatch in product");
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    /// Row combination `coeffs^T * self`: the XOR of the rows selected by
    /// the nonzero coordinates of `coeffs`.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs.len() != self.rows()`.
    pub fn row_combination(&self, coeffs: &BitVector) -> BitVector {
        assert_eq!(coeffs.len(), self.rows, "dimension mismatch in combination");
        let mut out = BitVector::zeros(self.cols);
        for i in coeffs.iter_ones() {
            for (d, s) in out.words_mut().iter_mut().zip(self.row_words(i)) {
                *d ^= s;
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row(i).iter_ones() {
                out.set(j, i, true);
            }
        }
        out
    }

    /// Submatrix of the columns indexed by `s`, preserving the order of `s`.
    ///
    /// # Panics
    ///
    /// Panics if an index is out of range.
    pub fn select_columns(&self, s: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, s.len());
        for (jj, &j) in s.iter().enumerate() {
            assert!(j < self.cols, "column index {j} out of range");
            for i in 0..self.rows {
                if self.get(i, j) {
                    out.set(i, jj, true);
                }
            }
        }
        out
    }

    /// Submatrix of the rows indexed by `s`, preserving the order of `s`.
    ///
    /// # Panics
    ///
    /// Panics if an index is out of range.
    pub fn select_rows(&self, s: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(s.len(), self.cols);
        for (ii, &i) in s.iter().enumerate() {
            assert!(i < self.rows, "row index {i} out of range");
            out.row_words_mut(ii).copy_from_slice(self.row_words(i));
        }
        out
    }

    /// Serialise in the fixture text format: a `rows cols` header line, then
    /// one '0'/'1' string per row. Bit-exact.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            s.push_str(&self.row(i).to_string());
            s.push('\n');
        }
        s
    }

    /// Parse the fixture text format produced by [`BitMatrix::to_text`].
    pub fn from_text(text: &str) -> Result<BitMatrix, LabError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LabError::Parse("empty matrix text".into()))?;
        let mut parts = header.split_whitespace();
        let parse_dim = |p: Option<&str>| -> Result<usize, LabError> {
            p.and_then(|v| v.parse().ok())
                .ok_or_else(|| LabError::Parse(format!("bad matrix header {header:?}")))
        };
        let rows = parse_dim(parts.next())?;
        let cols = parse_dim(parts.next())?;
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| LabError::Parse(format!("missing row {i}")))?;
            let line = line.trim();
            if line.len() != cols {
                return Err(LabError::Parse(format!(
                    "row {i} has {} bits, expected {cols}",
                    line.len()
                )));
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(LabError::Parse(format!("invalid bit character {other:?}")))
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})\n{}", self.rows, self.cols, self)
    }
}

impl FromStr for BitMatrix {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BitMatrix::from_text(s)
    }
}

/// Uniformly random matrix (each entry an independent fair bit).
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for i in 0..rows {
        for w in m.row_words_mut(i) {
            *w = rng.random();
        }
        let mask = tail_mask(cols);
        if let Some(last) = m.row_words_mut(i).last_mut() {
            *last &= mask;
        }
    }
    m
}

/// Random invertible `m x m` matrix, by rejection sampling random matrices
/// until one has full rank (expected fewer than four attempts). Every
/// invertible matrix has positive probability; the distribution is not
/// uniform over GL(m, 2) and does not need to be.
pub fn random_invertible<R: Rng + ?Sized>(m: usize, rng: &mut R) -> BitMatrix {
    assert!(m >= 1);
    loop {
        let cand = random_matrix(m, m, rng);
        if cand.rank() == m {
            return cand;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mat(text: &str) -> BitMatrix {
        BitMatrix::from_text(text).unwrap()
    }

    #[test]
    fn rank_identity_and_duplicates() {
        assert_eq!(BitMatrix::identity(8).rank(), 8);
        assert_eq!(mat("2 2\n11\n11").rank(), 1);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rref_examples() {
        let (r, p) = BitMatrix::identity(4).rref();
        assert_eq!(r, BitMatrix::identity(4));
        assert_eq!(p, vec![0, 1, 2, 3]);

        let (r, p) = BitMatrix::zeros(2, 3).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());

        let (r, p) = mat("2 3\n110\n011").rref();
        assert_eq!(r, mat("2 3\n101\n011"));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b: BitVector = "1011".parse().unwrap();
        let x = BitMatrix::identity(4).solve_any(&b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_underdetermined_gives_valid_witness() {
        let a = mat("1 2\n11");
        let b: BitVector = "1".parse().unwrap();
        let x = a.solve_any(&b).unwrap();
        assert_eq!(a.mat_vec(&x), b);
    }

    #[test]
    fn solve_inconsistent_is_none() {
        let a = mat("2 1\n1\n1");
        let b: BitVector = "10".parse().unwrap();
        assert!(a.solve_any(&b).is_none());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = BitMatrix::identity(5).kernel_basis();
        assert_eq!(k.rows(), 0);
        assert_eq!(k.cols(), 5);
    }

    #[test]
    fn kernel_of_parity_row() {
        let k = mat("1 2\n11").kernel_basis();
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0).to_string(), "11");
    }

    #[test]
    fn product_with_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(5, 9, &mut rng);
        assert_eq!(a.mat_mul(&BitMatrix::identity(9)), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn mul_transpose_matches_explicit_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(6, 70, &mut rng);
        let b = random_matrix(4, 70, &mut rng);
        assert_eq!(a.mul_transpose(&b), a.mat_mul(&b.transpose()));
    }

    #[test]
    fn hadamard_examples() {
        let u: BitVector = "1100".parse().unwrap();
        let v: BitVector = "1010".parse().unwrap();
        assert_eq!(u.hadamard(&v).to_string(), "1000");
        assert_eq!(u.hadamard(&BitVector::ones(4)), u);
        assert_eq!(u.hadamard(&u), u);
    }

    #[test]
    fn select_preserves_order() {
        let a = mat("2 3\n101\n011");
        assert_eq!(a.select_columns(&[2, 0]), mat("2 2\n11\n10"));
        assert_eq!(a.select_rows(&[1]), mat("1 3\n011"));
    }

    #[test]
    fn random_invertible_has_full_rank_and_is_reproducible() {
        for m in 1..=12 {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let a = random_invertible(m, &mut rng);
            assert_eq!(a.rank(), m);
            let mut rng2 = ChaCha8Rng::seed_from_u64(99);
            assert_eq!(random_invertible(m, &mut rng2), a);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_invertible(1, &mut rng), BitMatrix::identity(1));
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_matrix(7, 65, &mut rng);
        assert_eq!(BitMatrix::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn from_text_rejects_garbage() {
        assert!(BitMatrix::from_text("").is_err());
        assert!(BitMatrix::from_text("2 2\n10").is_err());
        assert!(BitMatrix::from_text("1 2\n1x").is_err());
    }

    #[test]
    fn iter_ones_crosses_word_boundary() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(63, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.weight(), 4);
    }
}
