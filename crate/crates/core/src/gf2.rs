//! Bit-packed dense linear algebra over GF(2).
//!
//! Vectors and matrices are stored row-major in 64-bit words, bit `i` of a
//! row living at bit `i % 64` of word `i / 64` (little-endian bit order
//! within a word). Trailing bits beyond the logical length are kept at zero
//! so that whole-word operations (XOR, popcount) need no masking on read.
//!
//! The module provides the usual elimination-based kit: rank, reduced row
//! echelon form with a recorded row-operation matrix, kernel bases,
//! generalized inverses satisfying `M·G·M = M`, affine solving, and uniform
//! sampling of invertible matrices by rejection.

use rand::RngCore;
use std::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A dense vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// Creates a zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// Creates a vector with a single bit set.
    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters; character `i` is bit `i`.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    /// Draws a uniformly random vector.
    pub fn random(len: usize, rng: &mut impl RngCore) -> Self {
        let mut words = vec![0u64; word_count(len)];
        for w in words.iter_mut() {
            *w = rng.next_u64();
        }
        let mut v = Self { len, words };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// XOR-assigns `other` into `self` (vector addition over GF(2)).
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor_assign");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2): parity of the AND of the two vectors.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copy of the bits in `range`, as a fresh vector.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        assert!(range.end <= self.len);
        let mut out = Self::zeros(range.len());
        for (j, i) in range.enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bitstring())
    }
}

/// Result of Gauss–Jordan elimination: `transform · original = reduced`,
/// with `reduced` in reduced row echelon form and `pivots[j]` the column of
/// the `j`-th pivot.
pub struct Rref {
    pub reduced: BitMatrix,
    pub transform: BitMatrix,
    pub pivots: Vec<usize>,
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self { rows, cols }
    }

    /// Builds a matrix from rows of `0`/`1` values, for small literals.
    pub fn from_dense(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| BitVector::from_bits(&r.iter().map(|&b| b != 0).collect::<Vec<_>>()))
            .collect();
        Self::from_rows(rows, cols)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut BitVector {
        &mut self.rows[r]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn column_is_zero(&self, c: usize) -> bool {
        self.rows.iter().all(|r| !r.get(c))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                out.rows[j].set(i, true);
            }
        }
        out
    }

    /// Matrix product over GF(2); `self` is `m×k`, `other` `k×n`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows.len(), "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows.len(), other.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for k in row.iter_ones() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        out
    }

    /// Matrix–vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let mut out = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Entrywise XOR (matrix addition over GF(2)).
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.rows.len(), other.rows.len());
        assert_eq!(self.cols, other.cols);
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows.len(), other.rows.len());
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.concat(b))
            .collect();
        Self::from_rows(rows, self.cols + other.cols)
    }

    /// Vertical concatenation of `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::from_rows(rows, self.cols)
    }

    /// Returns a copy with the listed columns removed, order preserved.
    pub fn delete_columns(&self, drop: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|c| !drop.contains(c)).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| BitVector::from_bits(&keep.iter().map(|&c| r.get(c)).collect::<Vec<_>>()))
            .collect();
        Self::from_rows(rows, keep.len())
    }

    /// Row rank over GF(2), by Gaussian elimination on packed words.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == rows.len() {
                break;
            }
            let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(pivot_row, found);
            let pivot = rows[pivot_row].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r > pivot_row && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// Gauss–Jordan elimination, recording the row operations.
    pub fn rref(&self) -> Rref {
        let mut reduced = self.clone();
        let mut transform = Self::identity(self.rows.len());
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == reduced.rows.len() {
                break;
            }
            let Some(found) = (pivot_row..reduced.rows.len()).find(|&r| reduced.rows[r].get(col))
            else {
                continue;
            };
            reduced.rows.swap(pivot_row, found);
            transform.rows.swap(pivot_row, found);
            let pivot = reduced.rows[pivot_row].clone();
            let tpivot = transform.rows[pivot_row].clone();
            for r in 0..reduced.rows.len() {
                if r != pivot_row && reduced.rows[r].get(col) {
                    reduced.rows[r].xor_assign(&pivot);
                    transform.rows[r].xor_assign(&tpivot);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref {
            reduced,
            transform,
            pivots,
        }
    }

    /// A basis of the right kernel `{v : M·v = 0}`, one vector per free
    /// column of the reduced form. Deterministic for a fixed matrix.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (j, &p) in pivots.iter().enumerate() {
                if reduced.rows[j].get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// A generalized inverse `G` with `M·G·M = M`, of shape `cols×rows`.
    ///
    /// Built from the full-rank factorization exposed by the reduced row
    /// echelon form: with `E·M = R` and pivot columns `p_1..p_r`, the matrix
    /// whose row `p_j` equals row `j` of `E` (all other rows zero) is a
    /// generalized inverse. The construction is canonical so repeated calls
    /// are bit-identical.
    pub fn generalized_inverse(&self) -> BitMatrix {
        let Rref {
            transform, pivots, ..
        } = self.rref();
        let mut g = BitMatrix::zeros(self.cols, self.rows.len());
        for (j, &p) in pivots.iter().enumerate() {
            g.rows[p] = transform.rows[j].clone();
        }
        g
    }

    /// A particular solution of `M·x = rhs`, or `None` when inconsistent.
    /// Consistency is decided by substituting the candidate `G·rhs` back.
    pub fn solve(&self, rhs: &BitVector) -> Option<BitVector> {
        assert_eq!(rhs.len(), self.rows.len(), "rhs length mismatch");
        let g = self.generalized_inverse();
        let x = g.mul_vec(rhs);
        if self.mul_vec(&x) == *rhs {
            Some(x)
        } else {
            None
        }
    }

    /// Draws a matrix with uniformly random entries.
    pub fn random(rows: usize, cols: usize, rng: &mut impl RngCore) -> Self {
        Self::from_rows(
            (0..rows).map(|_| BitVector::random(cols, rng)).collect(),
            cols,
        )
    }

    /// Draws a uniformly random element of `GL_n(F_2)` by rejection
    /// sampling: uniform `n×n` matrices are invertible with probability
    /// `> 0.288` for every `n`, so a handful of draws suffice and the
    /// accepted distribution is exactly uniform.
    pub fn random_invertible(n: usize, rng: &mut impl RngCore) -> Self {
        assert!(n >= 1, "random_invertible requires n >= 1");
        loop {
            let m = Self::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {}", r.to_bitstring())?;
        }
        write!(f, "]")
    }
}

/// An affine transformation `v ↦ matrix·v ⊕ offset` over GF(2).
///
/// With an invertible matrix this is the basis action of a reversible
/// classical gate sequence; the offset carries bit flips.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    pub matrix: BitMatrix,
    pub offset: BitVector,
}

impl AffineMap {
    pub fn new(matrix: BitMatrix, offset: BitVector) -> Self {
        assert_eq!(matrix.n_rows(), offset.len(), "offset length mismatch");
        Self { matrix, offset }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: BitMatrix::identity(n),
            offset: BitVector::zeros(n),
        }
    }

    pub fn apply(&self, v: &BitVector) -> BitVector {
        let mut out = self.matrix.mul_vec(v);
        out.xor_assign(&self.offset);
        out
    }

    /// The composite map applying `other` first, then `self`.
    pub fn after(&self, other: &Self) -> Self {
        let matrix = self.matrix.mul(&other.matrix);
        let mut offset = self.matrix.mul_vec(&other.offset);
        offset.xor_assign(&self.offset);
        Self { matrix, offset }
    }

    pub fn is_invertible(&self) -> bool {
        let n = self.matrix.n_rows();
        self.matrix.n_cols() == n && self.matrix.rank() == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn naive_rank(m: &BitMatrix) -> usize {
        // Per-bit elimination on a Vec<Vec<bool>> copy, no packing.
        let mut a: Vec<Vec<bool>> = (0..m.n_rows())
            .map(|i| (0..m.n_cols()).map(|j| m.get(i, j)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.n_cols() {
            let Some(found) = (rank..a.len()).find(|&r| a[r][col]) else {
                continue;
            };
            a.swap(rank, found);
            let pivot = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && row[col] {
                    for (x, p) in row.iter_mut().zip(&pivot) {
                        *x ^= p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_identity() {
        assert_eq!(BitMatrix::identity(2).rank(), 2);
    }

    #[test]
    fn rank_duplicate_rows() {
        let m = BitMatrix::from_dense(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(BitMatrix::zeros(2, 3).rank(), 0);
    }

    #[test]
    fn rank_matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let rows = 1 + (rng.next_u64() % 64) as usize;
            let cols = 1 + (rng.next_u64() % 64) as usize;
            let m = BitMatrix::random(rows, cols, &mut rng);
            assert_eq!(m.rank(), naive_rank(&m));
        }
    }

    #[test]
    fn generalized_inverse_identity() {
        let g = BitMatrix::identity(3).generalized_inverse();
        assert_eq!(g, BitMatrix::identity(3));
    }

    #[test]
    fn generalized_inverse_rank_one() {
        let m = BitMatrix::from_dense(&[&[1, 1], &[0, 0]]);
        let g = m.generalized_inverse();
        assert_eq!(m.mul(&g).mul(&m), m);
        assert_eq!(g, BitMatrix::from_dense(&[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn generalized_inverse_zero() {
        let m = BitMatrix::zeros(2, 3);
        let g = m.generalized_inverse();
        assert_eq!(g, BitMatrix::zeros(3, 2));
        assert_eq!(m.mul(&g).mul(&m), m);
    }

    #[test]
    fn generalized_inverse_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let rows = 1 + (rng.next_u64() % 12) as usize;
            let cols = 1 + (rng.next_u64() % 12) as usize;
            let m = BitMatrix::random(rows, cols, &mut rng);
            let g = m.generalized_inverse();
            assert_eq!(g.n_rows(), cols);
            assert_eq!(g.n_cols(), rows);
            assert_eq!(m.mul(&g).mul(&m), m);
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(BitMatrix::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_parity_row() {
        let m = BitMatrix::from_dense(&[&[1, 1]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], BitVector::from_bits(&[true, true]));
    }

    #[test]
    fn kernel_of_zero_row() {
        let m = BitMatrix::zeros(1, 2);
        assert_eq!(m.kernel_basis().len(), 2);
    }

    #[test]
    fn kernel_vectors_annihilate_and_are_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let rows = 1 + (rng.next_u64() % 10) as usize;
            let cols = 1 + (rng.next_u64() % 10) as usize;
            let m = BitMatrix::random(rows, cols, &mut rng);
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), cols - m.rank());
            for v in &basis {
                assert!(m.mul_vec(v).is_zero());
            }
            if !basis.is_empty() {
                let stacked = BitMatrix::from_rows(basis.clone(), cols);
                assert_eq!(stacked.rank(), basis.len());
            }
        }
    }

    #[test]
    fn solve_identity() {
        let m = BitMatrix::identity(2);
        let rhs = BitVector::from_bits(&[true, false]);
        assert_eq!(m.solve(&rhs), Some(rhs));
    }

    #[test]
    fn solve_underdetermined() {
        let m = BitMatrix::from_dense(&[&[1, 1]]);
        let rhs = BitVector::from_bits(&[true]);
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.mul_vec(&x), rhs);
    }

    #[test]
    fn solve_inconsistent() {
        let m = BitMatrix::zeros(1, 1);
        let rhs = BitVector::from_bits(&[true]);
        assert_eq!(m.solve(&rhs), None);
    }

    #[test]
    fn solve_agrees_with_augmented_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = 1 + (rng.next_u64() % 8) as usize;
            let cols = 1 + (rng.next_u64() % 8) as usize;
            let m = BitMatrix::random(rows, cols, &mut rng);
            let rhs = BitVector::random(rows, &mut rng);
            let augmented = m.hstack(&BitMatrix::from_rows(
                rhs.iter_ones()
                    .fold(BitMatrix::zeros(rows, 1), |mut acc, i| {
                        acc.set(i, 0, true);
                        acc
                    })
                    .rows()
                    .to_vec(),
                1,
            ));
            let solvable = augmented.rank() == m.rank();
            match m.solve(&rhs) {
                Some(x) => {
                    assert!(solvable);
                    assert_eq!(m.mul_vec(&x), rhs);
                }
                None => assert!(!solvable),
            }
        }
    }

    #[test]
    fn random_invertible_n1_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let m = BitMatrix::random_invertible(1, &mut rng);
            assert_eq!(m, BitMatrix::identity(1));
        }
    }

    #[test]
    fn random_invertible_has_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=16 {
            let m = BitMatrix::random_invertible(n, &mut rng);
            assert_eq!(m.rank(), n);
        }
    }

    #[test]
    fn random_invertible_uniform_over_gl2() {
        // GL_2(F_2) has exactly 6 elements; chi-squared uniformity over 10^4
        // draws, 5 degrees of freedom, significance 0.001 (critical 20.515).
        let all: Vec<BitMatrix> = (0..16u32)
            .map(|bits| {
                BitMatrix::from_dense(&[
                    &[(bits & 1) as u8, ((bits >> 1) & 1) as u8],
                    &[((bits >> 2) & 1) as u8, ((bits >> 3) & 1) as u8],
                ])
            })
            .filter(|m| m.rank() == 2)
            .collect();
        assert_eq!(all.len(), 6);

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let draws = 10_000usize;
        let mut counts = [0usize; 6];
        for _ in 0..draws {
            let m = BitMatrix::random_invertible(2, &mut rng);
            let idx = all.iter().position(|x| *x == m).unwrap();
            counts[idx] += 1;
        }
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(
            chi2 < 20.515,
            "chi-squared {chi2} exceeds the 0.001 critical value"
        );
    }

    #[test]
    fn bitvector_tail_bits_stay_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for len in [1, 63, 64, 65, 130] {
            let v = BitVector::random(len, &mut rng);
            assert!(v.count_ones() <= len);
            let mut w = v.clone();
            w.xor_assign(&v);
            assert!(w.is_zero());
        }
    }

    #[test]
    fn bitstring_round_trip() {
        let v = BitVector::from_bitstring("01101").unwrap();
        assert_eq!(v.to_bitstring(), "01101");
        assert!(v.get(1) && v.get(2) && v.get(4));
        assert!(BitVector::from_bitstring("01x").is_none());
    }

    #[test]
    fn affine_map_composition_matches_pointwise_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let n = 1 + (rng.next_u64() % 6) as usize;
            let f = AffineMap::new(
                BitMatrix::random_invertible(n, &mut rng),
                BitVector::random(n, &mut rng),
            );
            let g = AffineMap::new(
                BitMatrix::random_invertible(n, &mut rng),
                BitVector::random(n, &mut rng),
            );
            assert!(f.is_invertible());
            let composite = f.after(&g);
            let v = BitVector::random(n, &mut rng);
            assert_eq!(composite.apply(&v), f.apply(&g.apply(&v)));
            let id = AffineMap::identity(n);
            assert_eq!(id.apply(&v), v);
        }
    }
}
