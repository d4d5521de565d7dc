//! Path coherence, the M/N/K solution-space parameterization, and uniform
//! sampling or exhaustive enumeration of admissible paths.
//!
//! For a system `A_x·x ⊕ A_a·a ⊕ t = b` the admissible paths of a consistent
//! amplitude form an affine space of dimension `h − rk(A_x)`; that dimension
//! is the circuit's path coherence `pc`. The same number is recovered
//! independently as the rank of the `K` block of the generalized-inverse
//! parameterization `x = M·a ⊕ N·b ⊕ K·w'`, and `path_coherence` asserts
//! both routes agree.

use crate::gf2::{BitMatrix, BitVector};
use crate::sop::{AmplitudeInstance, PathSystem};
use rand::Rng;
use thiserror::Error;

/// Default bound on enumerable kernel dimensions (2^24 ≈ 16M paths).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("amplitude instance is inconsistent: no admissible path")]
    Inconsistent,
    #[error("kernel dimension {dim} exceeds the enumeration cap {cap}")]
    CapExceeded { dim: usize, cap: usize },
}

/// Circuit-level coherence summary.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CoherenceReport {
    pub n: usize,
    pub h: usize,
    pub rank_ax: usize,
    pub pc: usize,
    pub rank_k: usize,
}

/// The matrices of `x = M·a ⊕ N·b ⊕ K·w'` over all `w' ∈ F₂^{n+h}`.
#[derive(Clone, Debug)]
pub struct MnkParam {
    pub m: BitMatrix,
    pub n: BitMatrix,
    pub k: BitMatrix,
}

/// Computes `pc = h − rk(A_x)` and cross-checks it against `rk(K)`.
pub fn path_coherence(ps: &PathSystem) -> CoherenceReport {
    let rank_ax = ps.a_x.rank();
    let pc = ps.h - rank_ax;
    let rank_k = parameterize_mnk(ps).k.rank();
    assert_eq!(
        rank_k, pc,
        "rank of K must equal h - rank(A_x) (h = {}, rank_ax = {rank_ax})",
        ps.h
    );
    CoherenceReport {
        n: ps.n,
        h: ps.h,
        rank_ax,
        pc,
        rank_k,
    }
}

/// Builds the `M`, `N`, `K` parameterization of the solution space from
/// generalized inverses of the block system `A = [A_x | A_a]`.
///
/// `A^g` is assembled blockwise from generalized inverses of `A_x` and of
/// `Y = (I − A_x·A_x^g)·A_a`, which keeps the elimination structure explicit;
/// the result is checked to satisfy `A·A^g·A = A`. The same structure makes
/// `K` collapse to `[I_h − A_x^g·A_x | 0]`, which is asserted too.
pub fn parameterize_mnk(ps: &PathSystem) -> MnkParam {
    let n = ps.n;
    let h = ps.h;
    let a = ps.a_x.hstack(&ps.a_a);

    let axg = ps.a_x.generalized_inverse();
    let e_ax = BitMatrix::identity(n).xor(&ps.a_x.mul(&axg));
    let y = e_ax.mul(&ps.a_a);
    let yg = y.generalized_inverse();
    let yg_eax = yg.mul(&e_ax);
    // A^g = [ A_x^g ⊕ A_x^g·A_a·Y^g·E_{A_x} ; Y^g·E_{A_x} ]
    let top = axg.xor(&axg.mul(&ps.a_a).mul(&yg_eax));
    let ag = top.vstack(&yg_eax);
    debug_assert_eq!(
        a.mul(&ag).mul(&a),
        a,
        "blockwise A^g is not a generalized inverse"
    );

    let id_nh = BitMatrix::identity(n + h);
    let proj = id_nh.xor(&ag.mul(&a)); // I − A^g·A

    let s = BitMatrix::identity(n).xor(&yg.mul(&y));
    let sg = s.generalized_inverse();
    let bg = BitMatrix::zeros(h, n).vstack(&sg);
    let b = BitMatrix::zeros(n, h)
        .hstack(&BitMatrix::identity(n))
        .mul(&proj);
    debug_assert_eq!(
        b.mul(&bg).mul(&b),
        b,
        "B^g is not a generalized inverse of B"
    );

    let z = BitMatrix::identity(h).hstack(&BitMatrix::zeros(h, n));
    let zbar = BitMatrix::zeros(n, h).hstack(&BitMatrix::identity(n));

    let m = z.mul(&proj).mul(&bg);
    let n_mat = z.mul(&id_nh.xor(&proj.mul(&bg).mul(&zbar))).mul(&ag);
    let k = z.mul(&proj).mul(&id_nh.xor(&bg.mul(&b)));

    // The left block of K is the kernel projector of A_x, the right is zero.
    let k_simplified = BitMatrix::identity(h)
        .xor(&axg.mul(&ps.a_x))
        .hstack(&BitMatrix::zeros(h, n));
    assert_eq!(k, k_simplified, "K must reduce to [I_h - A_x^g·A_x | 0]");

    MnkParam { m, n: n_mat, k }
}

/// Draws one admissible path uniformly: the particular solution XORed with
/// an independent fair-coin combination of the kernel basis.
pub fn sample_solution(
    inst: &AmplitudeInstance<'_>,
    rng: &mut impl Rng,
) -> Result<BitVector, SolutionError> {
    let Some(particular) = &inst.particular else {
        return Err(SolutionError::Inconsistent);
    };
    let mut x = particular.clone();
    for v in &inst.kernel {
        if rng.gen::<bool>() {
            x.xor_assign(v);
        }
    }
    Ok(x)
}

/// Iterator over all `2^k` admissible paths of a consistent instance, in
/// Gray-code order over kernel coefficients: successive paths differ by a
/// single kernel vector.
pub struct SolutionIter<'a> {
    current: BitVector,
    kernel: &'a [BitVector],
    index: u64,
    total: u64,
}

impl Iterator for SolutionIter<'_> {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index == self.total {
            return None;
        }
        if self.index > 0 {
            let flip = self.index.trailing_zeros() as usize;
            self.current.xor_assign(&self.kernel[flip]);
        }
        self.index += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SolutionIter<'_> {}

/// Enumerates the full solution set under the default cap.
pub fn enumerate_solutions<'a>(
    inst: &'a AmplitudeInstance<'_>,
) -> Result<SolutionIter<'a>, SolutionError> {
    enumerate_solutions_capped(inst, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_solutions_capped<'a>(
    inst: &'a AmplitudeInstance<'_>,
    cap: usize,
) -> Result<SolutionIter<'a>, SolutionError> {
    let Some(particular) = &inst.particular else {
        return Err(SolutionError::Inconsistent);
    };
    let dim = inst.kernel.len();
    if dim > cap {
        return Err(SolutionError::CapExceeded { dim, cap });
    }
    Ok(SolutionIter {
        current: particular.clone(),
        kernel: &inst.kernel,
        index: 0,
        total: 1u64 << dim,
    })
}
