//! Exact combinatorics of system-matrix ranks over finite fields.
//!
//! For circuits alternating uniformly random invertible classical layers
//! with single-qubit Hadamards, the distribution of `rk(A_x)` has a closed
//! form built from q-calculus: surjection counts `T_q(n,k) = ∏(q^n − q^i)`,
//! the composition-weighted Stirling-like numbers
//! `S̃_q(h,r) = Σ_{b ∈ B_{r,h−r}} ∏ (q^j − 1)^{b_j}`, and the per-step count
//! `P_q(n,i)` of layer choices that keep the rank at `i`. The number of
//! layer tuples reaching rank `r` after `h` steps is
//!
//! ```text
//!     Q_{n,h,r} = T_q(n,n)^{h+1} · (q^n − 1)^{−h} · S̃_q(h,r) · T_q(n,r)
//! ```
//!
//! with the division exact over the integers. Everything here is computed
//! in arbitrary precision, probabilities as exact rationals; floats appear
//! only in the empirical sampler's reported frequencies.
//!
//! The formulas are evaluated for any integer `q ≥ 2`; they count matrix
//! tuples when `q` is a prime power. Sampling is implemented for `q = 2`
//! only, where the system matrix of an alternating circuit is assembled
//! directly as the matrix product over GF(2).

use crate::gf2::BitMatrix;
use crate::par;
use num_bigint::BigInt;
pub use num_bigint::BigUint;
pub use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DomainError {
    #[error("subspace dimension {k} exceeds ambient dimension {n}")]
    DimensionTooLarge { k: u64, n: u64 },
    #[error("rank {r} exceeds step count {h}")]
    RankTooLarge { r: u64, h: u64 },
    #[error("rank index {i} out of range 1..={n}")]
    RankIndexOutOfRange { i: u64, n: u64 },
}

fn qu(q: u64) -> BigUint {
    BigUint::from(q)
}

fn qpow(q: u64, e: u64) -> BigUint {
    qu(q).pow(u32::try_from(e).expect("exponent fits in u32"))
}

/// Gaussian binomial coefficient: the number of `k`-dimensional subspaces
/// of an `n`-dimensional space over `F_q`.
pub fn q_binomial(n: u64, k: u64, q: u64) -> Result<BigUint, DomainError> {
    assert!(q >= 2, "q must be at least 2");
    if k > n {
        return Err(DomainError::DimensionTooLarge { k, n });
    }
    let mut numer = BigUint::one();
    let mut denom = BigUint::one();
    for i in 1..=k {
        numer *= qpow(q, n - k + i) - BigUint::one();
        denom *= qpow(q, i) - BigUint::one();
    }
    let (quot, rem) = num_integer_div_rem(&numer, &denom);
    debug_assert!(rem.is_zero(), "Gaussian coefficient is an integer");
    Ok(quot)
}

fn num_integer_div_rem(a: &BigUint, b: &BigUint) -> (BigUint, BigUint) {
    (a / b, a % b)
}

/// Number of surjective linear maps from `F_q^n` onto a fixed
/// `k`-dimensional space: `∏_{i<k} (q^n − q^i)`. For `k = n` this is the
/// order of `GL_n(F_q)`.
pub fn t_surjections(n: u64, k: u64, q: u64) -> Result<BigUint, DomainError> {
    assert!(q >= 2, "q must be at least 2");
    if k > n {
        return Err(DomainError::DimensionTooLarge { k, n });
    }
    Ok(surjection_product(n, k, q))
}

/// As `t_surjections`, but evaluating to zero past `k = n` (the product
/// acquires a zero factor) instead of erroring; used where the closed-form
/// sum ranges over all ranks.
fn surjection_product(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let qn = qpow(q, n);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= &qn - qpow(q, i);
    }
    acc
}

/// Composition-weighted rank-history count
/// `S̃_q(h,r) = Σ_{b ∈ B_{r,h−r}} ∏_{j=1}^{r} (q^j − 1)^{b_j}`, summing over
/// nonnegative compositions of `h − r` into `r` parts.
///
/// Computed by dynamic programming over (parts, remaining) rather than
/// literal composition enumeration. Conventions: 1 for `r = h` (the single
/// empty composition), 0 for `r = 0 < h`.
pub fn stirling_tilde(h: u64, r: u64, q: u64) -> Result<BigUint, DomainError> {
    assert!(q >= 2, "q must be at least 2");
    if r > h {
        return Err(DomainError::RankTooLarge { r, h });
    }
    let budget = (h - r) as usize;
    // dp[s] = sum over compositions of s into the parts seen so far.
    let mut dp = vec![BigUint::zero(); budget + 1];
    dp[0] = BigUint::one();
    for j in 1..=r {
        let weight = qpow(q, j) - BigUint::one();
        // dp_j[s] = dp_{j-1}[s] + weight · dp_j[s-1]
        for s in 1..=budget {
            let carry = &dp[s - 1] * &weight;
            dp[s] += carry;
        }
    }
    Ok(dp[budget].clone())
}

/// Count of layer choices that keep the rank at `i`:
/// `P_q(n,i) = (q^i − 1)·q^{n−1}·T_q(n−1,n−1)`.
pub fn stay_count(n: u64, i: u64, q: u64) -> Result<BigUint, DomainError> {
    if i == 0 || i > n {
        return Err(DomainError::RankIndexOutOfRange { i, n });
    }
    let glnm1 = surjection_product(n - 1, n - 1, q);
    Ok((qpow(q, i) - BigUint::one()) * qpow(q, n - 1) * glnm1)
}

/// Exact distribution of `rk(A_x)` over uniformly random invertible layer
/// tuples: `counts[r]` is the number of `(h+1)`-tuples reaching rank `r`,
/// and `total = |GL_n(F_q)|^{h+1}`.
#[derive(Clone, Debug)]
pub struct RankDistribution {
    pub n: u64,
    pub h: u64,
    pub q: u64,
    /// Indexed by rank `r = 0..=h`; zero beyond `min(n, h)`.
    pub counts: Vec<BigUint>,
    pub total: BigUint,
}

impl RankDistribution {
    pub fn probability(&self, r: u64) -> BigRational {
        let count = self
            .counts
            .get(r as usize)
            .cloned()
            .unwrap_or_else(BigUint::zero);
        BigRational::new(BigInt::from(count), BigInt::from(self.total.clone()))
    }

    /// `Pr[rk ≥ t]` as an exact rational.
    pub fn prob_rank_ge(&self, t: u64) -> BigRational {
        let sum: BigUint = self
            .counts
            .iter()
            .enumerate()
            .filter(|(r, _)| *r as u64 >= t)
            .map(|(_, c)| c.clone())
            .sum();
        BigRational::new(BigInt::from(sum), BigInt::from(self.total.clone()))
    }
}

/// Evaluates the closed form `Q_{n,h,r}` for every rank.
pub fn rank_counts(n: u64, h: u64, q: u64) -> RankDistribution {
    assert!(n >= 1, "n must be at least 1");
    assert!(q >= 2, "q must be at least 2");
    let gl = surjection_product(n, n, q);
    let total = gl.pow(u32::try_from(h + 1).expect("h fits in u32"));
    let qn_minus_1_pow_h = (qpow(q, n) - BigUint::one()).pow(u32::try_from(h).unwrap());
    let counts: Vec<BigUint> = (0..=h)
        .map(|r| {
            let stir = stirling_tilde(h, r, q).expect("r <= h by construction");
            let numer = &total * stir * surjection_product(n, r, q);
            let (quot, rem) = num_integer_div_rem(&numer, &qn_minus_1_pow_h);
            assert!(rem.is_zero(), "closed form must divide exactly");
            quot
        })
        .collect();
    debug_assert_eq!(
        counts.iter().cloned().sum::<BigUint>(),
        total,
        "rank counts must sum to the number of tuples"
    );
    RankDistribution {
        n,
        h,
        q,
        counts,
        total,
    }
}

/// `Pr[rk(A_x) ≥ t]` for the `(n, h, q)` ensemble, exact.
pub fn rank_cdf_ge(n: u64, h: u64, q: u64, t: u64) -> BigRational {
    rank_counts(n, h, q).prob_rank_ge(t)
}

/// Assembles the `n×(n+h)` system matrix of the alternating circuit
/// described by `h+1` invertible layer matrices: each step feeds the
/// previous outputs through a fixed wire shuffle that retires one output
/// into the path-variable block and injects the fresh Hadamard variable,
/// then applies the next layer. Path-variable columns come first, indexed
/// by Hadamard order; `layers` lists the last-applied layer first.
pub fn alternating_system_matrix(layers: &[BitMatrix]) -> BitMatrix {
    assert!(!layers.is_empty(), "need at least one layer");
    let n = layers[0].n_rows();
    for m in layers {
        assert_eq!(m.n_rows(), n);
        assert_eq!(m.n_cols(), n);
    }
    let mut acc = layers[0].clone();
    for (k, layer) in layers.iter().enumerate().skip(1) {
        let step = swap_delete_matrix(k, n).mul(&direct_sum(&BitMatrix::identity(k), layer));
        acc = acc.mul(&step);
    }
    acc
}

/// The `(n+k−1)×(n+k)` matrix that swaps entries `0` and `k` of a vector and
/// drops the first entry: `out[i] = in[i+1]` except `out[k−1] = in[0]`.
fn swap_delete_matrix(k: usize, n: usize) -> BitMatrix {
    let mut s = BitMatrix::zeros(n + k - 1, n + k);
    for i in 0..n + k - 1 {
        if i == k - 1 {
            s.set(i, 0, true);
        } else {
            s.set(i, i + 1, true);
        }
    }
    s
}

fn direct_sum(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let (ar, ac) = (a.n_rows(), a.n_cols());
    let (br, bc) = (b.n_rows(), b.n_cols());
    let mut out = BitMatrix::zeros(ar + br, ac + bc);
    for i in 0..ar {
        for j in a.row(i).iter_ones() {
            out.set(i, j, true);
        }
    }
    for i in 0..br {
        for j in b.row(i).iter_ones() {
            out.set(ar + i, ac + j, true);
        }
    }
    out
}

/// Samples `trials` random alternating circuits over GF(2) and returns the
/// observed frequency of each `rk(A_x)` value. Trials are keyed by a
/// counter-based stream, so the result is independent of thread count.
pub fn empirical_rank_dist(n: usize, h: usize, trials: u64, seed: u64) -> BTreeMap<usize, f64> {
    assert!(n >= 1);
    let width = h.min(n) + 1;
    let counts = par::accumulate(
        trials,
        || vec![0u64; width],
        |mut acc, trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let layers: Vec<BitMatrix> = (0..=h)
                .map(|_| BitMatrix::random_invertible(n, &mut rng))
                .collect();
            let a = alternating_system_matrix(&layers);
            let a_x = BitMatrix::from_rows(a.rows().iter().map(|r| r.slice(0..h)).collect(), h);
            acc[a_x.rank()] += 1;
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += y;
            }
            a
        },
    );
    counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(r, c)| (r, c as f64 / trials as f64))
        .collect()
}

/// One cell of the rank-probability grid.
#[derive(Clone, Debug)]
pub struct PlotPoint {
    pub n: u64,
    pub h: u64,
    pub prob: BigRational,
}

/// The grid of `Pr[rk(A_x) ≥ ⌈h/2⌉]` for `n = 1..=n_max`, `h = 0..=2n`,
/// at `q = 2`, exact.
pub fn plot_data(n_max: u64) -> Vec<PlotPoint> {
    assert!(n_max >= 1);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for h in 0..=2 * n {
            let t = h.div_ceil(2);
            rows.push(PlotPoint {
                n,
                h,
                prob: rank_cdf_ge(n, h, 2, t),
            });
        }
    }
    rows
}

/// Renders a nonnegative rational with a fixed number of decimal digits,
/// rounding half away from zero.
pub fn to_decimal_string(r: &BigRational, digits: usize) -> String {
    let numer = r.numer().magnitude().clone();
    let denom = r.denom().magnitude().clone();
    assert!(
        !r.numer().sign().eq(&num_bigint::Sign::Minus),
        "value must be nonnegative"
    );
    let scale = BigUint::from(10u32).pow(u32::try_from(digits).unwrap());
    let scaled = (&numer * &scale * 2u32 + &denom) / (&denom * 2u32);
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let mut frac = frac_part.to_string();
    while frac.len() < digits {
        frac.insert(0, '0');
    }
    format!("{int_part}.{frac}")
}
