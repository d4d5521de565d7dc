//! Exact and Monte-Carlo evaluation of amplitudes and marginals.
//!
//! Every admissible path contributes `ω₈^m / √2^h`, so an amplitude is fully
//! described by how many paths land on each of the eight phase values. Exact
//! mode enumerates the solution space and keeps those eight counts as exact
//! integers; Monte-Carlo mode estimates the same expectation from uniform
//! path samples, with the sample budget set by a two-sided Hoeffding bound
//! on the real and imaginary components separately (per-component error
//! `ε/√2`, per-component failure `δ/2`), giving
//! `N = ⌈4·r²·ln(4/δ)/ε²⌉` with estimator range `r = 2^{pc − h/2}`.
//!
//! Sampling is deterministic: the coin flips for sample `i` come from a
//! counter-based stream keyed by `(seed, i)`, so the result is bit-identical
//! for any number of worker threads, which merge integer tallies only.

use crate::circuit::{Circuit, InvalidK};
use crate::coherence::{enumerate_solutions_capped, SolutionError};
use crate::gf2::BitVector;
use crate::par;
use crate::sop::{encode, AmplitudeInstance};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
    Zero,
}

impl EstimateMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimateMode::Exact => "exact",
            EstimateMode::MonteCarlo => "monte_carlo",
            EstimateMode::Zero => "zero",
        }
    }
}

/// An amplitude (or marginal) value with its statistical contract.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub re: f64,
    pub im: f64,
    pub eps: f64,
    pub delta: f64,
    pub samples: u64,
    pub mode: EstimateMode,
    /// Per-instance path-coherence; absent when no path is admissible.
    pub pc: Option<usize>,
    /// Exact tallies of each ω₈ power, present in exact mode only.
    pub exact_counts: Option<[u64; 8]>,
}

impl Estimate {
    fn zero(eps: f64, delta: f64) -> Self {
        Estimate {
            re: 0.0,
            im: 0.0,
            eps,
            delta,
            samples: 0,
            mode: EstimateMode::Zero,
            pc: None,
            exact_counts: None,
        }
    }
}

/// `(re, im)` of `Σ_m counts[m]·ω₈^m`, with the dyadic and `1/√2` parts
/// combined once at the end.
fn omega_sum(counts: &[u64; 8]) -> (f64, f64) {
    let c = |i: usize| counts[i] as i128;
    let re_int = c(0) - c(4);
    let re_half = c(1) - c(3) - c(5) + c(7);
    let im_int = c(2) - c(6);
    let im_half = c(1) + c(3) - c(5) - c(7);
    (
        re_int as f64 + re_half as f64 / SQRT_2,
        im_int as f64 + im_half as f64 / SQRT_2,
    )
}

/// `2^{scale_log2} / √2^h`.
fn normalization(h: usize, scale_log2: i32) -> f64 {
    let whole = scale_log2 - (h as i32) / 2;
    let base = 2f64.powi(whole);
    if h % 2 == 1 {
        base / SQRT_2
    } else {
        base
    }
}

/// Exact amplitude by enumeration of the solution space, under the default
/// enumeration cap.
pub fn exact_amplitude(inst: &AmplitudeInstance<'_>) -> Result<Estimate, SolutionError> {
    exact_amplitude_capped(inst, crate::coherence::DEFAULT_ENUMERATION_CAP)
}

pub fn exact_amplitude_capped(
    inst: &AmplitudeInstance<'_>,
    cap: usize,
) -> Result<Estimate, SolutionError> {
    if !inst.consistent {
        return Ok(Estimate::zero(0.0, 0.0));
    }
    let dim = inst.kernel.len();
    if dim > cap {
        return Err(SolutionError::CapExceeded { dim, cap });
    }
    let mut counts = [0u64; 8];
    for x in enumerate_solutions_capped(inst, cap)? {
        counts[inst.eval_phase(&x) as usize] += 1;
    }
    let (sre, sim) = omega_sum(&counts);
    let norm = normalization(inst.system.h, inst.system.scale_log2);
    Ok(Estimate {
        re: sre * norm,
        im: sim * norm,
        eps: 0.0,
        delta: 0.0,
        samples: 0,
        mode: EstimateMode::Exact,
        pc: Some(dim),
        exact_counts: Some(counts),
    })
}

/// Hoeffding sample budget `⌈4·2^{2pc−h}·ln(4/δ)/ε²⌉`.
pub fn sample_count(pc: usize, h: usize, eps: f64, delta: f64) -> u64 {
    assert!(eps > 0.0 && eps < 1.0, "eps must be in (0,1)");
    assert!(delta > 0.0 && delta < 1.0, "delta must be in (0,1)");
    let range_sq = 2f64.powi(2 * pc as i32 - h as i32);
    (4.0 * range_sq * (4.0 / delta).ln() / (eps * eps)).ceil() as u64
}

/// Estimates the amplitude to within `eps` with failure probability at most
/// `delta`. Enumerates exactly instead whenever the full solution space is
/// no larger than the sample budget, which is strictly better at the same
/// cost. Deterministic for a fixed `(seed, instance)`.
pub fn mc_estimate(inst: &AmplitudeInstance<'_>, eps: f64, delta: f64, seed: u64) -> Estimate {
    mc_estimate_inner(inst, eps, delta, seed, false)
}

/// Runs the sampling path unconditionally, even where enumeration would be
/// cheaper. Intended for validating the statistical contract and for
/// benchmarks; results carry the same guarantee as `mc_estimate`.
pub fn mc_estimate_forced(
    inst: &AmplitudeInstance<'_>,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Estimate {
    mc_estimate_inner(inst, eps, delta, seed, true)
}

fn mc_estimate_inner(
    inst: &AmplitudeInstance<'_>,
    eps: f64,
    delta: f64,
    seed: u64,
    force_sampling: bool,
) -> Estimate {
    if !inst.consistent {
        return Estimate::zero(eps, delta);
    }
    let pc = inst.kernel.len();
    let h = inst.system.h;
    let n_samples = sample_count(pc, h, eps, delta);

    if !force_sampling && pc < 63 && (1u64 << pc) <= n_samples {
        let mut est = exact_amplitude_capped(inst, pc).expect("cap equals kernel dimension");
        est.eps = eps;
        est.delta = delta;
        return est;
    }

    let particular = inst.particular.as_ref().expect("consistent instance");
    let kernel = &inst.kernel;
    let words = kernel.len().div_ceil(64);

    let counts = par::accumulate(
        n_samples,
        || [0u64; 8],
        |mut acc, i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut x = particular.clone();
            for w in 0..words {
                let bits = rng.next_u64();
                let lo = w * 64;
                let hi = (lo + 64).min(kernel.len());
                for (j, v) in kernel[lo..hi].iter().enumerate() {
                    if (bits >> j) & 1 == 1 {
                        x.xor_assign(v);
                    }
                }
            }
            acc[inst.eval_phase(&x) as usize] += 1;
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                *x += y;
            }
            a
        },
    );

    // Mean of 2^pc · ω^m / √2^h over the samples.
    let (sre, sim) = omega_sum(&counts);
    let norm = normalization(h, inst.system.scale_log2) * 2f64.powi(pc as i32) / n_samples as f64;
    Estimate {
        re: sre * norm,
        im: sim * norm,
        eps,
        delta,
        samples: n_samples,
        mode: EstimateMode::MonteCarlo,
        pc: Some(pc),
        exact_counts: None,
    }
}

/// Estimates the probability that the first `|y|` output bits of `C|a>`
/// read `y`, via the uncomputation gadget: the gadget amplitude
/// `<a,y| G |a,0>` equals that marginal. The reported value is clamped to
/// `[0,1]`; the raw imaginary part is kept for diagnostics.
pub fn estimate_marginal(
    c: &Circuit,
    a: &BitVector,
    y: &BitVector,
    eps: f64,
    delta: f64,
    seed: u64,
) -> Result<Estimate, InvalidK> {
    let k = y.len();
    let gadget = c.marginal_gadget(k)?;
    let ps = encode(&gadget);
    let zeros = BitVector::zeros(k);
    let input = a.concat(&zeros);
    let output = a.concat(y);
    let inst = ps.specialize(&input, &output);
    let mut est = mc_estimate(&inst, eps, delta, seed);
    est.re = est.re.clamp(0.0, 1.0);
    Ok(est)
}
