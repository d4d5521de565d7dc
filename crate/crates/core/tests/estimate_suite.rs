//! Statistical behavior of the Monte-Carlo estimator against ground truth.

mod common;

use common::{random_bits, random_circuit};
use pathsum::circuit::Circuit;
use pathsum::coherence::enumerate_solutions;
use pathsum::estimate::{
    estimate_marginal, exact_amplitude, mc_estimate, mc_estimate_forced, EstimateMode,
};
use pathsum::oracle::{statevector_amplitude, statevector_marginal};
use pathsum::sop::encode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

#[test]
fn per_sample_values_average_to_the_exact_amplitude() {
    // Summing the per-path contribution over the whole solution set divided
    // by its size reproduces exact mode: the estimator is unbiased.
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut tested = 0;
    while tested < 40 {
        let n = rng.gen_range(1..=5);
        let c = random_circuit(n, rng.gen_range(1..=20), 10, &mut rng);
        let ps = encode(&c);
        let a = random_bits(n, &mut rng);
        let b = random_bits(n, &mut rng);
        let inst = ps.specialize(&a, &b);
        if !inst.consistent || inst.kernel.len() > 10 {
            continue;
        }
        tested += 1;
        let pc = inst.kernel.len();
        let scale = 2f64.powi(pc as i32) / SQRT_2.powi(ps.h as i32);
        let size = (1usize << pc) as f64;
        let (mut mean_re, mut mean_im) = (0.0, 0.0);
        for x in enumerate_solutions(&inst).unwrap() {
            let m = inst.eval_phase(&x);
            let angle = std::f64::consts::FRAC_PI_4 * f64::from(m);
            mean_re += scale * angle.cos() / size;
            mean_im += scale * angle.sin() / size;
        }
        let exact = exact_amplitude(&inst).unwrap();
        assert!((mean_re - exact.re).abs() < 1e-10);
        assert!((mean_im - exact.im).abs() < 1e-10);
    }
}

#[test]
fn forced_sampling_stays_within_eps_with_high_probability() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let c = random_circuit(4, 30, 12, &mut rng);
    let ps = encode(&c);
    let a = random_bits(4, &mut rng);
    let b = random_bits(4, &mut rng);
    let inst = ps.specialize(&a, &b);
    let want = statevector_amplitude(&c, &a, &b).unwrap();
    let (eps, delta) = (0.1, 0.1);
    let runs = 60;
    let mut failures = 0;
    for seed in 0..runs {
        let est = mc_estimate_forced(&inst, eps, delta, seed);
        let err = ((est.re - want.re).powi(2) + (est.im - want.im).powi(2)).sqrt();
        if err > eps {
            failures += 1;
        }
    }
    // Hoeffding guarantees failure probability <= delta per run; allow 2x.
    assert!(
        (failures as f64) <= 2.0 * delta * runs as f64,
        "{failures} of {runs} runs missed the tolerance"
    );
}

#[test]
fn default_estimator_matches_oracle_within_eps() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for trial in 0..30 {
        let n = rng.gen_range(2..=5);
        let c = random_circuit(n, rng.gen_range(4..=30), 14, &mut rng);
        let ps = encode(&c);
        let a = random_bits(n, &mut rng);
        let b = random_bits(n, &mut rng);
        let inst = ps.specialize(&a, &b);
        let est = mc_estimate(&inst, 0.05, 0.02, trial);
        let want = statevector_amplitude(&c, &a, &b).unwrap();
        let err = ((est.re - want.re).powi(2) + (est.im - want.im).powi(2)).sqrt();
        assert!(
            err <= 0.05,
            "error {err} above eps in trial {trial} (mode {:?})",
            est.mode
        );
    }
}

#[test]
fn exact_mode_modulus_never_exceeds_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let c = random_circuit(n, rng.gen_range(0..=20), 10, &mut rng);
        let ps = encode(&c);
        let inst = ps.specialize(&random_bits(n, &mut rng), &random_bits(n, &mut rng));
        let est = exact_amplitude(&inst).unwrap();
        assert!(est.re.hypot(est.im) <= 1.0 + 1e-12);
    }
}

#[test]
fn marginal_estimates_track_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(305);
    for trial in 0..30 {
        let n = 4;
        let c = random_circuit(n, rng.gen_range(2..=16), 6, &mut rng);
        let k = rng.gen_range(1..=2);
        let a = random_bits(n, &mut rng);
        let y = random_bits(k, &mut rng);
        let est = estimate_marginal(&c, &a, &y, 0.05, 0.05, trial).unwrap();
        let want = statevector_marginal(&c, &a, &y).unwrap();
        assert!(
            (est.re - want).abs() <= 0.05,
            "marginal error {} above eps",
            (est.re - want).abs()
        );
        assert!(est.im.abs() <= 0.05, "gadget estimates should be near-real");
        assert!((0.0..=1.0).contains(&est.re));
    }
}

#[test]
fn bell_pair_amplitude_is_exact() {
    let c = Circuit::parse("qubits 2\nh 0\ncnot 0 1").unwrap();
    let ps = encode(&c);
    let a = pathsum::gf2::BitVector::from_bitstring("00").unwrap();
    let b = pathsum::gf2::BitVector::from_bitstring("11").unwrap();
    let est = mc_estimate(&ps.specialize(&a, &b), 0.05, 0.05, 7);
    assert_eq!(est.mode, EstimateMode::Exact);
    assert!((est.re - 1.0 / SQRT_2).abs() < 1e-12);
}
