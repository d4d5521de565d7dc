//! Benchmarks of the data-parallel inner loops.
//!
//! With the default `parallel` feature each group measures the same work on
//! a single-thread pool and on the default pool; build with
//! `--no-default-features` to measure the plain sequential fallback under
//! the same benchmark names.

use criterion::{criterion_group, criterion_main, Criterion};
use pathsum::circuit::{Circuit, Gate};
use pathsum::estimate::mc_estimate_forced;
use pathsum::gf2::BitVector;
use pathsum::oracle::statevector_amplitude;
use pathsum::qcalc::empirical_rank_dist;
use pathsum::sop::encode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use std::time::Duration;

fn random_circuit(n: usize, len: usize, max_h: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    let mut h_left = max_h;
    while c.gates().len() < len {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..8) {
            0 | 1 if h_left > 0 => {
                c.push(Gate::H(q));
                h_left -= 1;
            }
            2 => c.push(Gate::T(q)),
            3 => c.push(Gate::S(q)),
            4 => c.push(Gate::X(q)),
            _ => {
                if n >= 2 {
                    let mut t = rng.gen_range(0..n);
                    while t == q {
                        t = rng.gen_range(0..n);
                    }
                    if rng.gen_bool(0.5) {
                        c.push(Gate::Cnot(q, t));
                    } else {
                        c.push(Gate::Cz(q, t));
                    }
                }
            }
        }
    }
    c
}

/// Runs `f` once per measurement under the named thread configurations.
fn bench_modes<R: Send>(
    group: &mut criterion::BenchmarkGroup<'_, criterion::measurement::WallTime>,
    f: impl Fn() -> R + Send + Sync,
) {
    #[cfg(feature = "parallel")]
    {
        group.bench_function("single_thread", |b| {
            b.iter(|| pathsum::run_with_threads(1, || black_box(f())))
        });
        group.bench_function("all_threads", |b| b.iter(|| black_box(f())));
    }
    #[cfg(not(feature = "parallel"))]
    {
        group.bench_function("sequential", |b| b.iter(|| black_box(f())));
    }
}

fn bench_mc_sampling(c: &mut Criterion) {
    // Wide instance that genuinely samples: rank is pinned to n by a final
    // Hadamard wall, so pc = 14 and the 0.45/0.45 budget is ~11k samples.
    let n = 6;
    let mut circuit = random_circuit(n, 60, 14, 42);
    while circuit.hadamard_count() < 14 {
        circuit.push(Gate::H(0));
    }
    for q in 0..n {
        circuit.push(Gate::H(q));
    }
    let ps = encode(&circuit);
    let a = BitVector::zeros(n);
    let b = BitVector::zeros(n);
    let inst = ps.specialize(&a, &b);
    assert!(inst.consistent);

    let mut group = c.benchmark_group("mc_sampling");
    group
        .sample_size(10)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(3));
    bench_modes(&mut group, || mc_estimate_forced(&inst, 0.45, 0.45, 7).re);
    group.finish();
}

fn bench_statevector(c: &mut Criterion) {
    let n = 16;
    let circuit = random_circuit(n, 160, 40, 43);
    let a = BitVector::zeros(n);
    let b = BitVector::zeros(n);
    let mut group = c.benchmark_group("statevector");
    group
        .sample_size(10)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(3));
    bench_modes(&mut group, || {
        statevector_amplitude(&circuit, &a, &b).unwrap().re
    });
    group.finish();
}

fn bench_rank_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank_sampling");
    group
        .sample_size(10)
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(3));
    bench_modes(&mut group, || empirical_rank_dist(24, 16, 500, 7).len());
    group.finish();
}

criterion_group!(
    benches,
    bench_mc_sampling,
    bench_statevector,
    bench_rank_sampling
);
criterion_main!(benches);
