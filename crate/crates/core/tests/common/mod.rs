//! Shared generators for the randomized integration suites.
#![allow(dead_code)]

use pathsum::circuit::{Circuit, Gate};
use pathsum::gf2::{BitMatrix, BitVector};
use rand::{Rng, RngCore};

/// Random circuit over the full gate set with at most `max_h` Hadamards.
pub fn random_circuit(n: usize, len: usize, max_h: usize, rng: &mut impl Rng) -> Circuit {
    let mut c = Circuit::new(n);
    let mut h_left = max_h;
    while c.gates().len() < len {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..12) {
            0 | 1 => {
                if h_left > 0 {
                    c.push(Gate::H(q));
                    h_left -= 1;
                }
            }
            2 => c.push(Gate::X(q)),
            3 => c.push(Gate::Z(q)),
            4 => c.push(Gate::S(q)),
            5 => c.push(Gate::Sdg(q)),
            6 => c.push(Gate::T(q)),
            7 => c.push(Gate::Tdg(q)),
            8 | 9 => {
                if n >= 2 {
                    let t = distinct_from(n, &[q], rng);
                    if rng.gen_bool(0.5) {
                        c.push(Gate::Cnot(q, t));
                    } else {
                        c.push(Gate::Cz(q, t));
                    }
                }
            }
            10 => {
                if n >= 2 {
                    let t = distinct_from(n, &[q], rng);
                    c.push(Gate::Swap(q, t));
                }
            }
            _ => {
                if n >= 3 {
                    let b = distinct_from(n, &[q], rng);
                    let c3 = distinct_from(n, &[q, b], rng);
                    c.push(Gate::Ccz(q, b, c3));
                }
            }
        }
    }
    c
}

fn distinct_from(n: usize, taken: &[usize], rng: &mut impl Rng) -> usize {
    loop {
        let x = rng.gen_range(0..n);
        if !taken.contains(&x) {
            return x;
        }
    }
}

/// Appends `count` classical (Hadamard-free) gates.
pub fn push_classical_gates(c: &mut Circuit, count: usize, rng: &mut impl Rng) {
    let n = c.n_qubits();
    let mut pushed = 0;
    while pushed < count {
        let q = rng.gen_range(0..n);
        match rng.gen_range(0..8) {
            0 => c.push(Gate::X(q)),
            1 => c.push(Gate::Z(q)),
            2 => c.push(Gate::S(q)),
            3 => c.push(Gate::T(q)),
            4 | 5 => {
                if n < 2 {
                    continue;
                }
                let t = distinct_from(n, &[q], rng);
                c.push(Gate::Cnot(q, t));
            }
            6 => {
                if n < 2 {
                    continue;
                }
                let t = distinct_from(n, &[q], rng);
                c.push(Gate::Swap(q, t));
            }
            _ => {
                if n < 2 {
                    continue;
                }
                let t = distinct_from(n, &[q], rng);
                c.push(Gate::Cz(q, t));
            }
        }
        pushed += 1;
    }
}

/// CNOT/SWAP gate sequence whose basis action is the invertible map `m`.
///
/// Row-reduces `m` to the identity while recording the row operations; the
/// recorded operations replayed in reverse order rebuild `m` (each one is
/// its own inverse).
pub fn linear_map_circuit(n: usize, m: &BitMatrix) -> Vec<Gate> {
    assert_eq!(m.rank(), n, "map must be invertible");
    let mut work = m.clone();
    let mut ops: Vec<Gate> = Vec::new();
    for col in 0..n {
        let pivot = (col..n).find(|&r| work.get(r, col)).expect("invertible");
        if pivot != col {
            let rows = work.rows().to_vec();
            let mut swapped = rows.clone();
            swapped.swap(col, pivot);
            work = BitMatrix::from_rows(swapped, n);
            ops.push(Gate::Swap(col, pivot));
        }
        for r in 0..n {
            if r != col && work.get(r, col) {
                let src = work.row(col).clone();
                work.row_mut(r).xor_assign(&src);
                // Row r += row col  ==  CNOT with control col, target r.
                ops.push(Gate::Cnot(col, r));
            }
        }
    }
    assert_eq!(work, BitMatrix::identity(n));
    ops.reverse();
    ops
}

pub fn random_bits(len: usize, rng: &mut impl RngCore) -> BitVector {
    BitVector::random(len, rng)
}

/// Upper critical values of the chi-squared distribution at significance
/// 0.001, indexed by degrees of freedom.
pub fn chi2_crit(df: usize) -> f64 {
    match df {
        1 => 10.828,
        2 => 13.816,
        3 => 16.266,
        4 => 18.467,
        5 => 20.515,
        6 => 22.458,
        7 => 24.322,
        15 => 37.697,
        _ => panic!("no tabulated critical value for df = {df}"),
    }
}
