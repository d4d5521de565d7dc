//! Dense state-vector simulation, used as an independent ground truth.
//!
//! Gate semantics here are written directly against amplitude indices and
//! share no code with the path-sum encoder, so agreement between the two is
//! a meaningful check rather than a tautology.
//!
//! Index convention: qubit 0 is the most significant bit of the amplitude
//! index, matching the bitstring convention where character 0 names qubit 0.

use crate::circuit::{Circuit, Gate};
use crate::gf2::BitVector;
use crate::par;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;
use thiserror::Error;

/// Widest circuit the oracle will simulate by default (2^20 amplitudes).
pub const DEFAULT_QUBIT_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{n_qubits} qubits exceed the state-vector cap of {cap}")]
pub struct CapExceeded {
    pub n_qubits: usize,
    pub cap: usize,
}

/// A full complex amplitude vector over `2^n` basis states.
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|bits>`.
    pub fn basis(bits: &BitVector) -> Self {
        let n_qubits = bits.len();
        let mut amps = vec![Complex64::ZERO; 1usize << n_qubits];
        amps[basis_index(bits)] = Complex64::ONE;
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitude(&self, bits: &BitVector) -> Complex64 {
        assert_eq!(bits.len(), self.n_qubits);
        self.amps[basis_index(bits)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit position (shift) of a qubit inside an amplitude index.
    fn shift(&self, qubit: usize) -> usize {
        self.n_qubits - 1 - qubit
    }

    /// Applies one gate in place.
    ///
    /// Work is split into aligned chunks large enough to contain every index
    /// pair the gate couples, so chunks are independent and may run on any
    /// number of threads with identical results.
    pub fn apply(&mut self, gate: &Gate) {
        let max_shift = gate
            .qubits()
            .iter()
            .map(|&q| self.shift(q))
            .max()
            .expect("gates act on at least one qubit");
        let chunk = 1usize << (max_shift + 1);
        let shifts: Vec<usize> = gate.qubits().iter().map(|&q| self.shift(q)).collect();
        let gate = *gate;
        par::for_each_chunk(&mut self.amps, chunk, |ci, amps| {
            let base = ci * chunk;
            apply_in_chunk(&gate, &shifts, base, amps);
        });
    }

    pub fn apply_circuit(&mut self, c: &Circuit) {
        assert_eq!(c.n_qubits(), self.n_qubits);
        for g in c.gates() {
            self.apply(g);
        }
    }
}

fn basis_index(bits: &BitVector) -> usize {
    let n = bits.len();
    let mut idx = 0usize;
    for i in 0..n {
        if bits.get(i) {
            idx |= 1 << (n - 1 - i);
        }
    }
    idx
}

fn apply_in_chunk(gate: &Gate, shifts: &[usize], base: usize, amps: &mut [Complex64]) {
    let len = amps.len();
    match *gate {
        Gate::H(_) => {
            let bit = 1usize << shifts[0];
            for local in 0..len {
                if (base + local) & bit == 0 {
                    let a0 = amps[local];
                    let a1 = amps[local + bit];
                    amps[local] = (a0 + a1) * FRAC_1_SQRT_2;
                    amps[local + bit] = (a0 - a1) * FRAC_1_SQRT_2;
                }
            }
        }
        Gate::X(_) => {
            let bit = 1usize << shifts[0];
            for local in 0..len {
                if (base + local) & bit == 0 {
                    amps.swap(local, local + bit);
                }
            }
        }
        Gate::Z(_) => {
            phase_where(
                amps,
                base,
                |idx| idx & (1 << shifts[0]) != 0,
                Complex64::new(-1.0, 0.0),
            );
        }
        Gate::S(_) => {
            phase_where(amps, base, |idx| idx & (1 << shifts[0]) != 0, Complex64::I);
        }
        Gate::Sdg(_) => {
            phase_where(amps, base, |idx| idx & (1 << shifts[0]) != 0, -Complex64::I);
        }
        Gate::T(_) => {
            let w = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
            phase_where(amps, base, |idx| idx & (1 << shifts[0]) != 0, w);
        }
        Gate::Tdg(_) => {
            let w = Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2);
            phase_where(amps, base, |idx| idx & (1 << shifts[0]) != 0, w);
        }
        Gate::Cnot(..) => {
            let cbit = 1usize << shifts[0];
            let tbit = 1usize << shifts[1];
            for local in 0..len {
                let idx = base + local;
                if idx & cbit != 0 && idx & tbit == 0 {
                    amps.swap(local, local + tbit);
                }
            }
        }
        Gate::Swap(..) => {
            let abit = 1usize << shifts[0];
            let bbit = 1usize << shifts[1];
            for local in 0..len {
                let idx = base + local;
                if idx & abit != 0 && idx & bbit == 0 {
                    // partner has a cleared, b set
                    let partner = (idx & !abit) | bbit;
                    amps.swap(local, partner - base);
                }
            }
        }
        Gate::Cz(..) => {
            let mask = (1usize << shifts[0]) | (1usize << shifts[1]);
            phase_where(
                amps,
                base,
                |idx| idx & mask == mask,
                Complex64::new(-1.0, 0.0),
            );
        }
        Gate::Ccz(..) => {
            let mask = (1usize << shifts[0]) | (1usize << shifts[1]) | (1usize << shifts[2]);
            phase_where(
                amps,
                base,
                |idx| idx & mask == mask,
                Complex64::new(-1.0, 0.0),
            );
        }
    }
}

fn phase_where(
    amps: &mut [Complex64],
    base: usize,
    pred: impl Fn(usize) -> bool,
    phase: Complex64,
) {
    for (local, a) in amps.iter_mut().enumerate() {
        if pred(base + local) {
            *a *= phase;
        }
    }
}

/// `<b| C |a>` by direct simulation. Errors if the circuit is wider than
/// `DEFAULT_QUBIT_CAP`.
pub fn statevector_amplitude(
    c: &Circuit,
    a: &BitVector,
    b: &BitVector,
) -> Result<Complex64, CapExceeded> {
    statevector_amplitude_capped(c, a, b, DEFAULT_QUBIT_CAP)
}

pub fn statevector_amplitude_capped(
    c: &Circuit,
    a: &BitVector,
    b: &BitVector,
    cap: usize,
) -> Result<Complex64, CapExceeded> {
    if c.n_qubits() > cap {
        return Err(CapExceeded {
            n_qubits: c.n_qubits(),
            cap,
        });
    }
    assert_eq!(a.len(), c.n_qubits(), "input width mismatch");
    assert_eq!(b.len(), c.n_qubits(), "output width mismatch");
    let mut sv = StateVector::basis(a);
    sv.apply_circuit(c);
    Ok(sv.amplitude(b))
}

/// Probability that the first `|y|` output bits of `C|a>` read `y`.
pub fn statevector_marginal(c: &Circuit, a: &BitVector, y: &BitVector) -> Result<f64, CapExceeded> {
    statevector_marginal_capped(c, a, y, DEFAULT_QUBIT_CAP)
}

pub fn statevector_marginal_capped(
    c: &Circuit,
    a: &BitVector,
    y: &BitVector,
    cap: usize,
) -> Result<f64, CapExceeded> {
    if c.n_qubits() > cap {
        return Err(CapExceeded {
            n_qubits: c.n_qubits(),
            cap,
        });
    }
    let n = c.n_qubits();
    let k = y.len();
    assert_eq!(a.len(), n, "input width mismatch");
    assert!(k <= n, "marginal wider than the circuit");
    let mut sv = StateVector::basis(a);
    sv.apply_circuit(c);
    // Qubits 0..k occupy the top k bits of the index.
    let mut prefix = 0usize;
    for i in 0..k {
        if y.get(i) {
            prefix |= 1 << (k - 1 - i);
        }
    }
    let tail = n - k;
    let mut total = 0.0;
    for z in 0..(1usize << tail) {
        total += sv.amps[(prefix << tail) | z].norm_sqr();
    }
    Ok(total)
}
