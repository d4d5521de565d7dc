//! Path-sum encoding of circuits as affine systems over GF(2).
//!
//! A circuit over the supported gate set maps, in a single left-to-right
//! pass, to
//!
//! ```text
//!     A_x·x ⊕ A_a·a ⊕ t = b
//! ```
//!
//! where `a` and `b` are the input/output basis strings, `x` holds one fresh
//! binary path variable per Hadamard gate, and each row is the symbolic form
//! of one output wire. Alongside the system, an exact phase polynomial
//! accumulates every gate phase in eighth-turn units (integers mod 8, one
//! unit = π/4): a path `x` contributes `ω₈^m(x,a)` to the amplitude, with
//! `ω₈ = e^{iπ/4}`.
//!
//! Classical gates update wire forms affinely (X flips a constant, CNOT XORs
//! forms, SWAP exchanges them). Diagonal gates add linear phase terms on the
//! current wire forms; CZ and CCZ expand exactly into π/4-unit terms over
//! XORs of wire forms. A Hadamard on a wire holding form `p` allocates a new
//! variable `x_k`, records the cross term `4·p·x_k`, and resets the wire to
//! `x_k`. Path variables are indexed by Hadamard order in the circuit.

use crate::circuit::{Circuit, Gate};
use crate::gf2::{BitMatrix, BitVector};
use serde_json::{json, Value};

/// An affine function of the path variables `x` and input variables `a`:
/// `<x_mask, x> ⊕ <a_mask, a> ⊕ const_bit`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineForm {
    pub x_mask: BitVector,
    pub a_mask: BitVector,
    pub const_bit: bool,
}

impl AffineForm {
    pub fn zero(h: usize, n: usize) -> Self {
        Self {
            x_mask: BitVector::zeros(h),
            a_mask: BitVector::zeros(n),
            const_bit: false,
        }
    }

    /// The form reading input variable `a_i`.
    pub fn input_var(h: usize, n: usize, i: usize) -> Self {
        let mut f = Self::zero(h, n);
        f.a_mask.set(i, true);
        f
    }

    /// The form reading path variable `x_k` (0-based).
    pub fn path_var(h: usize, n: usize, k: usize) -> Self {
        let mut f = Self::zero(h, n);
        f.x_mask.set(k, true);
        f
    }

    pub fn constant(h: usize, n: usize, bit: bool) -> Self {
        let mut f = Self::zero(h, n);
        f.const_bit = bit;
        f
    }

    pub fn xor_assign(&mut self, other: &Self) {
        self.x_mask.xor_assign(&other.x_mask);
        self.a_mask.xor_assign(&other.a_mask);
        self.const_bit ^= other.const_bit;
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    #[inline]
    pub fn eval(&self, x: &BitVector, a: &BitVector) -> bool {
        self.x_mask.dot(x) ^ self.a_mask.dot(a) ^ self.const_bit
    }
}

/// Exact dyadic phase data: linear terms `coeff·form` with `coeff ∈ Z₈`, and
/// quadratic pairs each contributing `4·p·q`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PhasePoly {
    pub linear: Vec<(u8, AffineForm)>,
    pub quads: Vec<(AffineForm, AffineForm)>,
}

impl PhasePoly {
    pub fn is_empty(&self) -> bool {
        self.linear.is_empty() && self.quads.is_empty()
    }

    /// Evaluates the phase exponent `m(x, a) ∈ Z₈`.
    pub fn eval(&self, x: &BitVector, a: &BitVector) -> u8 {
        let mut m = 0u32;
        for (coeff, form) in &self.linear {
            if form.eval(x, a) {
                m += u32::from(*coeff);
            }
        }
        for (p, q) in &self.quads {
            if p.eval(x, a) && q.eval(x, a) {
                m += 4;
            }
        }
        (m % 8) as u8
    }

    fn push_linear(&mut self, coeff: u8, form: AffineForm) {
        debug_assert!(coeff < 8);
        if coeff != 0 {
            self.linear.push((coeff, form));
        }
    }
}

/// The compiled system of a circuit: `A_x·x ⊕ A_a·a ⊕ offset = b` plus the
/// phase polynomial. `scale_log2` scales the amplitude by a power of two
/// (zero for every encoded circuit, and preserved by rewriting).
#[derive(Clone, Debug)]
pub struct PathSystem {
    pub n: usize,
    pub h: usize,
    pub a_x: BitMatrix,
    pub a_a: BitMatrix,
    pub offset: BitVector,
    pub phase: PhasePoly,
    pub scale_log2: i32,
    /// Set by rewriting when the amplitude is identically zero for every
    /// input/output pair; such a system has no admissible path.
    pub null_system: bool,
}

/// A path system specialized to one amplitude `<b| C |a>`: the reduced
/// system `A_x·x = rhs` together with a particular solution and a kernel
/// basis. When consistent, the admissible paths form the affine space
/// `particular ⊕ span(kernel)` of size `2^{kernel.len()}`.
#[derive(Clone, Debug)]
pub struct AmplitudeInstance<'a> {
    pub system: &'a PathSystem,
    pub a: BitVector,
    pub b: BitVector,
    pub rhs: BitVector,
    pub particular: Option<BitVector>,
    pub kernel: Vec<BitVector>,
    pub consistent: bool,
}

impl PathSystem {
    /// Specializes the system to the amplitude `<b| C |a>`.
    pub fn specialize(&self, a: &BitVector, b: &BitVector) -> AmplitudeInstance<'_> {
        assert_eq!(a.len(), self.n, "input width mismatch");
        assert_eq!(b.len(), self.n, "output width mismatch");
        let mut rhs = b.clone();
        rhs.xor_assign(&self.a_a.mul_vec(a));
        rhs.xor_assign(&self.offset);
        if self.null_system {
            return AmplitudeInstance {
                system: self,
                a: a.clone(),
                b: b.clone(),
                rhs,
                particular: None,
                kernel: Vec::new(),
                consistent: false,
            };
        }
        let particular = self.a_x.solve(&rhs);
        let consistent = particular.is_some();
        let kernel = if consistent {
            self.a_x.kernel_basis()
        } else {
            Vec::new()
        };
        AmplitudeInstance {
            system: self,
            a: a.clone(),
            b: b.clone(),
            rhs,
            particular,
            kernel,
            consistent,
        }
    }

    /// JSON dump of the system: matrices as row-wise bitstrings, phase terms
    /// as `[coeff, x_mask, a_mask, const]` and pairs of `[x, a, c]` triples.
    pub fn to_json(&self) -> Value {
        let rows = |m: &BitMatrix| -> Vec<String> {
            m.rows()
                .iter()
                .map(|r| r.to_bitstring())
                .collect::<Vec<_>>()
        };
        let form = |f: &AffineForm| -> Value {
            json!([
                f.x_mask.to_bitstring(),
                f.a_mask.to_bitstring(),
                u8::from(f.const_bit)
            ])
        };
        json!({
            "n": self.n,
            "h": self.h,
            "A_x": rows(&self.a_x),
            "A_a": rows(&self.a_a),
            "t": self.offset.to_bitstring(),
            "scale_log2": self.scale_log2,
            "null": self.null_system,
            "phase": {
                "linear": self.phase.linear.iter().map(|(c, f)| {
                    json!([c, f.x_mask.to_bitstring(), f.a_mask.to_bitstring(), u8::from(f.const_bit)])
                }).collect::<Vec<_>>(),
                "quad": self.phase.quads.iter().map(|(p, q)| json!([form(p), form(q)])).collect::<Vec<_>>(),
            },
        })
    }
}

impl AmplitudeInstance<'_> {
    /// Per-instance path-coherence: `log2 |S_{a,b}|` when admissible paths
    /// exist, undefined otherwise.
    pub fn pc(&self) -> Option<usize> {
        self.consistent.then_some(self.kernel.len())
    }

    /// Phase exponent of the path `x`, in eighth-turn units.
    pub fn eval_phase(&self, x: &BitVector) -> u8 {
        assert_eq!(x.len(), self.system.h, "path assignment width mismatch");
        self.system.phase.eval(x, &self.a)
    }
}

/// Compiles a circuit into its path system in one pass over the gates.
pub fn encode(c: &Circuit) -> PathSystem {
    let n = c.n_qubits();
    let h = c.hadamard_count();
    let mut wires: Vec<AffineForm> = (0..n).map(|i| AffineForm::input_var(h, n, i)).collect();
    let mut phase = PhasePoly::default();
    let mut next_var = 0usize;

    for gate in c.gates() {
        match *gate {
            Gate::X(q) => wires[q].const_bit ^= true,
            Gate::Cnot(ctrl, tgt) => {
                let src = wires[ctrl].clone();
                wires[tgt].xor_assign(&src);
            }
            Gate::Swap(p, q) => wires.swap(p, q),
            Gate::Z(q) => phase.push_linear(4, wires[q].clone()),
            Gate::S(q) => phase.push_linear(2, wires[q].clone()),
            Gate::Sdg(q) => phase.push_linear(6, wires[q].clone()),
            Gate::T(q) => phase.push_linear(1, wires[q].clone()),
            Gate::Tdg(q) => phase.push_linear(7, wires[q].clone()),
            Gate::Cz(u, v) => {
                // (-1)^{uv} = ω₈^{2u + 2v + 6(u⊕v)}
                phase.push_linear(2, wires[u].clone());
                phase.push_linear(2, wires[v].clone());
                phase.push_linear(6, wires[u].xor(&wires[v]));
            }
            Gate::Ccz(u, v, w) => {
                // (-1)^{uvw} = ω₈^{u + v + w + 7(u⊕v) + 7(v⊕w) + 7(u⊕w) + (u⊕v⊕w)}
                phase.push_linear(1, wires[u].clone());
                phase.push_linear(1, wires[v].clone());
                phase.push_linear(1, wires[w].clone());
                phase.push_linear(7, wires[u].xor(&wires[v]));
                phase.push_linear(7, wires[v].xor(&wires[w]));
                phase.push_linear(7, wires[u].xor(&wires[w]));
                phase.push_linear(1, wires[u].xor(&wires[v]).xor(&wires[w]));
            }
            Gate::H(q) => {
                let fresh = AffineForm::path_var(h, n, next_var);
                let old = std::mem::replace(&mut wires[q], fresh.clone());
                phase.quads.push((old, fresh));
                next_var += 1;
            }
        }
    }
    debug_assert_eq!(next_var, h);

    let a_x = BitMatrix::from_rows(wires.iter().map(|w| w.x_mask.clone()).collect(), h);
    let a_a = BitMatrix::from_rows(wires.iter().map(|w| w.a_mask.clone()).collect(), n);
    let offset = BitVector::from_bits(&wires.iter().map(|w| w.const_bit).collect::<Vec<_>>());
    PathSystem {
        n,
        h,
        a_x,
        a_a,
        offset,
        phase,
        scale_log2: 0,
        null_system: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVector {
        BitVector::from_bitstring(s).unwrap()
    }

    #[test]
    fn encode_single_hadamard() {
        let c = Circuit::parse("qubits 1\nh 0").unwrap();
        let ps = encode(&c);
        assert_eq!((ps.n, ps.h), (1, 1));
        assert_eq!(ps.a_x, BitMatrix::from_dense(&[&[1]]));
        assert_eq!(ps.a_a, BitMatrix::from_dense(&[&[0]]));
        assert!(ps.offset.is_zero());
        assert_eq!(ps.phase.quads.len(), 1);
        let (p, q) = &ps.phase.quads[0];
        assert_eq!(*p, AffineForm::input_var(1, 1, 0));
        assert_eq!(*q, AffineForm::path_var(1, 1, 0));
    }

    #[test]
    fn encode_double_hadamard() {
        let c = Circuit::parse("qubits 1\nh 0\nh 0").unwrap();
        let ps = encode(&c);
        assert_eq!(ps.h, 2);
        // Final wire reads the second path variable.
        assert_eq!(ps.a_x, BitMatrix::from_dense(&[&[0, 1]]));
        assert_eq!(ps.a_x.rank(), 1);
        assert_eq!(ps.phase.quads.len(), 2);
    }

    #[test]
    fn encode_cnot_is_purely_classical() {
        let c = Circuit::parse("qubits 2\ncnot 0 1").unwrap();
        let ps = encode(&c);
        assert_eq!(ps.h, 0);
        assert_eq!(ps.a_x.n_cols(), 0);
        assert_eq!(ps.a_a, BitMatrix::from_dense(&[&[1, 0], &[1, 1]]));
        assert!(ps.phase.is_empty());
    }

    #[test]
    fn specialize_identity_circuit() {
        let c = Circuit::parse("qubits 2\n").unwrap();
        let ps = encode(&c);
        let inst = ps.specialize(&bits("10"), &bits("10"));
        assert!(inst.consistent);
        assert!(inst.kernel.is_empty());
        let inst = ps.specialize(&bits("10"), &bits("01"));
        assert!(!inst.consistent);
    }

    #[test]
    fn specialize_double_hadamard() {
        let c = Circuit::parse("qubits 1\nh 0\nh 0").unwrap();
        let ps = encode(&c);
        let inst = ps.specialize(&bits("0"), &bits("0"));
        assert!(inst.consistent);
        assert_eq!(inst.kernel.len(), 1);
    }

    #[test]
    fn phase_of_single_hadamard_paths() {
        let c = Circuit::parse("qubits 1\nh 0").unwrap();
        let ps = encode(&c);
        let inst = ps.specialize(&bits("0"), &bits("0"));
        assert_eq!(inst.eval_phase(&bits("0")), 0);
        // <1|H|1> carries the half-turn: phase exponent 4.
        let inst = ps.specialize(&bits("1"), &bits("1"));
        assert_eq!(inst.eval_phase(&bits("1")), 4);
    }

    #[test]
    fn phase_of_t_then_hadamard() {
        let c = Circuit::parse("qubits 1\nt 0\nh 0").unwrap();
        let ps = encode(&c);
        let inst = ps.specialize(&bits("1"), &bits("0"));
        // The T term reads the input wire: one eighth turn on a = 1.
        assert_eq!(inst.eval_phase(&bits("0")), 1);
    }

    #[test]
    fn x_gate_lands_in_offset() {
        let c = Circuit::parse("qubits 2\nx 1").unwrap();
        let ps = encode(&c);
        assert_eq!(ps.offset, bits("01"));
        let inst = ps.specialize(&bits("00"), &bits("01"));
        assert!(inst.consistent);
        let inst = ps.specialize(&bits("00"), &bits("00"));
        assert!(!inst.consistent);
    }

    #[test]
    fn json_dump_shape() {
        let c = Circuit::parse("qubits 2\nh 0\ncnot 0 1").unwrap();
        let ps = encode(&c);
        let v = ps.to_json();
        assert_eq!(v["n"], 2);
        assert_eq!(v["h"], 1);
        assert_eq!(v["A_x"].as_array().unwrap().len(), 2);
        assert_eq!(v["t"], "00");
        assert!(v["phase"]["quad"].as_array().unwrap().len() == 1);
    }
}
