//! Circuit representation, text format, adjoints, and the marginal gadget.
//!
//! The gate set is fixed: Hadamard plus gates whose action on computational
//! basis states is an affine-linear permutation with a phase that is an
//! integer multiple of π/4. All indices refer to qubits `0..n`, and the
//! bitstring convention everywhere is that character 0 of a string is
//! qubit 0.

use std::fmt;
use thiserror::Error;

/// A single gate application. Qubit arguments are ordered and distinct.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
    Cz(usize, usize),
    Ccz(usize, usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Swap(a, b) | Gate::Cz(a, b) => vec![a, b],
            Gate::Ccz(a, b, c) => vec![a, b, c],
        }
    }

    /// The Hermitian adjoint of the gate. Everything in the set is
    /// self-adjoint except the quarter- and eighth-turn phases.
    pub fn adjoint(self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            other => other,
        }
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::Cnot(..) => "cnot",
            Gate::Swap(..) => "swap",
            Gate::Cz(..) => "cz",
            Gate::Ccz(..) => "ccz",
        }
    }
}

/// An ordered list of gates over a fixed number of qubits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `qubits <n>` header")]
    MissingHeader,
    #[error("duplicate `qubits` header")]
    DuplicateHeader,
    #[error("unknown gate mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("`{mnemonic}` expects {expected} qubit argument(s), got {got}")]
    BadArity {
        mnemonic: String,
        expected: usize,
        got: usize,
    },
    #[error("repeated qubit within a single gate")]
    RepeatedQubit,
    #[error("qubit index {index} out of range for width {width}")]
    QubitOutOfRange { index: usize, width: usize },
    #[error("invalid integer `{0}`")]
    BadInteger(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("marginal width {k} out of range for {n} qubits (need 1 <= k <= n)")]
pub struct InvalidK {
    pub k: usize,
    pub n: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    /// Appends a gate, checking index range and distinctness.
    pub fn push(&mut self, gate: Gate) {
        let qs = gate.qubits();
        for (i, &q) in qs.iter().enumerate() {
            assert!(q < self.n_qubits, "qubit {q} out of range");
            assert!(!qs[..i].contains(&q), "repeated qubit in gate");
        }
        self.gates.push(gate);
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of Hadamard gates, the `h` of every analysis in this crate.
    pub fn hadamard_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::H(_)))
            .count()
    }

    /// The Hermitian adjoint circuit: gate order reversed, each gate
    /// replaced by its adjoint.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(|g| g.adjoint()).collect(),
        }
    }

    /// Builds the uncomputation gadget for `k`-marginals on `n + k` qubits:
    /// run the circuit, copy the first `k` output wires onto fresh ancillas
    /// with CNOTs, then run the adjoint. The basis amplitude
    /// `<a,y| gadget |a,0>` equals the probability that the first `k`
    /// output bits of the circuit applied to `|a>` read `y`.
    pub fn marginal_gadget(&self, k: usize) -> Result<Circuit, InvalidK> {
        let n = self.n_qubits;
        if k == 0 || k > n {
            return Err(InvalidK { k, n });
        }
        let mut out = Circuit::new(n + k);
        out.gates.extend(self.gates.iter().copied());
        for i in 0..k {
            out.push(Gate::Cnot(i, n + i));
        }
        out.gates.extend(self.dagger().gates.iter().copied());
        Ok(out)
    }

    /// Parses the line-based text format. The first content line must be
    /// `qubits <n>`; each following line is one gate; `#` starts a comment;
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<Circuit, ParseError> {
        let mut circuit: Option<Circuit> = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            let head = tokens.next().expect("nonempty line has a token");
            let args: Vec<&str> = tokens.collect();
            let err = |kind| ParseError { line, kind };

            if head == "qubits" {
                if circuit.is_some() {
                    return Err(err(ParseErrorKind::DuplicateHeader));
                }
                if args.len() != 1 {
                    return Err(err(ParseErrorKind::BadInteger(args.join(" "))));
                }
                let n: usize = args[0]
                    .parse()
                    .map_err(|_| err(ParseErrorKind::BadInteger(args[0].to_string())))?;
                circuit = Some(Circuit::new(n));
                continue;
            }

            let Some(c) = circuit.as_mut() else {
                return Err(err(ParseErrorKind::MissingHeader));
            };

            let expected = match head {
                "h" | "x" | "z" | "s" | "sdg" | "t" | "tdg" => 1,
                "cnot" | "swap" | "cz" => 2,
                "ccz" => 3,
                other => {
                    return Err(err(ParseErrorKind::UnknownMnemonic(other.to_string())));
                }
            };
            if args.len() != expected {
                return Err(err(ParseErrorKind::BadArity {
                    mnemonic: head.to_string(),
                    expected,
                    got: args.len(),
                }));
            }
            let mut qs = Vec::with_capacity(expected);
            for a in &args {
                let q: usize = a
                    .parse()
                    .map_err(|_| err(ParseErrorKind::BadInteger(a.to_string())))?;
                if q >= c.n_qubits {
                    return Err(err(ParseErrorKind::QubitOutOfRange {
                        index: q,
                        width: c.n_qubits,
                    }));
                }
                if qs.contains(&q) {
                    return Err(err(ParseErrorKind::RepeatedQubit));
                }
                qs.push(q);
            }
            let gate = match head {
                "h" => Gate::H(qs[0]),
                "x" => Gate::X(qs[0]),
                "z" => Gate::Z(qs[0]),
                "s" => Gate::S(qs[0]),
                "sdg" => Gate::Sdg(qs[0]),
                "t" => Gate::T(qs[0]),
                "tdg" => Gate::Tdg(qs[0]),
                "cnot" => Gate::Cnot(qs[0], qs[1]),
                "swap" => Gate::Swap(qs[0], qs[1]),
                "cz" => Gate::Cz(qs[0], qs[1]),
                "ccz" => Gate::Ccz(qs[0], qs[1], qs[2]),
                _ => unreachable!(),
            };
            c.gates.push(gate);
        }
        circuit.ok_or(ParseError {
            line: last_line.max(1),
            kind: ParseErrorKind::MissingHeader,
        })
    }

    /// Serializes back to the text format; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(g.mnemonic());
            for q in g.qubits() {
                out.push(' ');
                out.push_str(&q.to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl std::str::FromStr for Circuit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Circuit::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_hadamard() {
        let c = Circuit::parse("qubits 1\nh 0").unwrap();
        assert_eq!(c.n_qubits(), 1);
        assert_eq!(c.gates(), &[Gate::H(0)]);
    }

    #[test]
    fn parse_bell_pair() {
        let c = Circuit::parse("qubits 2\nh 0\ncnot 0 1").unwrap();
        assert_eq!(c.gates(), &[Gate::H(0), Gate::Cnot(0, 1)]);
    }

    #[test]
    fn parse_comments_and_blank_lines() {
        let c = Circuit::parse("# demo\n\nqubits 2\n  h 1  # trailing\n").unwrap();
        assert_eq!(c.gates(), &[Gate::H(1)]);
    }

    #[test]
    fn parse_rejects_repeated_qubit() {
        let err = Circuit::parse("qubits 2\ncnot 0 0").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, ParseErrorKind::RepeatedQubit);
    }

    #[test]
    fn parse_rejects_unknown_mnemonic() {
        let err = Circuit::parse("qubits 1\nrx 0").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownMnemonic("rx".into()));
    }

    #[test]
    fn parse_rejects_bad_arity() {
        let err = Circuit::parse("qubits 2\ncnot 0").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::BadArity { .. }));
    }

    #[test]
    fn parse_rejects_out_of_range_index() {
        let err = Circuit::parse("qubits 2\nh 2").unwrap_err();
        assert_eq!(
            err.kind,
            ParseErrorKind::QubitOutOfRange { index: 2, width: 2 }
        );
    }

    #[test]
    fn parse_requires_header() {
        let err = Circuit::parse("h 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeader);
        let err = Circuit::parse("").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeader);
    }

    #[test]
    fn serialize_forms() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        assert_eq!(c.serialize(), "qubits 1\nh 0\n");
        assert_eq!(Circuit::new(3).serialize(), "qubits 3\n");
    }

    #[test]
    fn dagger_reverses_and_conjugates() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        c.push(Gate::T(0));
        assert_eq!(c.dagger().gates(), &[Gate::Tdg(0), Gate::H(0)]);
        assert_eq!(c.dagger().dagger(), c);
    }

    #[test]
    fn gadget_single_hadamard() {
        let mut c = Circuit::new(1);
        c.push(Gate::H(0));
        let g = c.marginal_gadget(1).unwrap();
        assert_eq!(g.n_qubits(), 2);
        assert_eq!(g.gates(), &[Gate::H(0), Gate::Cnot(0, 1), Gate::H(0)]);
    }

    #[test]
    fn gadget_width_and_hadamard_count() {
        let c = Circuit::parse("qubits 3\nh 0\ncnot 0 1\nh 2\nt 1").unwrap();
        for k in 1..=3 {
            let g = c.marginal_gadget(k).unwrap();
            assert_eq!(g.n_qubits(), 3 + k);
            assert_eq!(g.hadamard_count(), 2 * c.hadamard_count());
        }
    }

    #[test]
    fn gadget_rejects_out_of_range_k() {
        let c = Circuit::parse("qubits 2\nh 0").unwrap();
        assert!(c.marginal_gadget(0).is_err());
        assert!(c.marginal_gadget(3).is_err());
    }
}
