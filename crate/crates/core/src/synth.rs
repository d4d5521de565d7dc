//! Hadamard-variable elimination on path systems.
//!
//! A path variable whose system column is zero and whose only phase
//! occurrences sit in the half-turn (sign) part can be summed out: writing
//! the sign polynomial as `α·f ⊕ g`, the sum over `α` forces `f = 0`, and
//! solving that constraint for a second path variable `β ∈ supp(f)` removes
//! the pair while preserving the amplitude exactly — the collapsed sum gains
//! a factor 2 that cancels the `1/√2²` normalization change. This is the
//! polynomial form of the identity `H² = I`, generalized to arbitrary linear
//! mixing between the two Hadamards.
//!
//! Elimination repeats to a fixpoint, removing two variables per step, and
//! never increases path coherence. When some eligible `α` occurs only as the
//! bare monomial `α` (its factor `f` is the constant 1) the sign sum
//! vanishes outright and the whole system is flagged null: the amplitude is
//! identically zero for every input/output pair.

use crate::gf2::BitVector;
use crate::sop::{AffineForm, PathSystem, PhasePoly};
use std::collections::BTreeSet;

/// A variable of the sign polynomial: path variables order before input
/// variables, each by index. The ordering fixes every tie-break below.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Var {
    X(usize),
    A(usize),
}

/// A squarefree monomial of degree at most two, or the constant 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Monomial {
    One,
    Lin(Var),
    Quad(Var, Var),
}

fn quad(u: Var, v: Var) -> Monomial {
    debug_assert_ne!(u, v);
    if u < v {
        Monomial::Quad(u, v)
    } else {
        Monomial::Quad(v, u)
    }
}

/// Product of two primitive terms (variables or the constant), reduced
/// multilinearly (`v·v = v`).
fn term_product(u: Option<Var>, v: Option<Var>) -> Monomial {
    match (u, v) {
        (None, None) => Monomial::One,
        (Some(u), None) => Monomial::Lin(u),
        (None, Some(v)) => Monomial::Lin(v),
        (Some(u), Some(v)) if u == v => Monomial::Lin(u),
        (Some(u), Some(v)) => quad(u, v),
    }
}

fn form_terms(f: &AffineForm) -> Vec<Option<Var>> {
    let mut terms: Vec<Option<Var>> = f.x_mask.iter_ones().map(|i| Some(Var::X(i))).collect();
    terms.extend(f.a_mask.iter_ones().map(|j| Some(Var::A(j))));
    if f.const_bit {
        terms.push(None);
    }
    terms
}

/// The half-turn part of a phase polynomial as a multilinear polynomial
/// over F₂ in the path and input variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SignPoly {
    monomials: BTreeSet<Monomial>,
}

impl SignPoly {
    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    /// XORs in the multilinear expansion of the product `p·q`.
    fn toggle_product(&mut self, p: &AffineForm, q: &AffineForm) {
        for u in form_terms(p) {
            for v in form_terms(q) {
                self.toggle(term_product(u, v));
            }
        }
    }

    /// XORs in the multilinear expansion of a bare affine form.
    fn toggle_form(&mut self, f: &AffineForm) {
        for u in form_terms(f) {
            self.toggle(term_product(u, None));
        }
    }

    /// Evaluates the polynomial at an assignment.
    pub fn eval(&self, x: &BitVector, a: &BitVector) -> bool {
        let value = |v: Var| match v {
            Var::X(i) => x.get(i),
            Var::A(j) => a.get(j),
        };
        let mut acc = false;
        for m in &self.monomials {
            acc ^= match *m {
                Monomial::One => true,
                Monomial::Lin(v) => value(v),
                Monomial::Quad(u, v) => value(u) && value(v),
            };
        }
        acc
    }
}

/// Expands the sign content of a phase polynomial: every quadratic pair
/// `4·p·q` and every linear term with coefficient 4, reduced to multilinear
/// monomials over F₂.
pub fn expand_sign_poly(ps: &PathSystem) -> SignPoly {
    let mut sp = SignPoly::default();
    for (p, q) in &ps.phase.quads {
        sp.toggle_product(p, q);
    }
    for (coeff, form) in &ps.phase.linear {
        if *coeff == 4 {
            sp.toggle_form(form);
        }
    }
    sp
}

/// An eliminable pair: `alpha` occurs in the sign polynomial only as
/// `alpha·f`, and `beta` is the lowest path variable in `supp(f)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Candidate {
    pub alpha: usize,
    pub f: AffineForm,
    pub beta: usize,
}

enum Scan {
    /// Some eligible variable occurs only as a bare sign monomial: the
    /// amplitude vanishes identically.
    Null,
    Found(Candidate),
    Nothing,
}

/// Cofactor of `alpha` in the sign polynomial: `f` with `sp = alpha·f ⊕ g`,
/// `alpha` not in `g`. Returns `None` when `alpha` does not occur.
fn cofactor(sp: &SignPoly, alpha: usize, h: usize, n: usize) -> Option<AffineForm> {
    let target = Var::X(alpha);
    let mut f = AffineForm::zero(h, n);
    let mut seen = false;
    for m in &sp.monomials {
        match *m {
            Monomial::Lin(v) if v == target => {
                f.const_bit ^= true;
                seen = true;
            }
            Monomial::Quad(u, v) if u == target || v == target => {
                let other = if u == target { v } else { u };
                match other {
                    Var::X(i) => f.x_mask.flip(i),
                    Var::A(j) => f.a_mask.flip(j),
                }
                seen = true;
            }
            _ => {}
        }
    }
    seen.then_some(f)
}

fn scan<'a>(
    a_x: &crate::gf2::BitMatrix,
    rest: impl Iterator<Item = &'a AffineForm> + Clone,
    sp: &SignPoly,
    h: usize,
    n: usize,
) -> Scan {
    let mut found: Option<Candidate> = None;
    for alpha in 0..h {
        if !a_x.column_is_zero(alpha) {
            continue;
        }
        if rest.clone().any(|form| form.x_mask.get(alpha)) {
            continue;
        }
        let Some(f) = cofactor(sp, alpha, h, n) else {
            continue;
        };
        if f.x_mask.is_zero() {
            if f.a_mask.is_zero() && f.const_bit {
                return Scan::Null;
            }
            // Constraint on inputs alone: no path variable to solve for.
            continue;
        }
        if found.is_none() {
            let beta = f.x_mask.iter_ones().next().expect("nonzero x support");
            found = Some(Candidate { alpha, f, beta });
        }
    }
    match found {
        Some(c) => Scan::Found(c),
        None => Scan::Nothing,
    }
}

/// Finds the lowest-index eliminable pair of the system, if any.
pub fn find_candidate(ps: &PathSystem, sp: &SignPoly) -> Option<Candidate> {
    let rest = ps
        .phase
        .linear
        .iter()
        .filter(|(c, _)| *c != 0 && *c != 4)
        .map(|(_, f)| f);
    match scan(&ps.a_x, rest, sp, ps.h, ps.n) {
        Scan::Found(c) => Some(c),
        _ => None,
    }
}

/// Removes eliminable Hadamard pairs until none remain. The amplitude of
/// every `(a, b)` specialization is preserved exactly; `h` drops by two per
/// step and path coherence never increases. The output is a fixpoint of
/// `find_candidate`, or a system flagged null whose amplitudes all vanish.
pub fn eliminate_pairs(ps: &PathSystem) -> PathSystem {
    let n = ps.n;
    let mut h = ps.h;
    let mut a_x = ps.a_x.clone();
    let mut a_a = ps.a_a.clone();
    let mut offset = ps.offset.clone();
    let mut rest: Vec<(u8, AffineForm)> = ps
        .phase
        .linear
        .iter()
        .filter(|(c, _)| *c != 0 && *c != 4)
        .cloned()
        .collect();
    let mut sp = expand_sign_poly(ps);
    let mut null_system = ps.null_system;

    while !null_system {
        let candidate = match scan(&a_x, rest.iter().map(|(_, f)| f), &sp, h, n) {
            Scan::Null => {
                null_system = true;
                break;
            }
            Scan::Found(c) => c,
            Scan::Nothing => break,
        };
        let Candidate { alpha, f, beta } = candidate;

        // f with beta removed: the value beta is forced to take.
        let mut f0 = f.clone();
        f0.x_mask.set(beta, false);

        // Drop the alpha·f monomials consumed by the sum over alpha.
        let with_alpha: Vec<Monomial> = sp
            .monomials
            .iter()
            .copied()
            .filter(|m| monomial_contains(m, Var::X(alpha)))
            .collect();
        for m in with_alpha {
            sp.toggle(m);
        }

        // Substitute beta <- f0 in the sign polynomial.
        let with_beta: Vec<Monomial> = sp
            .monomials
            .iter()
            .copied()
            .filter(|m| monomial_contains(m, Var::X(beta)))
            .collect();
        for m in with_beta {
            sp.toggle(m);
            match m {
                Monomial::Lin(_) => sp.toggle_form(&f0),
                Monomial::Quad(u, v) => {
                    let other = if u == Var::X(beta) { v } else { u };
                    for t in form_terms(&f0) {
                        sp.toggle(term_product(t, Some(other)));
                    }
                }
                Monomial::One => unreachable!("constant contains no variable"),
            }
        }

        // Substitute beta <- f0 in the remaining phase terms and the system
        // rows; XORing the full f clears the beta bit in the same stroke.
        for (_, form) in rest.iter_mut() {
            if form.x_mask.get(beta) {
                form.xor_assign(&f);
            }
        }
        for i in 0..n {
            if a_x.get(i, beta) {
                a_x.row_mut(i).xor_assign(&f.x_mask);
                a_a.row_mut(i).xor_assign(&f.a_mask);
                if f.const_bit {
                    offset.flip(i);
                }
            }
        }

        // Delete the two variables and reindex everything above them.
        let dropped = [alpha, beta];
        a_x = a_x.delete_columns(&dropped);
        let remap = |i: usize| -> usize { i - dropped.iter().filter(|&&d| d < i).count() };
        for (_, form) in rest.iter_mut() {
            form.x_mask = remap_mask(&form.x_mask, h, &dropped, remap);
        }
        let mut remapped = SignPoly::default();
        for m in sp.monomials() {
            let map_var = |v: Var| match v {
                Var::X(i) => {
                    debug_assert!(!dropped.contains(&i));
                    Var::X(remap(i))
                }
                a => a,
            };
            remapped.toggle(match *m {
                Monomial::One => Monomial::One,
                Monomial::Lin(v) => Monomial::Lin(map_var(v)),
                Monomial::Quad(u, v) => quad(map_var(u), map_var(v)),
            });
        }
        sp = remapped;
        h -= 2;
    }

    // Re-encode the sign polynomial as coefficient-4 linear terms and
    // quadratic pairs over singleton forms.
    let mut phase = PhasePoly::default();
    for (coeff, form) in rest {
        phase.linear.push((coeff, form));
    }
    let var_form = |v: Var| match v {
        Var::X(i) => AffineForm::path_var(h, n, i),
        Var::A(j) => AffineForm::input_var(h, n, j),
    };
    for m in sp.monomials() {
        match *m {
            Monomial::One => phase.linear.push((4, AffineForm::constant(h, n, true))),
            Monomial::Lin(v) => phase.linear.push((4, var_form(v))),
            Monomial::Quad(u, v) => phase.quads.push((var_form(u), var_form(v))),
        }
    }

    PathSystem {
        n,
        h,
        a_x,
        a_a,
        offset,
        phase,
        scale_log2: ps.scale_log2,
        null_system,
    }
}

fn monomial_contains(m: &Monomial, target: Var) -> bool {
    match *m {
        Monomial::One => false,
        Monomial::Lin(v) => v == target,
        Monomial::Quad(u, v) => u == target || v == target,
    }
}

fn remap_mask(
    mask: &BitVector,
    h: usize,
    dropped: &[usize],
    remap: impl Fn(usize) -> usize,
) -> BitVector {
    let mut out = BitVector::zeros(h - dropped.len());
    for i in mask.iter_ones() {
        debug_assert!(
            !dropped.contains(&i),
            "substitution left a dropped variable"
        );
        out.set(remap(i), true);
    }
    out
}
