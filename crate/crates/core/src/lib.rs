//! Path-sum analysis of Hadamard + classical-linear circuits.
//!
//! Circuits over the gate set {H, X, CNOT, SWAP, Z, S, S†, T, T†, CZ, CCZ}
//! compile into an affine system over GF(2) together with an exact phase
//! polynomial in eighth-turn units: one binary path variable per Hadamard,
//! one row per output wire. On top of that representation the crate
//! computes:
//!
//! - **path coherence** `pc = h − rk(A_x)`, the log₂ of the number of
//!   interfering paths behind any one amplitude ([`coherence`]);
//! - **amplitudes and marginals**, exactly by enumerating the path space
//!   with integer phase tallies, or by a seeded Monte-Carlo estimator whose
//!   sample budget scales with `2^{2pc − h}` ([`estimate`]);
//! - **Hadamard-pair elimination**, rewriting a system to one with fewer
//!   path variables and identical amplitudes ([`synth`]);
//! - **exact rank-distribution combinatorics** for random alternating
//!   circuits, with an empirical sampler to match ([`qcalc`]);
//! - a **dense state-vector simulator** kept deliberately independent of
//!   the path-sum code, as ground truth for everything above ([`oracle`]).
//!
//! The bit-packed GF(2) kernel (rank, kernels, generalized inverses,
//! uniform `GL_n(F_2)` sampling) lives in [`gf2`].
//!
//! With the default `parallel` feature the sampling and simulation loops
//! run on rayon; results are bit-identical for any thread count because
//! workers only merge integer tallies. Disabling the feature swaps in
//! sequential loops with the same outputs.

pub mod circuit;
pub mod coherence;
pub mod estimate;
pub mod gf2;
pub mod oracle;
mod par;
pub mod qcalc;
pub mod sop;
pub mod synth;

pub use num_complex::Complex64;
pub use par::run_with_threads;
