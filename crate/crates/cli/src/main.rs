//! Command-line front end: analysis, estimation, synthesis, rank
//! distributions, and the reference simulator, with machine-readable
//! output (JSON or CSV) and deterministic results for a fixed seed.

use clap::{Parser, Subcommand};
use pathsum::circuit::Circuit;
use pathsum::coherence::path_coherence;
use pathsum::estimate::{exact_amplitude_capped, mc_estimate, Estimate};
use pathsum::gf2::BitVector;
use pathsum::qcalc;
use pathsum::sop::{encode, PathSystem};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pathsum",
    about = "Path-sum analysis of Hadamard + classical-linear circuits",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report h, rank(A_x), and path coherence for a circuit file.
    Analyze {
        file: PathBuf,
        /// Include the full system dump in the output.
        #[arg(long)]
        dump: bool,
    },
    /// Estimate one transition amplitude.
    Estimate {
        file: PathBuf,
        /// Input basis bitstring (character 0 is qubit 0).
        #[arg(long = "in")]
        input: String,
        /// Output basis bitstring.
        #[arg(long = "out")]
        output: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        seed: u64,
        /// Largest path-space log-size evaluated exactly instead of sampled.
        #[arg(long = "exact-cap", default_value_t = pathsum::coherence::DEFAULT_ENUMERATION_CAP)]
        exact_cap: usize,
        /// Worker threads for the sampling loop (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Estimate the probability of a prefix of output bits.
    Prob {
        file: PathBuf,
        #[arg(long = "in")]
        input: String,
        /// Target values for the first k output qubits.
        #[arg(long)]
        marginal: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Eliminate redundant Hadamard pairs and report before/after.
    Synth {
        file: PathBuf,
        #[arg(long)]
        dump: bool,
    },
    /// Exact rank-distribution tables (CSV).
    Rankdist {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        hmax: Option<u64>,
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Also sample this many random circuits per h (q = 2 only).
        #[arg(long)]
        empirical: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the Pr[rk >= ceil(h/2)] grid for n = 1..=NMAX instead.
        #[arg(long)]
        plot: Option<u64>,
    },
    /// Reference state-vector amplitude or marginal.
    Oracle {
        file: PathBuf,
        #[arg(long = "in")]
        input: String,
        #[arg(long = "out")]
        output: Option<String>,
        #[arg(long)]
        marginal: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version are successful exits; everything else is usage.
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(payload)) => {
            write_stdout(&payload);
            ExitCode::SUCCESS
        }
        Ok(Err(failure)) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
        Err(_) => {
            eprintln!("error: internal invariant violation");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

/// Writes the whole payload in one call; a closed pipe downstream is not an
/// error.
fn write_stdout(payload: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(payload.as_bytes());
    let _ = out.flush();
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Analyze { file, dump } => analyze(&file, dump),
        Command::Estimate {
            file,
            input,
            output,
            eps,
            delta,
            seed,
            exact_cap,
            threads,
        } => estimate(&file, &input, &output, eps, delta, seed, exact_cap, threads),
        Command::Prob {
            file,
            input,
            marginal,
            eps,
            delta,
            seed,
            threads,
        } => prob(&file, &input, &marginal, eps, delta, seed, threads),
        Command::Synth { file, dump } => synth(&file, dump),
        Command::Rankdist {
            n,
            hmax,
            q,
            empirical,
            seed,
            plot,
        } => rankdist(n, hmax, q, empirical, seed, plot),
        Command::Oracle {
            file,
            input,
            output,
            marginal,
        } => oracle(&file, &input, output.as_deref(), marginal.as_deref()),
    }
}

fn load_circuit(path: &PathBuf) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Circuit::parse(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn parse_bits(label: &str, s: &str, expected_len: Option<usize>) -> Result<BitVector, Failure> {
    let bits = BitVector::from_bitstring(s).ok_or_else(|| {
        usage(format!(
            "{label} bitstring must contain only 0 and 1: `{s}`"
        ))
    })?;
    if let Some(want) = expected_len {
        if bits.len() != want {
            return Err(usage(format!(
                "{label} bitstring has length {}, expected circuit width {want}",
                bits.len()
            )));
        }
    }
    Ok(bits)
}

fn check_tolerance(name: &str, value: f64) -> Result<(), Failure> {
    if !(value > 0.0 && value < 1.0) {
        return Err(usage(format!("{name} must lie strictly between 0 and 1")));
    }
    Ok(())
}

fn with_threads<R: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> R + Send,
) -> Result<R, Failure> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(t) => Ok(pathsum::run_with_threads(t, f)),
    }
}

fn emit(value: serde_json::Value) -> String {
    format!("{value}\n")
}

fn analyze(file: &PathBuf, dump: bool) -> Result<String, Failure> {
    let circuit = load_circuit(file)?;
    let ps = encode(&circuit);
    let report = path_coherence(&ps);
    let mut out = json!({
        "n": report.n,
        "h": report.h,
        "rank_ax": report.rank_ax,
        "pc": report.pc,
    });
    if dump {
        out["system"] = ps.to_json();
    }
    Ok(emit(out))
}

fn amplitude_json(ps: &PathSystem, est: &Estimate, rank_ax: usize, seed: u64) -> serde_json::Value {
    json!({
        "n": ps.n,
        "h": ps.h,
        "rank_ax": rank_ax,
        "pc": ps.h - rank_ax,
        "consistent": est.pc.is_some(),
        "solutions_log2": est.pc,
        "re": est.re,
        "im": est.im,
        "eps": est.eps,
        "delta": est.delta,
        "samples": est.samples,
        "mode": est.mode.as_str(),
        "seed": seed,
    })
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    file: &PathBuf,
    input: &str,
    output: &str,
    eps: f64,
    delta: f64,
    seed: u64,
    exact_cap: usize,
    threads: Option<usize>,
) -> Result<String, Failure> {
    let circuit = load_circuit(file)?;
    check_tolerance("--eps", eps)?;
    check_tolerance("--delta", delta)?;
    let a = parse_bits("--in", input, Some(circuit.n_qubits()))?;
    let b = parse_bits("--out", output, Some(circuit.n_qubits()))?;
    let ps = encode(&circuit);
    let rank_ax = ps.a_x.rank();
    let inst = ps.specialize(&a, &b);
    let est = with_threads(threads, || match inst.pc() {
        Some(pc) if pc <= exact_cap => {
            let mut e =
                exact_amplitude_capped(&inst, exact_cap).expect("cap admits this kernel dimension");
            e.eps = eps;
            e.delta = delta;
            e
        }
        _ => mc_estimate(&inst, eps, delta, seed),
    })?;
    Ok(emit(amplitude_json(&ps, &est, rank_ax, seed)))
}

fn prob(
    file: &PathBuf,
    input: &str,
    marginal: &str,
    eps: f64,
    delta: f64,
    seed: u64,
    threads: Option<usize>,
) -> Result<String, Failure> {
    let circuit = load_circuit(file)?;
    check_tolerance("--eps", eps)?;
    check_tolerance("--delta", delta)?;
    let a = parse_bits("--in", input, Some(circuit.n_qubits()))?;
    let y = parse_bits("--marginal", marginal, None)?;
    let gadget = circuit
        .marginal_gadget(y.len())
        .map_err(|e| usage(e.to_string()))?;
    let ps = encode(&gadget);
    let rank_ax = ps.a_x.rank();
    let inst = ps.specialize(&a.concat(&BitVector::zeros(y.len())), &a.concat(&y));
    let mut est = with_threads(threads, || mc_estimate(&inst, eps, delta, seed))?;
    est.re = est.re.clamp(0.0, 1.0);
    Ok(emit(amplitude_json(&ps, &est, rank_ax, seed)))
}

fn synth(file: &PathBuf, dump: bool) -> Result<String, Failure> {
    let circuit = load_circuit(file)?;
    let ps = encode(&circuit);
    let before = path_coherence(&ps);
    let reduced = pathsum::synth::eliminate_pairs(&ps);
    let after = path_coherence(&reduced);
    let mut out = json!({
        "before": {"h": before.h, "rank_ax": before.rank_ax, "pc": before.pc},
        "after": {"h": after.h, "rank_ax": after.rank_ax, "pc": after.pc},
        "null": reduced.null_system,
    });
    if dump {
        out["system"] = reduced.to_json();
    }
    Ok(emit(out))
}

fn rankdist(
    n: Option<u64>,
    hmax: Option<u64>,
    q: u64,
    empirical: Option<u64>,
    seed: Option<u64>,
    plot: Option<u64>,
) -> Result<String, Failure> {
    use std::fmt::Write;
    if q < 2 {
        return Err(usage("--q must be at least 2"));
    }
    let mut csv = String::new();
    if let Some(n_max) = plot {
        if n_max < 1 {
            return Err(usage("--plot requires n >= 1"));
        }
        csv.push_str("n,h,prob\n");
        for row in qcalc::plot_data(n_max) {
            let _ = writeln!(
                csv,
                "{},{},{}",
                row.n,
                row.h,
                qcalc::to_decimal_string(&row.prob, 12)
            );
        }
        return Ok(csv);
    }
    let (Some(n), Some(hmax)) = (n, hmax) else {
        return Err(usage("--n and --hmax are required unless --plot is given"));
    };
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let empirical = match empirical {
        None => None,
        Some(trials) => {
            if q != 2 {
                return Err(usage("--empirical sampling is only available for q = 2"));
            }
            let seed = seed.ok_or_else(|| usage("--empirical requires --seed"))?;
            Some((trials, seed))
        }
    };
    if empirical.is_some() {
        csv.push_str("h,r,count,probability,empirical\n");
    } else {
        csv.push_str("h,r,count,probability\n");
    }
    for h in 0..=hmax {
        let dist = qcalc::rank_counts(n, h, q);
        let freqs = empirical.map(|(trials, seed)| {
            qcalc::empirical_rank_dist(n as usize, h as usize, trials, seed.wrapping_add(h))
        });
        for r in 0..=h.min(n) {
            let prob = qcalc::to_decimal_string(&dist.probability(r), 12);
            match &freqs {
                Some(freqs) => {
                    let f = freqs.get(&(r as usize)).copied().unwrap_or(0.0);
                    let _ = writeln!(csv, "{h},{r},{},{prob},{f:.12}", dist.counts[r as usize]);
                }
                None => {
                    let _ = writeln!(csv, "{h},{r},{},{prob}", dist.counts[r as usize]);
                }
            }
        }
    }
    Ok(csv)
}

fn oracle(
    file: &PathBuf,
    input: &str,
    output: Option<&str>,
    marginal: Option<&str>,
) -> Result<String, Failure> {
    let circuit = load_circuit(file)?;
    let a = parse_bits("--in", input, Some(circuit.n_qubits()))?;
    let cap_failure = |e: pathsum::oracle::CapExceeded| Failure {
        code: EXIT_CAP,
        message: e.to_string(),
    };
    match (output, marginal) {
        (Some(out), None) => {
            let b = parse_bits("--out", out, Some(circuit.n_qubits()))?;
            let amp =
                pathsum::oracle::statevector_amplitude(&circuit, &a, &b).map_err(cap_failure)?;
            Ok(emit(json!({"re": amp.re, "im": amp.im})))
        }
        (None, Some(y)) => {
            let y = parse_bits("--marginal", y, None)?;
            if y.len() > circuit.n_qubits() {
                return Err(usage(format!(
                    "--marginal bitstring has length {}, wider than the circuit ({})",
                    y.len(),
                    circuit.n_qubits()
                )));
            }
            let p = pathsum::oracle::statevector_marginal(&circuit, &a, &y).map_err(cap_failure)?;
            Ok(emit(json!({"prob": p})))
        }
        _ => Err(usage("oracle requires exactly one of --out or --marginal")),
    }
}
