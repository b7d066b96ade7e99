//! Command dispatch for the `loccxform` binary.
//!
//! Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 an oracle
//! check failed.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use loccxform::io::{emit_csv, CsvTable, ReportJson, StateSpec};
use loccxform::oracle::{verify_pair, VerifyOptions, DEFAULT_GRID_BUDGET};
use loccxform::{
    catalysis_check, concentration_fidelity, dilution_fidelity, nonlocal_fidelity,
    nonlocal_trace_distance, optimal_fidelity, robustness_of_entanglement, teleportation_fidelity,
    Error, Spectrum,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

pub const BUDGET_ENV: &str = "LOCCXFORM_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "loccxform", version, about = "Optimal faithful conversion between bipartite pure states")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

/// States are given inline as JSON (`{"schmidt":[...]}` or
/// `{"amplitudes":[[[re,im],...],...]}`) or as a path to such a file.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal conversion report for psi -> phi.
    Report {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        phi: String,
    },
    /// Schmidt spectrum of a state.
    Schmidt { state: String },
    /// Concentration fidelity, robustness and teleportation fidelity.
    Teleport {
        state: String,
        /// Dimension of the maximally entangled reference state.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Dilute an m-state into phi.
    Dilute {
        m: usize,
        #[arg(long)]
        phi: String,
    },
    /// Catalytic improvement of psi -> phi with catalyst eta.
    Catalyze {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        eta: String,
    },
    /// Non-local fidelity and trace distance.
    NlDist { a: String, b: String },
    /// Cross-check the optimum against brute-force oracles.
    Verify {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        ensembles: usize,
    },
    /// CSV of the optimum along psi(t) = (1-t)*from + t*to.
    Sweep {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 1.0)]
        stop: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Oracle(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e.to_string()))
    }
}

type Outcome = Result<(), Failure>;

fn load_state(arg: &str) -> Result<StateSpec, Error> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?
    };
    StateSpec::parse(&text)
}

fn load_spectrum(arg: &str) -> Result<Spectrum, Error> {
    load_state(arg)?.spectrum()
}

fn grid_budget() -> Result<u128, Error> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("{BUDGET_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_GRID_BUDGET),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

fn print_json(out: &mut dyn Write, value: &impl serde::Serialize) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_INPUT,
            }
        }
        Err(Failure::Oracle(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_ORACLE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Report { psi, phi } => {
            let (a, b) = (load_spectrum(psi)?, load_spectrum(phi)?);
            let rep = ReportJson::from(&optimal_fidelity(&a, &b)?);
            if json {
                print_json(out, &rep)?;
            } else {
                writeln!(out, "f_opt: {:.12}", rep.f_opt)?;
                writeln!(out, "xi: {}", fmt_vec(&rep.xi))?;
                writeln!(out, "trace_distance: {:.12}", rep.trace_distance)?;
                writeln!(out, "p_conclusive: {:.12}", rep.p_conclusive)?;
                writeln!(out, "deterministic: {}", rep.deterministic)?;
                for s in &rep.segments {
                    writeln!(out, "segment: l={} r={:.12} A={:.12} B={:.12}", s.l, s.r, s.a, s.b)?;
                }
                if rep.input_reordered {
                    writeln!(out, "warning: input spectrum was not sorted and has been reordered")?;
                }
            }
        }
        Command::Schmidt { state } => {
            let sp = load_spectrum(state)?;
            if json {
                print_json(out, &json!({ "schmidt": sp.probs() }))?;
            } else {
                writeln!(out, "schmidt: {}", fmt_vec(sp.probs()))?;
            }
        }
        Command::Teleport { state, n } => {
            let sp = load_spectrum(state)?;
            let n = n.unwrap_or(sp.len());
            let f_max = concentration_fidelity(&sp, n)?;
            let robustness = robustness_of_entanglement(&sp, n)?;
            let f_tel = teleportation_fidelity(&sp, n)?;
            if json {
                print_json(
                    out,
                    &json!({ "n": n, "f_max": f_max, "robustness": robustness, "teleportation_fidelity": f_tel }),
                )?;
            } else {
                writeln!(out, "n: {n}")?;
                writeln!(out, "f_max: {f_max:.12}")?;
                writeln!(out, "robustness: {robustness:.12}")?;
                writeln!(out, "teleportation_fidelity: {f_tel:.12}")?;
            }
        }
        Command::Dilute { m, phi } => {
            let b = load_spectrum(phi)?;
            let (f, xi) = dilution_fidelity(*m, &b)?;
            if json {
                print_json(out, &json!({ "m": m, "f_opt": f, "xi": xi.probs() }))?;
            } else {
                writeln!(out, "f_opt: {f:.12}")?;
                writeln!(out, "xi: {}", fmt_vec(xi.probs()))?;
            }
        }
        Command::Catalyze { psi, phi, eta } => {
            let rep = catalysis_check(&load_spectrum(psi)?, &load_spectrum(phi)?, &load_spectrum(eta)?)?;
            if json {
                print_json(out, &rep)?;
            } else {
                writeln!(out, "convertible_bare: {}", rep.convertible_bare)?;
                writeln!(out, "convertible_with_catalyst: {}", rep.convertible_with_catalyst)?;
                writeln!(out, "trace_distance_bare: {:.12}", rep.trace_distance_bare)?;
                writeln!(out, "trace_distance_catalyzed: {:.12}", rep.trace_distance_catalyzed)?;
                writeln!(out, "delta_t: {:.12}", rep.delta_t)?;
                writeln!(out, "noise_threshold: {:.12}", rep.noise_threshold)?;
            }
        }
        Command::NlDist { a, b } => {
            let (a, b) = (load_spectrum(a)?, load_spectrum(b)?);
            let f = nonlocal_fidelity(&a, &b)?;
            let t = nonlocal_trace_distance(&a, &b)?;
            if json {
                print_json(out, &json!({ "f_nl": f, "t_nl": t }))?;
            } else {
                writeln!(out, "f_nl: {f:.12}")?;
                writeln!(out, "t_nl: {t:.12}")?;
            }
        }
        Command::Verify { psi, phi, seed, grid_step, trials, ensembles } => {
            let opts = VerifyOptions {
                grid_step: *grid_step,
                grid_budget: grid_budget()?,
                trials: *trials,
                ensembles: *ensembles,
                seed: *seed,
            };
            let claims = verify_pair(&load_spectrum(psi)?, &load_spectrum(phi)?, &opts)?;
            if json {
                print_json(out, &claims)?;
            } else {
                for c in &claims {
                    writeln!(
                        out,
                        "{} {}: theorem={:.12} oracle={:.12} gap={:.3e}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.claim,
                        c.theorem_value,
                        c.oracle_value,
                        c.gap
                    )?;
                }
            }
            let failed: Vec<&str> = claims.iter().filter(|c| !c.pass).map(|c| c.claim.as_str()).collect();
            if !failed.is_empty() {
                return Err(Failure::Oracle(failed.join("; ")));
            }
        }
        Command::Sweep { from, to, phi, start, stop, points, out: path } => {
            let (x, y, b) = (load_spectrum(from)?, load_spectrum(to)?, load_spectrum(phi)?);
            if *points == 0 || !(0.0..=1.0).contains(start) || !(0.0..=1.0).contains(stop) {
                return Err(Error::Validation("sweep needs points >= 1 and start, stop in [0, 1]".into()).into());
            }
            let n = x.len().max(y.len());
            let (x, y) = (x.padded(n), y.padded(n));
            let mut table = CsvTable::new(["t", "f_opt", "p_conclusive", "trace_distance"]);
            for i in 0..*points {
                let t = if *points == 1 {
                    *start
                } else {
                    start + (stop - start) * i as f64 / (*points - 1) as f64
                };
                let mix: Vec<f64> = x.probs().iter().zip(y.probs()).map(|(p, q)| (1.0 - t) * p + t * q).collect();
                let rep = optimal_fidelity(&Spectrum::new(mix)?, &b)?;
                table.push(vec![t, rep.f_opt, rep.conclusive_p, rep.trace_distance])?;
            }
            emit_csv(&table, path)?;
            if json {
                print_json(out, &json!({ "rows": table.rows.len(), "path": path }))?;
            } else {
                writeln!(out, "wrote {} rows to {}", table.rows.len(), path.display())?;
            }
        }
    }
    Ok(())
}
