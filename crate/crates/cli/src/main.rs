//! `infoinv`: information totals, complementary sets and interferometer sweeps
//! from the command line.
//!
//! Exit status: 0 when every check passes, 1 when a numerical check misses
//! `--tol` (the report is still written), 2 for bad input or usage.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use infoinv::interferometer::{phi_sweep, MziState};
use infoinv::invariant::{
    information_distribution, invariance_sweep, reference_set, seeded_conservation_check,
    total_information,
};
use infoinv::mub::validate_mub;
use infoinv::qstate::parse_qstate;
use infoinv::report::fmt_csv;
use infoinv::states::{random_pure, DensityMatrix, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Per-basis and total information of a state
    Info,
    /// Dump a complete complementary set and validate it
    Mub,
    /// Total information under random rotations of the basis set
    Invariance,
    /// Total information along a random unitary evolution
    Conserve,
    /// Individual and joint information of a two-qubit state
    Distribute,
    /// Mach-Zehnder phase sweep of a one-qubit path state
    Mzi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "infoinv", version, about = "Operational information of qubit systems")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// QSTATE file
    #[arg(long, value_name = "PATH")]
    state: Option<PathBuf>,
    /// Qubit count (random state size when --state is absent)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_QUBITS as i64))]
    k: Option<u32>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
    phi: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
    phi1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
    phi2: f64,
    /// Trials (invariance), steps (conserve) or phase samples (mzi)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    trials: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    tol: f64,
    /// Output file instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x = finite(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

/// Input or usage problem; maps to exit status 2.
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        Self(e.to_string())
    }
}

struct Output {
    text: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let output = match run(&cli) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(output.text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("tolerance check failed at tol={:e}", cli.tol);
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Result<Output, UsageError> {
    match cli.command {
        Command::Info => cmd_info(cli),
        Command::Mub => cmd_mub(cli),
        Command::Invariance => cmd_invariance(cli),
        Command::Conserve => cmd_conserve(cli),
        Command::Distribute => cmd_distribute(cli),
        Command::Mzi => cmd_mzi(cli),
    }
}

fn load_state(cli: &Cli) -> Result<Option<DensityMatrix>, UsageError> {
    let Some(path) = &cli.state else {
        return Ok(None);
    };
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let rho = parse_qstate(&text)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        .to_density();
    if let Some(k) = cli.k {
        if k as usize != rho.num_qubits() {
            return Err(UsageError(format!(
                "--k {k} does not match the {}-qubit state in {}",
                rho.num_qubits(),
                path.display()
            )));
        }
    }
    Ok(Some(rho))
}

fn require_state(cli: &Cli) -> Result<DensityMatrix, UsageError> {
    load_state(cli)?.ok_or_else(|| UsageError("--state is required for this command".into()))
}

/// The state from `--state`, or a random pure state of `--k` qubits drawn from `--seed`.
fn state_or_random(cli: &Cli) -> Result<DensityMatrix, UsageError> {
    if let Some(rho) = load_state(cli)? {
        return Ok(rho);
    }
    let k = cli.k.unwrap_or(2) as usize;
    Ok(random_pure(k, cli.seed)?.to_density())
}

fn phis_for(cli: &Cli, k: usize) -> Vec<f64> {
    match k {
        1 => vec![cli.phi],
        2 => vec![cli.phi1, cli.phi2],
        _ => Vec::new(),
    }
}

fn supported_set_size(k: usize) -> Result<(), UsageError> {
    if (1..=3).contains(&k) {
        Ok(())
    } else {
        Err(UsageError(format!(
            "no complementary set for k={k}; supported: 1, 2, 3"
        )))
    }
}

fn to_string(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<String, UsageError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(UsageError::from)
}

fn cmd_info(cli: &Cli) -> Result<Output, UsageError> {
    let rho = require_state(cli)?;
    let k = rho.num_qubits();
    supported_set_size(k)?;
    let set = reference_set(k, &phis_for(cli, k))?;
    let report = total_information(&rho, &set)?;
    let text = match cli.format.unwrap_or(Format::Human) {
        Format::Human => to_string(|w| report.write_human(w))?,
        Format::Csv => to_string(|w| report.write_csv(w))?,
    };
    Ok(Output {
        text,
        passed: report.deviation() < cli.tol,
    })
}

fn cmd_mub(cli: &Cli) -> Result<Output, UsageError> {
    let k = cli.k.unwrap_or(1) as usize;
    supported_set_size(k)?;
    let set = reference_set(k, &phis_for(cli, k))?;
    let v = validate_mub(&set);
    let passed = v.max_orthonormality_violation < cli.tol && v.max_unbiasedness_violation < cli.tol;
    let mut text = set.to_text();
    match cli.format.unwrap_or(Format::Human) {
        Format::Human => {
            let _ = writeln!(text, "# bases {} of dimension {}", set.len(), set.dim());
            let _ = writeln!(
                text,
                "# max orthonormality violation {:.3e}",
                v.max_orthonormality_violation
            );
            let _ = writeln!(
                text,
                "# max unbiasedness violation {:.3e} (target overlap {:.6})",
                v.max_unbiasedness_violation,
                1.0 / set.dim() as f64
            );
            let _ = writeln!(text, "# {}", if passed { "PASS" } else { "FAIL" });
        }
        Format::Csv => {
            let _ = writeln!(
                text,
                "# validation bases={} orthonormality={} unbiasedness={} tol={:e} passed={passed}",
                set.len(),
                fmt_csv(v.max_orthonormality_violation),
                fmt_csv(v.max_unbiasedness_violation),
                cli.tol
            );
        }
    }
    Ok(Output { text, passed })
}

fn cmd_invariance(cli: &Cli) -> Result<Output, UsageError> {
    let rho = state_or_random(cli)?;
    supported_set_size(rho.num_qubits())?;
    let trials = cli.trials.unwrap_or(100) as usize;
    let report = invariance_sweep(&rho, trials, cli.seed)?.with_tolerance(cli.tol);
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_string(|w| report.write_csv(w))?,
        Format::Human => format!(
            "qubits         {}\ntrials         {}\nseed           {}\nclosed form    {:.6} bits\nmax deviation  {:.3e}\n{}\n",
            report.num_qubits,
            report.trials.len(),
            cli.seed,
            report.closed_form,
            report.max_deviation,
            if report.passed() { "PASS" } else { "FAIL" }
        ),
    };
    Ok(Output {
        text,
        passed: report.passed(),
    })
}

fn cmd_conserve(cli: &Cli) -> Result<Output, UsageError> {
    let rho = state_or_random(cli)?;
    supported_set_size(rho.num_qubits())?;
    let steps = cli.trials.unwrap_or(50) as usize;
    let report = seeded_conservation_check(&rho, steps, cli.seed)?.with_tolerance(cli.tol);
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_string(|w| report.write_csv(w))?,
        Format::Human => format!(
            "steps      {}\nseed       {}\ninitial    {:.6} bits\nmax drift  {:.3e}\n{}\n",
            steps,
            cli.seed,
            report.totals[0],
            report.max_drift,
            if report.passed() { "PASS" } else { "FAIL" }
        ),
    };
    Ok(Output {
        text,
        passed: report.passed(),
    })
}

fn cmd_distribute(cli: &Cli) -> Result<Output, UsageError> {
    let rho = require_state(cli)?;
    let d = information_distribution(&rho)?;
    let text = match cli.format.unwrap_or(Format::Human) {
        Format::Human => format!(
            "individual 1  {:.6} bits\nindividual 2  {:.6} bits\njoint         {:.6} bits\ntotal         {:.6} bits\n",
            d.individual[0], d.individual[1], d.joint, d.total
        ),
        Format::Csv => format!(
            "individual_1_bits,individual_2_bits,joint_bits,total_bits\n{},{},{},{}\n",
            fmt_csv(d.individual[0]),
            fmt_csv(d.individual[1]),
            fmt_csv(d.joint),
            fmt_csv(d.total)
        ),
    };
    Ok(Output { text, passed: true })
}

fn cmd_mzi(cli: &Cli) -> Result<Output, UsageError> {
    let rho = require_state(cli)?;
    if rho.num_qubits() != 1 {
        return Err(UsageError(format!(
            "mzi needs a 1-qubit path state, got {} qubits",
            rho.num_qubits()
        )));
    }
    let samples = cli.trials.unwrap_or(64) as usize;
    let sweep = phi_sweep(&MziState::from_density(rho)?, samples)?;
    let passed = sweep.total_spread() < cli.tol;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_string(|w| sweep.write_csv(w, Some(cli.seed)))?,
        Format::Human => format!(
            "samples       {}\nvisibility    {}\ntotal         {:.6} bits\ntotal spread  {:.3e}\n",
            samples,
            sweep
                .visibility()
                .map_or("-".to_string(), |v| format!("{v:.6}")),
            sweep.rows[0].total,
            sweep.total_spread()
        ),
    };
    Ok(Output { text, passed })
}
