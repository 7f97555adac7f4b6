//! `groverian`: maximal product overlap and the Groverian measure from the
//! command line.
//!
//! Parties are numbered from 1 on the command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use groverian::checks::{run_suite, CheckConfig, Suite};
use groverian::closed_form::{recognize_closed_form, Family};
use groverian::oracle::{grid_pmax, GridConfig};
use groverian::solver::groverian_measure;
use groverian::sweep::{run_sweep, Spacing, SweepConfig};
use groverian::{pmax, Method, PureState, SolverConfig, C64};

#[derive(Parser, Debug)]
#[command(
    name = "groverian",
    version,
    about = "Maximal product overlap and Groverian entanglement of pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute P_max and the Groverian measure of a state file.
    Pmax(PmaxArgs),
    /// Sweep a one-parameter family and write CSV.
    Sweep(SweepArgs),
    /// Run a seeded invariant suite.
    Check(CheckArgs),
    /// Print the reduced density matrix with one party traced out.
    Reduce(ReduceArgs),
    /// Write a named state as a state file.
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct PmaxArgs {
    file: PathBuf,
    /// direct, reduced:K (K counted from 1), closed or grid.
    #[arg(long, default_value = "direct")]
    method: String,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 24)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    W3,
    W4,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::W3 => Family::W3,
            FamilyArg::W4 => Family::W4,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpacingArg {
    Log,
    Linear,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0.05)]
    kappa_min: f64,
    #[arg(long, default_value_t = 3.0)]
    kappa_max: f64,
    #[arg(long, default_value_t = 60)]
    steps: usize,
    #[arg(long, value_enum, default_value = "log")]
    spacing: SpacingArg,
    /// Add the grid-oracle column.
    #[arg(long)]
    with_grid: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Bounds,
    Lu,
    Theorem1,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Lu => Suite::Lu,
            SuiteArg::Theorem1 => Suite::Theorem1,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// States per battery; each suite has its own default.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    file: PathBuf,
    /// Party to trace out, counted from 1.
    #[arg(long)]
    trace_out: usize,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// bell, ghz:N, w:N, basis:BITS, w3:KAPPA or w4:KAPPA.
    name: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Input(String),
    NotConverged,
    Check,
}

type CmdResult = Result<(), Failure>;

impl From<groverian::Error> for Failure {
    fn from(e: groverian::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// `%.15g`.
fn g15(x: f64) -> String {
    const DIGITS: i32 = 15;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn complex(z: C64) -> String {
    let im = g15(z.im);
    if im.starts_with('-') {
        format!("{}{}i", g15(z.re), im)
    } else {
        format!("{}+{}i", g15(z.re), im)
    }
}

fn read_state(path: &Path) -> Result<PureState, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    PureState::from_json_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn party_index(k: usize, n: usize) -> Result<usize, Failure> {
    if k == 0 || k > n {
        return Err(Failure::Input(format!("party {k} out of range 1..={n}")));
    }
    Ok(k - 1)
}

fn cmd_pmax(args: &PmaxArgs, out: &mut impl Write) -> CmdResult {
    let state = read_state(&args.file)?;
    let mut cfg = SolverConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        starts: args.starts,
        seed: args.seed,
        method: Method::Direct,
    };
    cfg.validate()?;
    let method = args.method.as_str();
    let (p, report) = match method {
        "direct" => {
            let r = pmax(&state, &cfg)?;
            (r.p_max, Some(r))
        }
        "closed" => {
            let p = recognize_closed_form(&state)
                .ok_or_else(|| Failure::Input("no closed form for this state".into()))?;
            (p, None)
        }
        "grid" => (grid_pmax(&state, &GridConfig::default())?, None),
        _ => {
            let k = method
                .strip_prefix("reduced:")
                .and_then(|k| k.parse::<usize>().ok())
                .ok_or_else(|| Failure::Input(format!("unknown method {method:?}")))?;
            cfg.method = Method::Reduced(party_index(k, state.n_parties())?);
            let r = pmax(&state, &cfg)?;
            (r.p_max, Some(r))
        }
    };
    let converged = report.as_ref().is_none_or(|r| r.converged);
    writeln!(out, "method: {method}")?;
    writeln!(out, "p_max: {}", g15(p))?;
    writeln!(out, "groverian: {}", g15(groverian_measure(p)?))?;
    writeln!(out, "converged: {converged}")?;
    if let Some(r) = &report {
        writeln!(out, "iterations: {}", r.iterations_used)?;
        writeln!(out, "best_start: {}", r.best_start)?;
        writeln!(out, "assignment:")?;
        for (i, q) in r.best_assignment.locals().iter().enumerate() {
            let amps: Vec<String> = q.iter().map(|&z| complex(z)).collect();
            writeln!(out, "  party {}: {}", i + 1, amps.join(" "))?;
        }
    }
    if converged {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut impl Write) -> CmdResult {
    let mut cfg = SweepConfig::new(
        args.family.into(),
        args.kappa_min,
        args.kappa_max,
        args.steps,
    );
    cfg.spacing = match args.spacing {
        SpacingArg::Log => Spacing::Log,
        SpacingArg::Linear => Spacing::Linear,
    };
    cfg.with_grid = args.with_grid;
    cfg.solver.seed = args.seed;
    let rows = run_sweep(&cfg)?;
    let sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(stdout),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "kappa",
        "p_closed",
        "p_alt",
        "p_grid",
        "regime",
        "groverian",
    ])?;
    for r in &rows {
        w.write_record([
            g15(r.kappa),
            g15(r.p_closed),
            g15(r.p_alt),
            r.p_grid.map(g15).unwrap_or_default(),
            r.regime.label().to_string(),
            g15(r.groverian),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_check(args: &CheckArgs, out: &mut impl Write) -> CmdResult {
    let suite: Suite = args.suite.into();
    let cfg = CheckConfig::new(args.seed, args.samples.unwrap_or(suite.default_samples()));
    let outcomes = run_suite(suite, &cfg)?;
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    writeln!(out, "{} invariants, {failed} failed", outcomes.len())?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_reduce(args: &ReduceArgs, out: &mut impl Write) -> CmdResult {
    let state = read_state(&args.file)?;
    let k = party_index(args.trace_out, state.n_parties())?;
    let rho = state.reduce(&[k])?;
    let m = rho.matrix();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| complex(m[(i, j)])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

fn named_state(name: &str) -> Result<PureState, Failure> {
    let bad = || Failure::Input(format!("unknown state {name:?}"));
    let (kind, param) = name.split_once(':').unwrap_or((name, ""));
    let count = || {
        param
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 2)
            .ok_or_else(bad)
    };
    let state = match kind {
        "bell" => PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0])?,
        "ghz" => {
            let n = count()?;
            let mut a = vec![0.0; 1 << n];
            a[0] = 1.0;
            a[(1 << n) - 1] = 1.0;
            PureState::from_real(vec![2; n], &a)?
        }
        "w" => {
            let n = count()?;
            let mut a = vec![0.0; 1 << n];
            for k in 0..n {
                a[1 << k] = 1.0;
            }
            PureState::from_real(vec![2; n], &a)?
        }
        "basis" => {
            let digits: Vec<usize> = param
                .chars()
                .map(|c| c.to_digit(2).map(|d| d as usize))
                .collect::<Option<_>>()
                .filter(|d: &Vec<usize>| !d.is_empty())
                .ok_or_else(bad)?;
            PureState::basis(vec![2; digits.len()], &digits)?
        }
        "w3" | "w4" => {
            let kappa: f64 = param.parse().map_err(|_| bad())?;
            let family = if kind == "w3" { Family::W3 } else { Family::W4 };
            family.state(kappa)?
        }
        _ => return Err(bad()),
    };
    Ok(state)
}

fn cmd_generate(args: &GenerateArgs, out: &mut impl Write) -> CmdResult {
    let json = named_state(&args.name)?.to_json_string();
    match &args.out {
        Some(path) => fs::write(path, json + "\n")?,
        None => writeln!(out, "{json}")?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Pmax(a) => cmd_pmax(a, &mut out),
        Command::Sweep(a) => cmd_sweep(a, &mut out),
        Command::Check(a) => cmd_check(a, &mut out),
        Command::Reduce(a) => cmd_reduce(a, &mut out),
        Command::Generate(a) => cmd_generate(a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NotConverged) => {
            eprintln!("warning: no start converged");
            ExitCode::from(2)
        }
        Err(Failure::Check) => ExitCode::from(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g15_matches_printf() {
        assert_eq!(g15(0.5), "0.5");
        assert_eq!(g15(1.0), "1");
        assert_eq!(g15(-0.0), "0");
        assert_eq!(g15(4.0 / 9.0), "0.444444444444444");
        assert_eq!(g15(0.5f64.sqrt()), "0.707106781186548");
        assert_eq!(g15(1.5e-7), "1.5e-07");
        assert_eq!(g15(123456.0), "123456");
        assert_eq!(g15(1e20), "1e+20");
        assert_eq!(g15(0.0001), "0.0001");
    }

    #[test]
    fn complex_format() {
        assert_eq!(complex(C64::new(0.5, 0.0)), "0.5+0i");
        assert_eq!(complex(C64::new(0.5, -0.25)), "0.5-0.25i");
    }

    #[test]
    fn named_states() {
        assert_eq!(named_state("ghz:3").unwrap().amps().len(), 8);
        assert_eq!(named_state("basis:01").unwrap().amps()[1].re, 1.0);
        assert!(named_state("w:1").is_err());
        assert!(named_state("basis:012").is_err());
        assert!(named_state("nope").is_err());
    }
}
