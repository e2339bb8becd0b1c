use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use abs_spectra::closedform::{verify_conjecture, ConjectureReport, DEFAULT_SATURATION_TOL};
use abs_spectra::criteria::{classify, Verdict, DEFAULT_BOUNDARY_TOL};
use abs_spectra::optimizer::{maximize_purity, Problem, SolverOptions};
use abs_spectra::oracle::{grid_max_purity, GridSpec};
use abs_spectra::report::{
    format_sig12, parse_lambda_list, parse_spectrum, render_svg, sweep, write_csv,
};
use abs_spectra::spectrum::Spectrum;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BOUNDARY: u8 = 3;

/// Absolute separability and absolute PPT from spectra.
///
/// Exit status: 0 ok/feasible, 1 usage, input or I/O error (also an
/// undetermined verdict), 2 infeasible, 3 boundary.
#[derive(Parser)]
#[command(name = "abs-spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one spectrum.
    Classify(ClassifyArgs),
    /// Maximize purity under the criterion for min(m, n).
    Maximize(MaximizeArgs),
    /// Check the closed-form maximizer for m ∈ {2, 3}.
    Conjecture(ConjectureArgs),
    /// Numerical optimum against the closed form for a range of n.
    Sweep(SweepArgs),
    /// Exhaustive search over spectra with denominator K.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Local dimension of the first subsystem.
    #[arg(long)]
    m: Option<usize>,
    /// Local dimension of the second subsystem.
    #[arg(long)]
    n: Option<usize>,
    /// Spectrum file: a JSON object or one real per line.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "lambdas")]
    input: Option<PathBuf>,
    /// Comma-separated eigenvalues.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// Width of the boundary band around a zero margin.
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_TOL)]
    tol: f64,
}

#[derive(Args)]
struct SolverArgs {
    /// Random starts in addition to the uniform and reference ones.
    #[arg(long, default_value_t = SolverOptions::default().restarts)]
    restarts: usize,
    #[arg(long, env = "ABS_SPECTRA_SEED", default_value_t = 0)]
    seed: u64,
    /// Iteration cap per penalty stage.
    #[arg(long, default_value_t = SolverOptions::default().max_iters)]
    max_iters: usize,
}

impl SolverArgs {
    fn options(&self, tol: Option<f64>) -> SolverOptions {
        let defaults = SolverOptions::default();
        SolverOptions {
            restarts: self.restarts,
            seed: self.seed,
            max_iters: self.max_iters,
            constraint_tol: tol.unwrap_or(defaults.constraint_tol),
            ..defaults
        }
    }
}

#[derive(Args)]
struct MaximizeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Constraint tolerance of the local solves.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Saturation tolerance on the criterion margin.
    #[arg(long, default_value_t = DEFAULT_SATURATION_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    nmin: usize,
    #[arg(long)]
    nmax: usize,
    /// CSV output path.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Optional SVG chart path.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Saturation tolerance for the closed-form columns.
    #[arg(long, default_value_t = DEFAULT_SATURATION_TOL)]
    tol: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Grid denominator K.
    #[arg(long, value_name = "K")]
    resolution: u32,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Classify(a) => cmd_classify(a),
        Command::Maximize(a) => cmd_maximize(a),
        Command::Conjecture(a) => cmd_conjecture(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_spectrum(a: &ClassifyArgs) -> Result<Spectrum> {
    let dims = match (a.m, a.n) {
        (Some(m), Some(n)) => Some((m, n)),
        (None, None) => None,
        (Some(_), None) => bail!("--n is required together with --m"),
        (None, Some(_)) => bail!("--m is required together with --n"),
    };
    if let Some(path) = &a.input {
        let text =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        return parse_spectrum(&text, dims).with_context(|| path.display().to_string());
    }
    let Some(list) = &a.lambdas else {
        bail!("one of --in or --lambdas is required");
    };
    let Some((m, n)) = dims else {
        bail!("--lambdas needs --m and --n");
    };
    let values = parse_lambda_list(list)?;
    Ok(Spectrum::new(m, n, values)?)
}

fn cmd_classify(a: ClassifyArgs) -> Result<u8> {
    let spectrum = read_spectrum(&a)?;
    let c = classify(&spectrum, a.tol);
    print_json(&c)?;
    Ok(match c.verdict {
        Verdict::Feasible => EXIT_OK,
        Verdict::Infeasible => EXIT_INFEASIBLE,
        Verdict::Boundary => EXIT_BOUNDARY,
        Verdict::Undetermined => EXIT_ERROR,
    })
}

fn cmd_maximize(a: MaximizeArgs) -> Result<u8> {
    let problem = Problem::new(a.m, a.n)?;
    let result = maximize_purity(&problem, &a.solver.options(a.tol));
    print_json(&result)?;
    if result.restarts_converged == 0 {
        eprintln!("warning: no local solve converged");
        return Ok(EXIT_ERROR);
    }
    Ok(EXIT_OK)
}

fn cmd_conjecture(a: ConjectureArgs) -> Result<u8> {
    let report = verify_conjecture(a.m, a.n, a.tol)?;
    match a.format {
        Format::Json => print_json(&report)?,
        Format::Table => print!("{}", conjecture_table(&report)),
    }
    Ok(if report.conjecture_feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn conjecture_table(r: &ConjectureReport) -> String {
    let spectrum: Vec<String> = r
        .conjectured_spectrum
        .lambdas()
        .iter()
        .map(|&x| format_sig12(x))
        .collect();
    let mut rows = vec![
        ("system", format!("{} ⊗ {}", r.m, r.n)),
        ("criterion", r.criterion.to_string()),
        ("conjectured_purity", format_sig12(r.conjectured_purity)),
        ("measured_purity", format_sig12(r.measured_purity)),
        ("conjectured_radius", format_sig12(r.conjectured_radius)),
        ("measured_radius", format_sig12(r.measured_radius)),
        ("criterion_margin", format_sig12(r.criterion_margin)),
    ];
    for part in &r.criterion_parts {
        rows.push((
            "  part",
            format!("{} = {}", part.name, format_sig12(part.value)),
        ));
    }
    rows.extend([
        ("conjecture_feasible", r.conjecture_feasible.to_string()),
        ("saturated", r.saturated.to_string()),
        ("spectrum_valid", r.spectrum_valid.to_string()),
        (
            "purity_matches_formula",
            r.purity_matches_formula.to_string(),
        ),
        (
            "radius_matches_formula",
            r.radius_matches_formula.to_string(),
        ),
        ("spectrum", spectrum.join(", ")),
    ]);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn cmd_sweep(a: SweepArgs) -> Result<u8> {
    if a.nmin > a.nmax {
        bail!("--nmin ({}) exceeds --nmax ({})", a.nmin, a.nmax);
    }
    let rows = sweep(a.m, a.nmin, a.nmax, &a.solver.options(None), a.tol)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    fs::write(&a.out, csv).with_context(|| format!("cannot write {}", a.out.display()))?;
    if let Some(svg) = &a.svg {
        fs::write(svg, render_svg(&rows))
            .with_context(|| format!("cannot write {}", svg.display()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(a: OracleArgs) -> Result<u8> {
    let spec = GridSpec::new(a.m, a.n, a.resolution)?;
    let result = grid_max_purity(&spec)?;
    print_json(&result)?;
    Ok(EXIT_OK)
}
