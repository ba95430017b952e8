//! The `cho-spectra` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code, writing documents to `out` (or `--output`) and diagnostics to
//! `err`.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::eigensolve::{dense_eigen, lanczos_lowest, memory_estimate, LanczosOptions, Spectrum, DEFAULT_SEED};
use crate::error::Error;
use crate::hamiltonian::{market, AssemblyLimits, HamiltonianMatrix, OscillatorConfig, PhysicalUnits, SparseSymmetric};
use crate::perturbation::{comparison_table, rows_to_csv};
use crate::verify::{run_all, run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "cho-spectra", version, about = "Spectra of the confined harmonic oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalues of the truncated Hamiltonian.
    Eigs(EigsArgs),
    /// Perturbative levels against diagonalization (d = 1 only).
    Perturb(PerturbArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Lowest levels as a function of the basis size N.
    Converge(ConvergeArgs),
    /// Write the Hamiltonian as a Matrix Market file.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Dense,
    Lanczos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Matrixmarket,
}

/// `hbar=…,m=…,L=…,omega=…`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalArg(pub PhysicalUnits);

impl FromStr for PhysicalArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (mut hbar, mut m, mut l, mut omega) = (None, None, None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got '{part}'"))?;
            let value: f64 = value.trim().parse().map_err(|_| format!("'{value}' is not a number"))?;
            let slot = match key.trim() {
                "hbar" => &mut hbar,
                "m" => &mut m,
                "L" => &mut l,
                "omega" => &mut omega,
                other => return Err(format!("unknown constant '{other}' (expected hbar, m, L, omega)")),
            };
            if slot.replace(value).is_some() {
                return Err(format!("'{}' given twice", key.trim()));
            }
        }
        let get = |v: Option<f64>, name: &str| v.ok_or_else(|| format!("missing '{name}'"));
        PhysicalUnits::new(get(hbar, "hbar")?, get(m, "m")?, get(l, "L")?, get(omega, "omega")?)
            .map(PhysicalArg)
            .map_err(|e| e.to_string())
    }
}

/// Coupling given either directly or through physical constants.
#[derive(Clone, Debug, Args)]
pub struct Coupling {
    /// Dimensionless coupling ħω/ε.
    #[arg(long, conflicts_with = "physical")]
    pub lambda: Option<f64>,
    /// Physical constants, e.g. `hbar=1,m=1,L=2,omega=0.5`.
    #[arg(long)]
    pub physical: Option<PhysicalArg>,
}

impl Coupling {
    fn lambda(&self) -> Result<f64, CliError> {
        match (self.lambda, self.physical) {
            (Some(l), None) => Ok(l),
            (None, Some(p)) => Ok(p.0.lambda()),
            (None, None) => Err(CliError::Usage("one of --lambda or --physical is required".into())),
            (Some(_), Some(_)) => unreachable!("clap rejects --lambda with --physical"),
        }
    }

    fn units(&self) -> Option<PhysicalUnits> {
        self.physical.map(|p| p.0)
    }
}

#[derive(Clone, Debug, Args)]
pub struct EigsArgs {
    #[arg(long = "d", default_value_t = 1)]
    pub d: usize,
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub coupling: Coupling,
    #[arg(long, value_enum, default_value_t = SolverArg::Dense)]
    pub solver: SolverArg,
    /// Number of eigenpairs; defaults to min(10, N^d).
    #[arg(long)]
    pub k: Option<usize>,
    /// Residual threshold `‖Hv − Ev‖₂`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Lanczos starting-vector seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct PerturbArgs {
    #[arg(long = "d", default_value_t = 1)]
    pub d: usize,
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub coupling: Coupling,
    /// Number of levels in the table; defaults to min(6, N).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    /// One of algebra, basis, hamiltonian, eigensolve, perturbation, all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long = "d", default_value_t = 1)]
    pub d: usize,
    /// Basis sizes, e.g. `--N 4,8,16,32`.
    #[arg(long = "N", value_delimiter = ',', num_args = 1.., required = true)]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub coupling: Coupling,
    #[arg(long, value_enum, default_value_t = SolverArg::Dense)]
    pub solver: SolverArg,
    /// Number of levels tracked; defaults to 1.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Debug, Args)]
pub struct ExportArgs {
    #[arg(long = "d", default_value_t = 1)]
    pub d: usize,
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub coupling: Coupling,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Matrixmarket)]
    pub format: Format,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
    NotConverged(String),
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NotConverged(_) => EXIT_NONCONVERGENCE,
            CliError::Verification(_) => EXIT_VERIFICATION,
            CliError::Lib(e) => match e {
                Error::Size(_) => EXIT_SIZE,
                Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
                Error::Io(_) | Error::Json(_) => EXIT_IO,
                Error::Domain(_)
                | Error::Contract(_)
                | Error::UnsupportedOrder(_)
                | Error::DimensionMismatch { .. }
                | Error::Parse(_) => EXIT_USAGE,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::NotConverged(m) => format!("solver did not converge: {m}"),
            CliError::Verification(m) => format!("verification failed: {m}"),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parse `args` (program name first) and run the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eigs(a) => cmd_eigs(&a, out, err),
        Command::Perturb(a) => cmd_perturb(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Converge(a) => cmd_converge(&a, out, err),
        Command::Export(a) => cmd_export(&a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "cho-spectra: {}", e.message());
            e.exit_code()
        }
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Write `doc` to `path`, or to `out` when no path is given.
fn emit(path: Option<&PathBuf>, doc: &str, out: &mut dyn Write) -> CliResult {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(doc.as_bytes())?;
            f.flush()?;
        }
        None => out.write_all(doc.as_bytes())?,
    }
    Ok(())
}

/// Where human-readable summaries go: stdout when the document goes to a
/// file, stderr otherwise.
fn summary<'a>(path: Option<&PathBuf>, out: &'a mut dyn Write, err: &'a mut dyn Write) -> &'a mut dyn Write {
    if path.is_some() {
        out
    } else {
        err
    }
}

fn human_bytes(b: u128) -> String {
    const UNITS: [&str; 5] = ["B", "KiB", "MiB", "GiB", "TiB"];
    let mut v = b as f64;
    let mut i = 0;
    while v >= 1024.0 && i + 1 < UNITS.len() {
        v /= 1024.0;
        i += 1;
    }
    format!("{v:.1} {}", UNITS[i])
}

/// Check memory for one solve before anything is allocated and describe the
/// plan.
fn plan_solve(
    cfg: &OscillatorConfig,
    solver: SolverArg,
    k: usize,
    limits: &AssemblyLimits,
) -> CliResult<(String, bool)> {
    let dim = cfg.dim() as u128;
    match solver {
        SolverArg::Dense => {
            limits.check_dense(cfg)?;
            let bytes = 2 * dim * dim * 8;
            Ok((format!("N^d = {dim}, dense storage ~{}", human_bytes(bytes)), false))
        }
        SolverArg::Lanczos => {
            let krylov = memory_estimate(cfg.dim(), &LanczosOptions::new(k));
            let budget = limits.sparse_budget as u128;
            if krylov > budget {
                return Err(Error::Size(format!(
                    "Krylov basis for N^d = {dim} needs ~{}, above the budget of {}",
                    human_bytes(krylov),
                    human_bytes(budget)
                ))
                .into());
            }
            let sparse = SparseSymmetric::estimated_bytes(cfg).filter(|&b| b + krylov <= budget);
            let text = match sparse {
                Some(b) => format!("N^d = {dim}, sparse storage ~{} + Krylov ~{}", human_bytes(b), human_bytes(krylov)),
                None => format!("N^d = {dim}, matrix-free + Krylov ~{}", human_bytes(krylov)),
            };
            Ok((text, sparse.is_none()))
        }
    }
}

fn solve(cfg: &OscillatorConfig, solver: SolverArg, k: usize, tol: Option<f64>, seed: u64, matrix_free: bool) -> CliResult<Spectrum> {
    if k == 0 || k > cfg.dim() {
        return Err(CliError::Usage(format!("--k must lie in 1..={}, got {k}", cfg.dim())));
    }
    if let Some(t) = tol {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let mut spec = match solver {
        SolverArg::Dense => {
            let mut spec = dense_eigen(&HamiltonianMatrix::assemble_dense(cfg)?)?;
            spec.truncate(k);
            if let Some(t) = tol {
                spec.metadata.tol = t;
                spec.metadata.converged = spec.max_residual() <= t;
            }
            spec
        }
        SolverArg::Lanczos => {
            let mut opts = LanczosOptions::new(k).seed(seed);
            if let Some(t) = tol {
                opts = opts.tol(t);
            }
            if matrix_free {
                lanczos_lowest(&HamiltonianMatrix::matrix_free(cfg), &opts)?
            } else {
                lanczos_lowest(&HamiltonianMatrix::assemble_sparse(cfg)?, &opts)?
            }
        }
    };
    spec.eigenvectors = None;
    Ok(spec)
}

fn config(d: usize, n: usize, coupling: &Coupling) -> CliResult<OscillatorConfig> {
    let lambda = coupling.lambda()?;
    match OscillatorConfig::new(d, n, lambda) {
        Err(Error::Size(m)) => Err(Error::Size(m).into()),
        Err(e) => Err(CliError::Usage(e.to_string())),
        Ok(c) => Ok(c),
    }
}

fn units_line(units: Option<PhysicalUnits>) -> Option<String> {
    units.map(|u| {
        format!(
            "physical units: hbar={} m={} L={} omega={} -> epsilon={:.10e}, lambda={:.10e}",
            u.hbar,
            u.mass,
            u.half_width,
            u.omega,
            u.epsilon(),
            u.lambda()
        )
    })
}

fn cmd_eigs(a: &EigsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.format == Format::Matrixmarket {
        return Err(CliError::Usage("eigs writes json or csv; use `export` for Matrix Market".into()));
    }
    let cfg = config(a.d, a.n, &a.coupling)?;
    let k = a.k.unwrap_or(cfg.dim().min(10));
    let (plan, matrix_free) = plan_solve(&cfg, a.solver, k, &AssemblyLimits::default())?;
    writeln!(err, "{plan}")?;
    let spec = solve(&cfg, a.solver, k, a.tol, a.seed, matrix_free)?;

    let report = spec.report(&cfg, Some(timestamp()));
    let doc = match a.format {
        Format::Json => report.to_json()? + "\n",
        _ => report.to_csv(),
    };
    emit(a.output.as_ref(), &doc, out)?;

    let s = summary(a.output.as_ref(), out, err);
    if let Some(line) = units_line(a.coupling.units()) {
        writeln!(s, "{line}")?;
    }
    let units = a.coupling.units();
    for (i, (&e, m)) in spec.eigenvalues.iter().zip(report.multiplicities.iter()).enumerate() {
        let mut line = format!("E[{i}] = {e:.12} eps (multiplicity {m})");
        if let Some(u) = units {
            let _ = write!(line, " = {:.12e} physical", e * u.epsilon());
        }
        writeln!(s, "{line}")?;
    }

    if !spec.metadata.converged {
        return Err(CliError::NotConverged(format!(
            "max residual {:.3e} above tol {:.3e} after {} iterations",
            spec.max_residual(),
            spec.metadata.tol,
            spec.metadata.iterations
        )));
    }
    Ok(())
}

fn cmd_perturb(a: &PerturbArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.d != 1 {
        return Err(CliError::Usage(format!(
            "perturbation theory is implemented for the one-dimensional oscillator only (got --d {})",
            a.d
        )));
    }
    if a.format == Format::Matrixmarket {
        return Err(CliError::Usage("perturb writes csv or json".into()));
    }
    let cfg = config(1, a.n, &a.coupling)?;
    let levels = a.k.unwrap_or(a.n.min(6));
    if levels == 0 || levels > a.n {
        return Err(CliError::Usage(format!("--k must lie in 1..={}, got {levels}", a.n)));
    }
    let (plan, _) = plan_solve(&cfg, SolverArg::Dense, levels, &AssemblyLimits::default())?;
    writeln!(err, "{plan}")?;
    let rows = comparison_table(&cfg, levels)?;
    let doc = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
        _ => rows_to_csv(&rows),
    };
    emit(a.output.as_ref(), &doc, out)?;
    let s = summary(a.output.as_ref(), out, err);
    if let Some(line) = units_line(a.coupling.units()) {
        writeln!(s, "{line}")?;
    }
    for row in &rows {
        writeln!(s, "r={} series={:.12} dense={:.12} diff={:.3e}", row.r, row.series, row.dense, row.diff)?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let results = match a.suite.as_str() {
        "all" => run_all(),
        name => run_suite(name.parse::<Suite>().map_err(|e| CliError::Usage(e.to_string()))?),
    };
    let mut doc = String::new();
    for r in &results {
        let _ = writeln!(doc, "{r}");
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| format!("{}::{}", r.suite, r.name)).collect();
    let _ = writeln!(doc, "{} checks, {} passed, {} failed", results.len(), results.len() - failed.len(), failed.len());
    emit(a.output.as_ref(), &doc, out)?;
    if a.output.is_some() {
        writeln!(err, "{}", doc.lines().last().unwrap_or_default())?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

#[derive(Debug, Serialize)]
struct ConvergeRow {
    #[serde(rename = "N")]
    n: usize,
    levels: Vec<f64>,
    /// Change from the previous row; `None` on the first.
    differences: Option<Vec<f64>>,
}

fn cmd_converge(a: &ConvergeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.format == Format::Matrixmarket {
        return Err(CliError::Usage("converge writes csv or json".into()));
    }
    if a.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let limits = AssemblyLimits::default();
    let mut plans = Vec::with_capacity(a.n.len());
    for &n in &a.n {
        let cfg = config(a.d, n, &a.coupling)?;
        if a.k > cfg.dim() {
            return Err(CliError::Usage(format!("--k {} exceeds N^d = {} at N = {n}", a.k, cfg.dim())));
        }
        let (text, free) = plan_solve(&cfg, a.solver, a.k, &limits)?;
        writeln!(err, "{text}")?;
        plans.push((cfg, free));
    }

    let mut rows: Vec<ConvergeRow> = Vec::with_capacity(plans.len());
    let mut unconverged = Vec::new();
    for (cfg, free) in plans {
        let spec = solve(&cfg, a.solver, a.k, a.tol, a.seed, free)?;
        if !spec.metadata.converged {
            unconverged.push(cfg.n());
        }
        let differences =
            rows.last().map(|prev| spec.eigenvalues.iter().zip(&prev.levels).map(|(e, p)| e - p).collect());
        rows.push(ConvergeRow { n: cfg.n(), levels: spec.eigenvalues, differences });
    }

    let doc = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
        _ => {
            let mut s = String::from("N");
            for i in 0..a.k {
                let _ = write!(s, ",E{i}");
            }
            for i in 0..a.k {
                let _ = write!(s, ",dE{i}");
            }
            s.push('\n');
            for row in &rows {
                let _ = write!(s, "{}", row.n);
                for e in &row.levels {
                    let _ = write!(s, ",{e:.17e}");
                }
                for i in 0..a.k {
                    match &row.differences {
                        Some(d) => {
                            let _ = write!(s, ",{:.6e}", d[i]);
                        }
                        None => s.push(','),
                    }
                }
                s.push('\n');
            }
            s
        }
    };
    emit(a.output.as_ref(), &doc, out)?;

    let rising = rows.iter().filter_map(|r| r.differences.as_ref()).flatten().any(|&d| d > 1e-12);
    let s = summary(a.output.as_ref(), out, err);
    if rising {
        writeln!(s, "note: some level increased with N")?;
    }
    if !unconverged.is_empty() {
        return Err(CliError::NotConverged(format!("at N = {unconverged:?}")));
    }
    Ok(())
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if a.format != Format::Matrixmarket {
        return Err(CliError::Usage("export writes matrixmarket only".into()));
    }
    let cfg = config(a.d, a.n, &a.coupling)?;
    let limits = AssemblyLimits::default();
    limits.check_sparse(&cfg)?;
    let bytes = SparseSymmetric::estimated_bytes(&cfg).unwrap_or(0);
    writeln!(err, "N^d = {}, sparse storage ~{}", cfg.dim(), human_bytes(bytes))?;
    let h = HamiltonianMatrix::assemble_sparse_with(&cfg, &limits)?;
    let sparse = h.as_sparse().expect("sparse assembly");
    let mut buf = Vec::new();
    let entries = market::write(&mut buf, sparse, Some(&cfg))?;
    let doc = String::from_utf8(buf).expect("Matrix Market output is ASCII");
    emit(a.output.as_ref(), &doc, out)?;
    let s = summary(a.output.as_ref(), out, err);
    writeln!(s, "wrote {entries} entries of a {0}x{0} matrix", cfg.dim())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cho-spectra").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn physical_parsing() {
        let p: PhysicalArg = "hbar=1,m=0.5,L=2,omega=3".parse().unwrap();
        assert_eq!(p.0.half_width, 2.0);
        assert!("hbar=1,m=1,L=1".parse::<PhysicalArg>().is_err());
        assert!("hbar=1,m=1,L=1,omega=1,hbar=2".parse::<PhysicalArg>().is_err());
        assert!("hbar=1,m=1,L=1,w=1".parse::<PhysicalArg>().is_err());
        assert!("hbar=0,m=1,L=1,omega=1".parse::<PhysicalArg>().is_err());
    }

    #[test]
    fn free_levels() {
        let (code, out, _) = run_args(&["eigs", "--d", "1", "--N", "40", "--lambda", "0", "--k", "5", "--format", "csv"]);
        assert_eq!(code, 0);
        let energies: Vec<f64> =
            out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert_eq!(energies, [1.0, 4.0, 9.0, 16.0, 25.0]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["eigs", "--N", "4"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["eigs", "--N", "4", "--lambda", "1", "--k", "9"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["perturb", "--d", "2", "--N", "4", "--lambda", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["eigs", "--d", "3", "--N", "20", "--lambda", "1"]).0, EXIT_SIZE);
        assert_eq!(run_args(&["export", "--d", "40", "--N", "10", "--lambda", "1"]).0, EXIT_SIZE);
        assert_eq!(run_args(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn lanczos_budget_is_non_convergence() {
        let (code, out, _) = run_args(&[
            "eigs", "--d", "2", "--N", "10", "--lambda", "1", "--solver", "lanczos", "--k", "3", "--tol", "1e-300",
        ]);
        assert_eq!(code, EXIT_NONCONVERGENCE);
        assert!(out.contains("\"converged\": false"));
    }

    #[test]
    fn export_header_and_count() {
        let (code, out, _) = run_args(&["export", "--d", "2", "--N", "4", "--lambda", "0"]);
        assert_eq!(code, 0);
        assert!(out.starts_with(market::HEADER));
        let size_line = out.lines().find(|l| !l.starts_with('%')).unwrap();
        assert_eq!(size_line, "16 16 16");
    }
}
