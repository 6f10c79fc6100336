//! The `pi` command: compute digits, print convergence tables, run the
//! identity suite and compare the five algorithms.
//!
//! Every `cmd_*` function renders into the writer it is given. [`run`]
//! buffers that output and only releases it when the command succeeds (or,
//! for `verify`, when the failure is the report itself).

mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pi_core::apnum::{
    make_context, stats, to_fixed, DecimalRounding, PrecisionContext, Real, MAX_DECIMAL_DIGITS,
};
use pi_core::borwein::AlgorithmId;
use pi_core::driver;
use pi_core::verify::{check_identities_with, correct_digits, machin_pi, CheckOptions, Fault};

pub use output::OutputFormat;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PRECISION_CEILING: i32 = 3;
    pub const IDENTITY_FAILURE: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    PrecisionCeiling(String),
    #[error("{0}")]
    Internal(String),
    #[error("identity check failed: {}", .0.join(", "))]
    IdentityFailure(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::PrecisionCeiling(_) => exit::PRECISION_CEILING,
            CliError::Internal(_) => exit::INTERNAL,
            CliError::IdentityFailure(_) => exit::IDENTITY_FAILURE,
        }
    }
}

impl From<pi_core::Error> for CliError {
    fn from(e: pi_core::Error) -> CliError {
        match e {
            pi_core::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            pi_core::Error::PrecisionCeiling { .. } => CliError::PrecisionCeiling(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Internal(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> CliError {
        CliError::Internal(e.to_string())
    }
}

pub type CliResult = Result<(), CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "pi",
    version,
    about = "Compute and cross-check pi with AGM and Borwein iterations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// quadratic, quartic, cubic, quartic_analog or salamin_brent
    #[arg(long, short, global = true)]
    pub algorithm: Option<AlgorithmId>,

    /// Decimal digits of working precision
    #[arg(long, short, global = true)]
    pub digits: Option<u64>,

    /// Iterations for `table`; largest index checked for `verify`
    #[arg(long, short = 'n', global = true)]
    pub iterations: Option<u32>,

    #[arg(long, short, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    /// Print computed digits without grouping
    #[arg(long, global = true)]
    pub raw: bool,

    /// Guard bits carried beyond the requested digits
    #[arg(long, global = true, env = "APNUM_GUARD_BITS")]
    pub guard_bits: Option<u64>,

    #[arg(long, global = true, hide = true, value_enum)]
    pub inject_fault: Option<InjectedFault>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Print pi to the requested number of decimals
    Compute,
    /// Per-iteration estimates, errors and observed orders
    Table,
    /// Run the numerical identity suite
    Verify,
    /// Run all five algorithms and compare them
    Bench,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectedFault {
    QuadraticStep,
}

/// Settings shared by every command.
#[derive(Clone, Copy, Debug, Default)]
pub struct Settings {
    pub format: OutputFormat,
    pub raw: bool,
    pub guard_bits: Option<u64>,
}

impl Settings {
    fn context(&self, digits: u64) -> Result<PrecisionContext, CliError> {
        let ctx = match self.guard_bits {
            Some(g) => PrecisionContext::with_guard_bits(digits, g),
            None => make_context(digits),
        };
        Ok(ctx?)
    }

    /// Context for `digits` plus one spare digit, so truncation and
    /// agreement see past the last printed place.
    fn spare_digit_context(&self, digits: u64) -> Result<PrecisionContext, CliError> {
        if digits >= MAX_DECIMAL_DIGITS {
            let e = pi_core::Error::PrecisionCeiling {
                requested: digits,
                max: MAX_DECIMAL_DIGITS - 1,
            };
            return Err(e.into());
        }
        self.context(digits + 1)
    }
}

pub const DEFAULT_COMPUTE_DIGITS: u64 = 100;
pub const DEFAULT_TABLE_DIGITS: u64 = 50;
pub const DEFAULT_TABLE_ITERATIONS: u32 = 5;
pub const DEFAULT_VERIFY_DIGITS: u64 = 100;
pub const DEFAULT_VERIFY_N_MAX: u32 = 6;
pub const DEFAULT_BENCH_DIGITS: u64 = 1000;
pub const MIN_BENCH_DIGITS: u64 = 100;

#[derive(Serialize)]
struct ComputeRow {
    algorithm: &'static str,
    digits: u64,
    iterations: u32,
    pi: String,
}

/// Runs `algorithm` until successive estimates agree to `digits` and prints
/// pi truncated to `digits` decimals.
pub fn cmd_compute(
    algorithm: AlgorithmId,
    digits: u64,
    settings: &Settings,
    out: &mut dyn Write,
) -> CliResult {
    if digits < 1 {
        return Err(CliError::Usage("--digits must be at least 1".into()));
    }
    let ctx = settings.spare_digit_context(digits)?;
    let run = driver::compute(algorithm, &ctx)?;
    let pi = to_fixed(&run.pi, digits, DecimalRounding::TowardZero)?;
    let row = ComputeRow {
        algorithm: algorithm.name(),
        digits,
        iterations: run.iterations,
        pi,
    };
    output::emit(settings.format, out, &[&row], |w| {
        if settings.raw {
            writeln!(w, "{}", row.pi)
        } else {
            w.write_all(output::group_digits(&row.pi).as_bytes())
        }
    })
}

/// One convergence record per iteration `1..=iterations`.
pub fn cmd_table(
    algorithm: AlgorithmId,
    iterations: u32,
    digits: u64,
    settings: &Settings,
    out: &mut dyn Write,
) -> CliResult {
    if iterations < 1 {
        return Err(CliError::Usage("--iterations must be at least 1".into()));
    }
    if digits < 1 {
        return Err(CliError::Usage("--digits must be at least 1".into()));
    }
    let ctx = settings.context(digits)?;
    let rows: Vec<_> = driver::convergence(algorithm, iterations, &ctx)?
        .iter()
        .map(|r| r.row())
        .collect();
    output::emit(settings.format, out, &rows, |w| {
        writeln!(
            w,
            "{:>3}  {:>14}  {:>11}  {:>12}  estimate",
            "n", "correct_digits", "local_order", "abs_error"
        )?;
        for r in &rows {
            let order = r
                .local_order
                .map(|o| format!("{o:.4}"))
                .unwrap_or_else(|| "-".into());
            writeln!(
                w,
                "{:>3}  {:>14}  {:>11}  {:>12}  {}",
                r.n, r.correct_digits, order, r.abs_error, r.estimate
            )?;
        }
        Ok(())
    })
}

/// Prints every identity report. Fails with [`CliError::IdentityFailure`]
/// after writing the report when a non-flagged identity fails.
pub fn cmd_verify(
    n_max: u32,
    digits: u64,
    fault: Option<Fault>,
    settings: &Settings,
    out: &mut dyn Write,
) -> CliResult {
    if n_max < 2 {
        return Err(CliError::Usage(
            "verify needs --iterations of at least 2".into(),
        ));
    }
    let ctx = settings.context(digits)?;
    let reports = check_identities_with(n_max, &ctx, CheckOptions { fault })?;
    let rows: Vec<_> = reports.iter().map(|r| r.row()).collect();
    output::emit(settings.format, out, &rows, |w| {
        for r in &rows {
            let status = match (r.pass, r.flagged) {
                (true, false) => "PASS",
                (false, false) => "FAIL",
                (true, true) => "FLAG pass",
                (false, true) => "FLAG fail",
            };
            writeln!(
                w,
                "{status:<9}  {:<32} residual {:<10} tolerance {:<10} n {}",
                r.identity, r.max_residual, r.tolerance, r.n_range
            )?;
            if !r.note.is_empty() {
                writeln!(w, "           note: {}", r.note)?;
            }
        }
        let failed = rows.iter().filter(|r| !r.pass && !r.flagged).count();
        let flagged = rows.iter().filter(|r| r.flagged).count();
        writeln!(
            w,
            "{} identities at {} digits: {} failed, {} flagged",
            rows.len(),
            digits,
            failed,
            flagged
        )
    })?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass && !r.flagged)
        .map(|r| r.identity_name.clone())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::IdentityFailure(failed))
    }
}

/// Bench output for one algorithm. Every field except `wall_ms` is
/// reproducible.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub algorithm: &'static str,
    pub iterations: u32,
    pub sqrt_calls: u64,
    pub root_calls: u64,
    /// Correct digits against the Machin oracle.
    pub oracle_digits: u64,
    /// Fewest digits shared with any other algorithm's result.
    pub agreement_digits: u64,
    pub wall_ms: f64,
}

/// Runs all five algorithms concurrently to `digits` and compares them.
pub fn bench(digits: u64, settings: &Settings) -> Result<Vec<BenchRow>, CliError> {
    if digits < MIN_BENCH_DIGITS {
        return Err(CliError::Usage(format!(
            "bench needs --digits of at least {MIN_BENCH_DIGITS}"
        )));
    }
    let ctx = settings.spare_digit_context(digits)?;
    let runs: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = AlgorithmId::ALL
            .map(|alg| {
                scope.spawn(move || {
                    stats::reset();
                    let start = Instant::now();
                    let run = driver::compute(alg, &ctx);
                    let elapsed = start.elapsed();
                    run.map(|r| (r, stats::snapshot(), elapsed))
                })
            })
            .into_iter()
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let oracle = machin_pi(&ctx);
    let pis: Vec<&Real> = runs.iter().map(|(r, _, _)| &r.pi).collect();
    let mut rows = Vec::with_capacity(runs.len());
    for (i, (run, counts, elapsed)) in runs.iter().enumerate() {
        let mut agreement = u64::MAX;
        for (j, other) in pis.iter().enumerate() {
            if i != j {
                agreement = agreement.min(correct_digits(&run.pi, other)?);
            }
        }
        rows.push(BenchRow {
            algorithm: run.algorithm.name(),
            iterations: run.iterations,
            sqrt_calls: counts.sqrt,
            root_calls: counts.root,
            oracle_digits: correct_digits(&run.pi, &oracle)?,
            agreement_digits: agreement,
            wall_ms: elapsed.as_secs_f64() * 1e3,
        });
    }
    Ok(rows)
}

pub fn cmd_bench(digits: u64, settings: &Settings, out: &mut dyn Write) -> CliResult {
    let rows = bench(digits, settings)?;
    output::emit(settings.format, out, &rows, |w| {
        writeln!(
            w,
            "{:<15} {:>10} {:>10} {:>10} {:>13} {:>16}",
            "algorithm",
            "iterations",
            "sqrt_calls",
            "root_calls",
            "oracle_digits",
            "agreement_digits"
        )?;
        for r in &rows {
            writeln!(
                w,
                "{:<15} {:>10} {:>10} {:>10} {:>13} {:>16}",
                r.algorithm,
                r.iterations,
                r.sqrt_calls,
                r.root_calls,
                r.oracle_digits,
                r.agreement_digits
            )?;
        }
        writeln!(w)?;
        writeln!(w, "wall time (varies between runs)")?;
        for r in &rows {
            writeln!(w, "{:<15} {:>10.1} ms", r.algorithm, r.wall_ms)?;
        }
        Ok(())
    })
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let rendered = e.render().to_string();
            let _ = if code == exit::OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = dispatch(&cli, &mut buffer);
    let release = match &result {
        Ok(()) | Err(CliError::IdentityFailure(_)) => true,
        Err(_) => false,
    };
    if release {
        let written = match &cli.out {
            Some(path) => std::fs::write(path, &buffer),
            None => stdout.write_all(&buffer).and_then(|_| stdout.flush()),
        };
        if let Err(e) = written {
            let _ = writeln!(stderr, "pi: {e}");
            return exit::INTERNAL;
        }
    }
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(stderr, "pi: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let settings = Settings {
        format: cli.format,
        raw: cli.raw,
        guard_bits: cli.guard_bits,
    };
    let algorithm = cli.algorithm.unwrap_or(AlgorithmId::Quartic);
    match cli.command {
        Command::Compute => cmd_compute(
            algorithm,
            cli.digits.unwrap_or(DEFAULT_COMPUTE_DIGITS),
            &settings,
            out,
        ),
        Command::Table => cmd_table(
            algorithm,
            cli.iterations.unwrap_or(DEFAULT_TABLE_ITERATIONS),
            cli.digits.unwrap_or(DEFAULT_TABLE_DIGITS),
            &settings,
            out,
        ),
        Command::Verify => cmd_verify(
            cli.iterations.unwrap_or(DEFAULT_VERIFY_N_MAX),
            cli.digits.unwrap_or(DEFAULT_VERIFY_DIGITS),
            cli.inject_fault
                .map(|InjectedFault::QuadraticStep| Fault::CorruptQuadraticStep),
            &settings,
            out,
        ),
        Command::Bench => cmd_bench(cli.digits.unwrap_or(DEFAULT_BENCH_DIGITS), &settings, out),
    }
}
