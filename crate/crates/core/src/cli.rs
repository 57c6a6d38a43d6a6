//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and maps the result to a process exit code.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classifier::{classify, enumerate_with_summary, write_csv, Classification, EnumerationSummary, Mode};
use crate::curve::{count_points_off_diagonal, gamma_coeffs, split_analysis, CurveCoeffs, SplitReport};
use crate::error::{Error, Result};
use crate::fields::{parse_hex, ExtCtx, FieldCtx, Fq2Elem, FqElem};
use crate::symbolic::{run_suite, Suite};
use crate::trinomial::{PairAB, TrinomialCtx};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// Work units allowed when `PERMTRI_BUDGET` is unset.
pub const DEFAULT_BUDGET: u64 = 50_000_000_000;
pub const BUDGET_VAR: &str = "PERMTRI_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "permtri", version, about = "Permutation trinomials over GF(q^2), q = 2^m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every test on one pair and check that they agree.
    VerifyPair(PairArgs),
    /// Sweep all pairs of a field.
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Mode::Mu)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Curve coefficients and the number of its off-diagonal GF(q)-points.
    CurvePoints(PairArgs),
    /// How the curve factors.
    Split(PairArgs),
    /// Replay the symbolic derivations.
    Symbolic {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Degree of GF(q) over GF(2).
    #[arg(long)]
    pub m: u32,
    /// Defining polynomial of GF(q) as a bitmask, e.g. 0xb.
    #[arg(long, value_parser = parse_hex)]
    pub modulus: Option<u64>,
    /// Trace-one element k with i^2 = i + k.
    #[arg(long)]
    pub k: Option<FqElem>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// alpha = A + iB given as A:B.
    #[arg(long, value_parser = Fq2Elem::parse_pair)]
    pub alpha: Fq2Elem,
    /// beta = C + iD given as C:D.
    #[arg(long, value_parser = Fq2Elem::parse_pair)]
    pub beta: Fq2Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl FieldArgs {
    pub fn ext(&self) -> Result<ExtCtx> {
        ExtCtx::new(FieldCtx::new(self.m, self.modulus)?, self.k)
    }
}

impl PairArgs {
    fn resolve(&self) -> Result<(ExtCtx, PairAB)> {
        let ext = self.field.ext()?;
        for x in [self.alpha, self.beta] {
            if !ext.contains(x) {
                return Err(Error::NotInField(x.a.0.max(x.b.0)));
            }
        }
        Ok((ext, PairAB::new(self.alpha, self.beta)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Permutation,
    NotPermutation,
    /// The test does not apply to this pair.
    Inconclusive,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Verdict {
        if b {
            Verdict::Permutation
        } else {
            Verdict::NotPermutation
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub bruteforce: Verdict,
    pub mu: Verdict,
    pub condition: Verdict,
    pub split: Verdict,
    /// Decided by the absence of off-diagonal points; inconclusive when the
    /// fractional map has a pole on the roots of unity, and for q = 4, where
    /// collisions through the point at infinity escape the affine count.
    pub curve: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub q: u32,
    pub alpha: Fq2Elem,
    pub beta: Fq2Elem,
    pub verdicts: Verdicts,
    pub classification: Classification,
    pub has_mu_pole: bool,
    pub off_diagonal_points: u64,
    pub split: SplitReport,
    pub consistent: bool,
}

pub fn verify_pair(ctx: &TrinomialCtx, pair: &PairAB) -> Result<PairReport> {
    let ext = ctx.ext();
    let [a, b, c, d] = pair.coords();
    let classification = classify(ext, pair)?;
    let split = split_analysis(ext, a, b, c, d)?;
    let has_mu_pole = ctx.has_mu_pole(pair);
    let off_diagonal_points = count_points_off_diagonal(ext.base(), &gamma_coeffs(ext, a, b, c, d));
    let verdicts = Verdicts {
        bruteforce: ctx.is_pp_bruteforce(pair).into(),
        mu: ctx.is_perm_mu(pair).into(),
        condition: classification.is_positive().into(),
        split: split.is_nonrational().into(),
        curve: if has_mu_pole || ext.m() < 3 {
            Verdict::Inconclusive
        } else {
            (off_diagonal_points == 0).into()
        },
    };
    let v = &verdicts;
    let consistent = [v.mu, v.condition, v.split, v.curve]
        .iter()
        .all(|&x| x == v.bruteforce || x == Verdict::Inconclusive)
        && classification.is_consistent()
        && split.case_id == classification.case_id;
    Ok(PairReport {
        q: ext.q(),
        alpha: pair.alpha,
        beta: pair.beta,
        verdicts,
        classification,
        has_mu_pole,
        off_diagonal_points,
        split,
        consistent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub q: u32,
    pub alpha: Fq2Elem,
    pub beta: Fq2Elem,
    pub gamma: CurveCoeffs,
    pub off_diagonal_points: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitOutput {
    pub q: u32,
    pub alpha: Fq2Elem,
    pub beta: Fq2Elem,
    #[serde(flatten)]
    pub report: SplitReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationRow {
    pub alpha: Fq2Elem,
    pub beta: Fq2Elem,
    pub permutes: bool,
    #[serde(flatten)]
    pub classification: Classification,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub summary: EnumerationSummary,
    pub pairs: Vec<EnumerationRow>,
}

/// Projected work of a cross-checked sweep: pair count times the cost of
/// the selected test plus its reference, in field operations.
pub fn projected_work(m: u32, mode: Mode) -> u64 {
    let q = 1u64 << m;
    let pairs = (q * q - 1) * (q * q - 1);
    let per_pair = match mode {
        Mode::Bruteforce => q * q + u64::from(m),
        Mode::Mu | Mode::Condition => q + 1 + u64::from(m),
    };
    pairs.saturating_mul(per_pair)
}

pub fn check_budget(m: u32, mode: Mode, budget: u64) -> Result<()> {
    let projected = projected_work(m, mode);
    if projected > budget {
        return Err(Error::ResourceLimit { projected, budget });
    }
    Ok(())
}

/// The budget from `PERMTRI_BUDGET`, or [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_VAR) {
        Ok(s) => s
            .trim()
            .replace('_', "")
            .parse()
            .map_err(|_| Error::Parse(format!("{BUDGET_VAR}={s:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

#[derive(Debug)]
pub enum Failure {
    Usage(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

/// Runs one parsed command, writing its report to `out`. Returns `true` when
/// everything checked was consistent.
pub fn execute(command: &Command, budget: u64, out: &mut dyn Write) -> std::result::Result<bool, Failure> {
    match command {
        Command::VerifyPair(args) => {
            let (ext, pair) = args.resolve()?;
            let q2 = 1u64 << (2 * ext.m());
            if q2 > budget {
                return Err(Error::ResourceLimit { projected: q2, budget }.into());
            }
            let report = verify_pair(&TrinomialCtx::new(ext), &pair)?;
            write_json(out, &report)?;
            Ok(report.consistent)
        }
        Command::Enumerate { field, mode, format } => {
            check_budget(field.m, *mode, budget)?;
            let ctx = TrinomialCtx::new(field.ext()?);
            let (records, summary) = enumerate_with_summary(&ctx, *mode);
            let ok = summary.mismatches == 0 && summary.inconsistent_cases == 0;
            match format {
                Format::Json => {
                    let pairs = records
                        .iter()
                        .map(|r| EnumerationRow {
                            alpha: r.pair.alpha,
                            beta: r.pair.beta,
                            permutes: r.permutes,
                            classification: r.classification,
                        })
                        .collect();
                    write_json(out, &EnumerationReport { summary, pairs })?;
                }
                Format::Csv => {
                    let rows: Vec<_> = records
                        .iter()
                        .filter(|r| r.permutes)
                        .map(|r| (r.pair, r.classification))
                        .collect();
                    write_csv(&mut *out, summary.q, &rows)?;
                    eprintln!("{}", serde_json::to_string(&summary).map_err(io::Error::from)?);
                }
            }
            Ok(ok)
        }
        Command::CurvePoints(args) => {
            let (ext, pair) = args.resolve()?;
            let [a, b, c, d] = pair.coords();
            let gamma = gamma_coeffs(&ext, a, b, c, d);
            let report = CurveReport {
                q: ext.q(),
                alpha: pair.alpha,
                beta: pair.beta,
                gamma,
                off_diagonal_points: count_points_off_diagonal(ext.base(), &gamma),
            };
            write_json(out, &report)?;
            Ok(true)
        }
        Command::Split(args) => {
            let (ext, pair) = args.resolve()?;
            let [a, b, c, d] = pair.coords();
            let report = SplitOutput {
                q: ext.q(),
                alpha: pair.alpha,
                beta: pair.beta,
                report: split_analysis(&ext, a, b, c, d)?,
            };
            write_json(out, &report)?;
            Ok(true)
        }
        Command::Symbolic { suite } => {
            let reports = run_suite(*suite);
            write_json(out, &reports)?;
            Ok(reports.iter().all(|r| r.passed()))
        }
    }
}

fn dispatch(cli: &Cli, budget: u64) -> std::result::Result<bool, Failure> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    let ok = execute(&cli.command, budget, &mut *sink)?;
    sink.flush()?;
    Ok(ok)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli, budget)) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("inconsistency detected");
            EXIT_INCONSISTENT
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
