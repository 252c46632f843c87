//! `reflectron`: tabulate cubic fields, verify and predict reflection
//! identities, and reconcile predictions with field tables.
//!
//! Exit codes: 0 when every check passes, 2 when some identity check fails,
//! 1 on usage or I/O errors.

mod report;

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use rayon::prelude::*;

use reflectron::arith::fundamental_discriminants_in;
use reflectron::cubicforms::{enumerate_cubic_fields, SignSelection};
use reflectron::fieldtables::{compare_with_table, parse_field_table, ComparisonReport, Subject};
use reflectron::quadforms::class_group;
use reflectron::reflection::{corollary5_predict, predict, verify_on3_range};
use reflectron::FundamentalDiscriminant;

use report::{cubic_rows, emit, ClassGroupRow, Format, PredictionRow, Row};

#[derive(Debug, Parser)]
#[command(
    name = "reflectron",
    version,
    about = "Reflection identities between dihedral and Frobenius field counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, env = "REFLECTRON_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
struct DiscriminantSelection {
    /// A single fundamental discriminant.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
    /// Every fundamental discriminant `D` with `1 < |D| <= dmax`.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    dmax: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class group structures (narrow for positive discriminants).
    Classgroup {
        #[command(flatten)]
        select: DiscriminantSelection,
    },
    /// Counts of cubic fields by discriminant, `|disc| <= xmax`.
    CubicTab {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        xmax: u64,
        #[arg(long, value_enum, default_value = "both")]
        signs: Signs,
    },
    /// Check `N3(D*) + N3(-27D)` against `N3(D)` for `1 < |D| <= dmax`, `D != -3`.
    VerifyOn {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
    },
    /// Predicted degree `ell` target discriminants and counts.
    Predict {
        #[arg(long)]
        ell: u64,
        #[command(flatten)]
        select: DiscriminantSelection,
        /// Attach the degree 5 three-term identity (requires ell = 5).
        #[arg(long)]
        corollary5: bool,
    },
    /// The degree 5 three-term identity for `d` coprime to 5.
    Corollary5 {
        #[command(flatten)]
        select: DiscriminantSelection,
    },
    /// Compare predictions with a field table.
    CheckTable {
        #[arg(long)]
        table: PathBuf,
        /// Degree of the prediction; ignored with --corollary5.
        #[arg(long, required_unless_present = "corollary5")]
        ell: Option<u64>,
        #[arg(long)]
        corollary5: bool,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
        /// The table lists every field with |disc| at most this bound.
        /// Without it the table is taken to be complete.
        #[arg(long)]
        assume_complete_below: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Signs {
    Negative,
    Positive,
    Both,
}

impl From<Signs> for SignSelection {
    fn from(s: Signs) -> Self {
        match s {
            Signs::Negative => SignSelection::Negative,
            Signs::Positive => SignSelection::Positive,
            Signs::Both => SignSelection::Both,
        }
    }
}

/// A usage or I/O problem; identity violations are reported through
/// [`Outcome::passed`] instead.
enum Failure {
    Usage(String),
}

impl From<reflectron::Error> for Failure {
    fn from(e: reflectron::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// A rendered report and whether every check in it passed.
struct Outcome {
    body: String,
    passed: bool,
}

fn render<T: Row>(rows: &[T], format: Format, passed: bool) -> Result<Outcome, Failure> {
    Ok(Outcome {
        body: emit(rows, format).map_err(Failure::Usage)?,
        passed,
    })
}

fn selected(
    select: &DiscriminantSelection,
    keep: impl Fn(i64) -> bool,
) -> Result<Vec<FundamentalDiscriminant>, Failure> {
    match (select.d, select.dmax) {
        (Some(d), _) => Ok(vec![FundamentalDiscriminant::new(d)?]),
        (None, Some(dmax)) => {
            let bound = i64::try_from(dmax).map_err(|_| Failure::Usage("dmax too large".into()))?;
            Ok(fundamental_discriminants_in(-bound, bound)
                .into_iter()
                .filter(|d| d.value() != 1 && keep(d.value()))
                .collect())
        }
        (None, None) => Err(Failure::Usage("one of --d, --dmax is required".into())),
    }
}

fn excluded_for(ell: u64) -> impl Fn(i64) -> bool {
    move |d| d.unsigned_abs() != ell
}

fn coprime_to_5(d: i64) -> bool {
    d % 5 != 0
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Classgroup { select } => {
            let rows = selected(select, |_| true)?
                .into_par_iter()
                .map(|d| class_group(d).map(ClassGroupRow::from))
                .collect::<reflectron::Result<Vec<_>>>()?;
            render(&rows, format, true)
        }
        Command::CubicTab { xmax, signs } => {
            let tab = enumerate_cubic_fields(*xmax, (*signs).into());
            render(&cubic_rows(&tab), format, true)
        }
        Command::VerifyOn { dmax } => {
            let xmax = dmax
                .checked_mul(27)
                .ok_or(Failure::Usage("dmax too large".into()))?;
            let tab = enumerate_cubic_fields(xmax, SignSelection::Both);
            let reports = verify_on3_range(*dmax, &tab)?;
            let passed = reports.iter().all(|r| r.holds);
            render(&reports, format, passed)
        }
        Command::Predict {
            ell,
            select,
            corollary5,
        } => {
            if *corollary5 && *ell != 5 {
                return Err(Failure::Usage("--corollary5 requires --ell 5".into()));
            }
            let rows = selected(select, excluded_for(*ell))?
                .into_par_iter()
                .map(|d| {
                    let extra = if *corollary5 && coprime_to_5(d.value()) {
                        Some(corollary5_predict(d)?)
                    } else {
                        None
                    };
                    Ok(PredictionRow {
                        record: predict(*ell, d)?,
                        corollary5: extra,
                    })
                })
                .collect::<reflectron::Result<Vec<_>>>()?;
            render(&rows, format, true)
        }
        Command::Corollary5 { select } => {
            let rows = selected(select, coprime_to_5)?
                .into_par_iter()
                .map(corollary5_predict)
                .collect::<reflectron::Result<Vec<_>>>()?;
            render(&rows, format, true)
        }
        Command::CheckTable {
            table,
            ell,
            corollary5,
            dmax,
            assume_complete_below,
        } => {
            let bound = assume_complete_below
                .as_deref()
                .map(BigUint::from_str)
                .transpose()
                .map_err(|e| Failure::Usage(format!("--assume-complete-below: {e}")))?;
            let file = File::open(table)
                .map_err(|e| Failure::Usage(format!("{}: {e}", table.display())))?;
            let entries = parse_field_table(io::BufReader::new(file))?;
            let select = DiscriminantSelection {
                d: None,
                dmax: Some(*dmax),
            };
            let reports: Vec<ComparisonReport> = if *corollary5 {
                selected(&select, coprime_to_5)?
                    .into_par_iter()
                    .map(|d| {
                        let c = corollary5_predict(d)?;
                        compare_with_table(Subject::Corollary5(&c), &entries, bound.as_ref())
                    })
                    .collect::<reflectron::Result<_>>()?
            } else {
                let ell = ell.ok_or(Failure::Usage("--ell is required".into()))?;
                selected(&select, excluded_for(ell))?
                    .into_par_iter()
                    .map(|d| {
                        let p = predict(ell, d)?;
                        compare_with_table(Subject::Prediction(&p), &entries, bound.as_ref())
                    })
                    .collect::<reflectron::Result<_>>()?
            };
            let passed = reports.iter().all(|r| !r.verdict.is_failure());
            render(&reports, format, passed)
        }
    }
}

fn write_report(cli: &Cli, body: &str) -> io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
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
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        pool = pool.num_threads(n as usize);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| run(&cli));
    let outcome = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_report(&cli, &outcome.body) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("some checks failed; see the report");
        ExitCode::from(2)
    }
}
