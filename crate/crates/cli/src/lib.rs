//! Front end for `ordembed-core`: document formats, commands and reports.
//!
//! Exit codes: 0 pass, 2 unreadable input or bad flags, 3 invalid order or
//! failed precondition, 4 failed check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod format;
pub mod report;

pub use report::{CommandError, Exit, Report};

#[derive(Debug, Parser)]
#[command(
    name = "ordembed",
    version,
    about = "Order embeddings of Z^N and Jensen checks on the torus"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Print the JSON report on standard output instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave out the meta block (timestamps), making reports reproducible.
    #[arg(long, global = true)]
    pub no_meta: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the chain conditions of an order file.
    Validate { order: PathBuf },
    /// Sign of a vector under an order, e.g. `sgn order.json "[1,-2]"`.
    Sgn {
        order: PathBuf,
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// Build and certify a map into the lexicographic order.
    Embed {
        order: PathBuf,
        /// Vector-set file giving S.
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        set: Option<PathBuf>,
        /// Polynomial file whose support gives S.
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Write psi to this file.
        #[arg(long, value_name = "PATH")]
        psi_out: Option<PathBuf>,
        /// Certify the psi read from this file (a psi file or a report)
        /// instead of building one.
        #[arg(long, value_name = "PATH")]
        verify_only: Option<PathBuf>,
    },
    /// Split a polynomial into its martingale differences.
    Decompose { poly: PathBuf },
    /// Jensen, step and p-mean checks on an analytic polynomial.
    Check(CheckArgs),
    /// Seeded randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Polynomial file.
    pub poly: PathBuf,
    /// Order for which the polynomial is analytic; it is relabeled through
    /// embed before the checks. Without it the polynomial must be Hardy.
    #[arg(long)]
    pub order: Option<PathBuf>,
    /// Jensen inequality for the whole polynomial.
    #[arg(long)]
    pub jensen: bool,
    /// Jensen inequality between consecutive conditional expectations.
    #[arg(long)]
    pub steps: bool,
    /// p-mean check for this exponent in (0, 1); repeatable.
    #[arg(long, value_name = "P")]
    pub pmean: Vec<f64>,
    /// Starting grid points per axis.
    #[arg(long, value_name = "M")]
    pub grid: Option<usize>,
    /// Evaluate at the starting grid only.
    #[arg(long)]
    pub no_refine: bool,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let start = Instant::now();
    let report = commands::execute(&cli.command);
    let meta = (!cli.global.no_meta).then(|| start.elapsed());
    let doc = format::pretty(&report.to_json(meta));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if cli.global.json {
        let _ = out.write_all(doc.as_bytes());
    } else {
        let status = report.verdict().to_uppercase();
        let _ = writeln!(out, "{}: {status}", report.command);
        for line in report.summary.iter().filter(|l| !l.starts_with("error: ")) {
            let _ = writeln!(out, "  {line}");
        }
    }
    if let Some(line) = report.summary.iter().find(|l| l.starts_with("error: ")) {
        eprintln!("{line}");
    }
    if let Some(path) = &cli.global.out {
        if let Err(e) = std::fs::write(path, &doc) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Exit::Usage.code();
        }
    }
    report.exit.code()
}
