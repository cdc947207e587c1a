//! The `gdet` command line.
//!
//! Exit codes: 0 success, 1 verification failure or runtime error, 2 usage
//! error, 3 memory budget exhausted.

pub mod cache;
pub mod runner;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::group::{catalog, group_by_gap_id, group_by_name, FiniteGroup};
use crate::partitions::CountMethod;
use crate::poly::MemoryBudget;
use crate::wolstenholme::{classify_prime, is_prime, scan_range, PrimeReport, ScanConfig};
use crate::{Error, Result};

pub use runner::{parse_bytes, parse_orders, MethodChoice, ModeChoice, RunConfig, RunStats, Runner};
pub use table::{Cell, OutputFormat, Row, Table};
pub use verify::{Check, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gdet",
    version,
    about = "Term counts of group determinants, restricted partitions and Wolstenholme primes"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Coefficient arithmetic; `auto` switches to modprime from order 14.
    #[arg(long, global = true, value_enum, default_value_t = ModeChoice::Auto)]
    pub mode: ModeChoice,
    /// Memory budget for polynomial products, e.g. `8G` or `512M` (minimum 64M).
    #[arg(long, global = true, default_value = "8G", value_parser = parse_budget)]
    pub budget: u64,
    /// Directory for cached polynomials; no caching when absent.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

fn parse_budget(s: &str) -> std::result::Result<u64, String> {
    parse_bytes(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N(Theta(C_n)^k) for k = 1..k-max.
    Terms {
        /// Orders: `5`, `1-7` or `3,5,7`.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1)]
        k_max: u32,
    },
    /// N(Theta(G)^k) for a catalogued or named group.
    GroupTerms {
        /// Catalog id `order,number`, e.g. `16,14`.
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        gap: Option<String>,
        /// Group name such as `C8`, `D16`, `Q8:C2` or `C2^4`.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
    },
    /// |Lambda_n^k| for n = n-min..n-max and k = 1..k-max.
    Partitions {
        #[arg(long, default_value_t = 1)]
        n_min: u64,
        #[arg(long, default_value_t = 9)]
        n_max: u64,
        #[arg(long, default_value_t = 10)]
        k_max: u64,
        #[arg(long, value_enum, default_value_t = PartitionMethod::Formula)]
        method: PartitionMethod,
    },
    /// Classifies one prime or every prime in a range.
    Check {
        #[arg(long, conflicts_with_all = ["lo", "hi"], required_unless_present_all = ["lo", "hi"])]
        p: Option<u64>,
        #[arg(long, requires = "hi")]
        lo: Option<u64>,
        #[arg(long, requires = "lo")]
        hi: Option<u64>,
    },
    /// Resumable search for Wolstenholme primes.
    Scan {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        /// Checkpoint file `last_prime count`, rewritten after every chunk.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Primes per chunk.
        #[arg(long, default_value_t = 256)]
        chunk: usize,
        /// Also compute the harmonic residue for primes p with p % stride == 1 (0 disables).
        #[arg(long, default_value_t = 97)]
        harmonic_stride: u64,
        /// Emit a report for every prime rather than a summary.
        #[arg(long)]
        reports: bool,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Lists the catalogued groups of one order as JSON records.
    Catalog {
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum PartitionMethod {
    Formula,
    Enumeration,
}

impl From<PartitionMethod> for CountMethod {
    fn from(m: PartitionMethod) -> Self {
        match m {
            PartitionMethod::Formula => CountMethod::Formula,
            PartitionMethod::Enumeration => CountMethod::Enumeration,
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_RESOURCE,
        Error::InvalidArgument(_)
        | Error::UnknownGroup(_)
        | Error::NotPrime(_)
        | Error::PrimeTooSmall(_)
        | Error::Guardrail(_)
        | Error::InvalidOrder { .. }
        | Error::TooManyVariables(_)
        | Error::OrderTooLarge(_)
        | Error::ModulusTooLarge { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
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
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let config = RunConfig {
        mode: cli.global.mode,
        budget: MemoryBudget::new(cli.global.budget),
        cache_dir: cli.global.cache.clone(),
        format: cli.global.format,
        jobs: cli.global.jobs,
    };
    config.validate()?;
    match config.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            // output is buffered so the worker pool never touches `out`
            let mut buf = Vec::new();
            let code = pool.install(|| dispatch(&cli.command, config, &mut buf));
            out.write_all(&buf)?;
            code
        }
        None => dispatch(&cli.command, config, out),
    }
}

fn dispatch(command: &Command, config: RunConfig, out: &mut dyn Write) -> Result<i32> {
    let format = config.format;
    match command {
        Command::Terms { n, k_max } => {
            let ns = parse_orders(n)?;
            let mut runner = Runner::new(config)?;
            let (table, rows) = runner.terms_table(&ns, *k_max)?;
            out.write_all(table.render(format).as_bytes())?;
            log_stats(runner.stats());
            Ok(if rows.iter().all(|r| r.is_complete()) {
                EXIT_OK
            } else {
                EXIT_RESOURCE
            })
        }
        Command::GroupTerms { gap, name, k, method } => {
            let group = select_group(gap.as_deref(), name.as_deref())?;
            let mut runner = Runner::new(config)?;
            let row = runner.power_counts(&group, *k, *method)?;
            log_stats(runner.stats());
            write_group_terms(out, &row, format)?;
            Ok(if row.is_complete() { EXIT_OK } else { EXIT_RESOURCE })
        }
        Command::Partitions {
            n_min,
            n_max,
            k_max,
            method,
        } => {
            let table = runner::partitions_table(*n_min, *n_max, *k_max, (*method).into())?;
            out.write_all(table.render(format).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Check { p, lo, hi } => {
            let reports = match (p, lo, hi) {
                (Some(p), _, _) => {
                    if !is_prime(*p) {
                        return Err(Error::NotPrime(*p));
                    }
                    vec![classify_prime(*p)?]
                }
                (None, Some(lo), Some(hi)) => {
                    let mut cfg = ScanConfig::new(*lo, *hi);
                    cfg.harmonic_stride = 1;
                    scan_range(&cfg)?.reports
                }
                _ => return Err(Error::InvalidArgument("give --p or both --lo and --hi".into())),
            };
            write_reports(out, &reports, format)?;
            Ok(EXIT_OK)
        }
        Command::Scan {
            lo,
            hi,
            checkpoint,
            chunk,
            harmonic_stride,
            reports,
        } => {
            let mut cfg = ScanConfig::new(*lo, *hi);
            cfg.checkpoint = checkpoint.clone();
            cfg.chunk = *chunk;
            cfg.harmonic_stride = *harmonic_stride;
            let outcome = scan_range(&cfg)?;
            if *reports {
                write_reports(out, &outcome.reports, format)?;
            }
            let summary = ScanSummary {
                lo: *lo,
                hi: *hi,
                primes_processed: outcome.reports.len(),
                resumed_after: outcome.resumed_after,
                wolstenholme_primes: outcome.wolstenholme.clone(),
                count_found: outcome.count_found,
                criteria_disagreements: outcome.disagreements(),
            };
            write_scan_summary(out, &summary, format, *reports)?;
            Ok(if summary.criteria_disagreements.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Verify { suite } => {
            let mut runner = Runner::new(config)?;
            let checks = verify::run_suite(*suite, &mut runner)?;
            out.write_all(verify::render(&checks, format).as_bytes())?;
            Ok(if verify::all_passed(&checks) {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Catalog { order } => {
            let groups = catalog(*order)?;
            write_catalog(out, &groups, format)?;
            Ok(EXIT_OK)
        }
    }
}

fn log_stats(s: RunStats) {
    log::info!(
        "expansions {}, multiplications {}, cache hits {}, cache writes {}",
        s.expansions,
        s.multiplications,
        s.cache_hits,
        s.cache_writes
    );
}

/// Resolves `--gap order,number` or `--name`.
pub fn select_group(gap: Option<&str>, name: Option<&str>) -> Result<FiniteGroup> {
    match (gap, name) {
        (Some(id), _) => {
            let parsed = id
                .split_once(',')
                .and_then(|(o, i)| Some((o.trim().parse::<u32>().ok()?, i.trim().parse::<u32>().ok()?)));
            let (order, number) =
                parsed.ok_or_else(|| Error::InvalidArgument(format!("catalog id `{id}` is not `order,number`")))?;
            group_by_gap_id(order, number)
        }
        (None, Some(name)) => group_by_name(name),
        (None, None) => Err(Error::InvalidArgument("give --gap or --name".into())),
    }
}

#[derive(Serialize)]
struct GroupTermsRecord<'a> {
    group: &'a str,
    order: usize,
    gap_id: Option<(u32, u32)>,
    k: usize,
    value: Option<u64>,
    exact: bool,
    failure_bound: Option<f64>,
    method: &'a str,
    mode: String,
}

fn write_group_terms(out: &mut dyn Write, row: &runner::PowerCounts, format: OutputFormat) -> Result<()> {
    let gap = row
        .gap_id
        .map(|(o, i)| format!("{o},{i}"))
        .unwrap_or_else(|| "-".into());
    match format {
        OutputFormat::Json => {
            let records: Vec<GroupTermsRecord> = row
                .counts
                .iter()
                .enumerate()
                .map(|(i, c)| GroupTermsRecord {
                    group: &row.group,
                    order: row.order,
                    gap_id: row.gap_id,
                    k: i + 1,
                    value: c.map(|c| c.terms),
                    exact: c.is_some_and(|c| c.is_exact()),
                    failure_bound: c.and_then(|c| c.failure_bound),
                    method: row.method.as_str(),
                    mode: row.mode.to_string(),
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &records)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "group,gap_id,k,value,exact,method,mode")?;
            for (i, c) in row.counts.iter().enumerate() {
                let (value, exact) = match c {
                    Some(c) => (c.terms.to_string(), c.is_exact()),
                    None => ("*".to_string(), false),
                };
                writeln!(
                    out,
                    "{},\"{gap}\",{},{value},{exact},{},{}",
                    row.group,
                    i + 1,
                    row.method,
                    row.mode
                )?;
            }
        }
        OutputFormat::Human => {
            writeln!(
                out,
                "{} (order {}, catalog id {gap}), method {}, mode {}",
                row.group, row.order, row.method, row.mode
            )?;
            for (i, c) in row.counts.iter().enumerate() {
                match c {
                    Some(c) => writeln!(out, "  N(Theta^{}) = {c}", i + 1)?,
                    None => writeln!(out, "  N(Theta^{}) = * (not computed within the memory budget)", i + 1)?,
                }
            }
        }
    }
    Ok(())
}

fn write_reports(out: &mut dyn Write, reports: &[PrimeReport], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "p,residue_p2,residue_p3,residue_p4,n_theta_residue_p3,harmonic_residue_p3,wolstenholme_prime,wolstenholme_theorem"
            )?;
            for r in reports {
                let h = r.harmonic_residue_p3.map(|h| h.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{h},{},{}",
                    r.p,
                    r.residue_p2,
                    r.residue_p3,
                    r.residue_p4,
                    r.n_theta_residue_p3,
                    r.is_wolstenholme_prime,
                    r.satisfies_wolstenholme_theorem
                )?;
            }
        }
        OutputFormat::Human => {
            for r in reports {
                let yes = |b: bool| if b { "yes" } else { "no" };
                writeln!(out, "p = {}", r.p)?;
                writeln!(
                    out,
                    "  C(2p-1, p-1) mod p^2, p^3, p^4: {}, {}, {}",
                    r.residue_p2, r.residue_p3, r.residue_p4
                )?;
                writeln!(out, "  N(Theta(C_p)) mod p^3: {}", r.n_theta_residue_p3)?;
                if let Some(h) = r.harmonic_residue_p3 {
                    writeln!(out, "  H_(p-1) mod p^3: {h}")?;
                }
                if r.p >= 5 {
                    writeln!(
                        out,
                        "  Wolstenholme theorem (mod p^3): {}",
                        yes(r.satisfies_wolstenholme_theorem)
                    )?;
                }
                writeln!(out, "  Wolstenholme prime: {}", yes(r.is_wolstenholme_prime))?;
                if let Some(note) = &r.note {
                    writeln!(out, "  note: {note}")?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanSummary {
    lo: u64,
    hi: u64,
    primes_processed: usize,
    resumed_after: Option<u64>,
    wolstenholme_primes: Vec<u64>,
    count_found: u64,
    criteria_disagreements: Vec<u64>,
}

fn write_scan_summary(out: &mut dyn Write, s: &ScanSummary, format: OutputFormat, after_reports: bool) -> Result<()> {
    match format {
        OutputFormat::Json if after_reports => {}
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, s)?;
            writeln!(out)?;
        }
        OutputFormat::Csv if after_reports => {}
        OutputFormat::Csv => {
            writeln!(out, "lo,hi,primes_processed,wolstenholme_primes,count_found")?;
            let found: Vec<String> = s.wolstenholme_primes.iter().map(u64::to_string).collect();
            writeln!(
                out,
                "{},{},{},\"{}\",{}",
                s.lo,
                s.hi,
                s.primes_processed,
                found.join(" "),
                s.count_found
            )?;
        }
        OutputFormat::Human => {
            if let Some(last) = s.resumed_after {
                writeln!(out, "resumed after p = {last}")?;
            }
            writeln!(
                out,
                "scanned [{}, {}]: {} primes processed",
                s.lo, s.hi, s.primes_processed
            )?;
            writeln!(
                out,
                "Wolstenholme primes found: {:?} (total recorded: {})",
                s.wolstenholme_primes, s.count_found
            )?;
            if !s.criteria_disagreements.is_empty() {
                writeln!(out, "harmonic criterion disagrees at {:?}", s.criteria_disagreements)?;
            }
        }
    }
    Ok(())
}

fn write_catalog(out: &mut dyn Write, groups: &[FiniteGroup], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Human => {
            for g in groups {
                let (o, i) = g.gap_id().unwrap_or((g.order() as u32, 0));
                let orders: Vec<String> = g.order_statistics().iter().map(|(k, v)| format!("{k}:{v}")).collect();
                let kind = if g.is_abelian() { "abelian" } else { "nonabelian" };
                writeln!(
                    out,
                    "{o},{i:<3} {:<8} {kind:<10} element orders {}",
                    g.name(),
                    orders.join(" ")
                )?;
            }
        }
        _ => {
            let records: Vec<_> = groups.iter().map(FiniteGroup::to_record).collect();
            serde_json::to_writer_pretty(&mut *out, &records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
