//! `sumset`: group information, bound verification and equality-case scans.
//!
//! Exit codes: 0 pass, 2 violation found, 3 partial coverage, 4 usage
//! error, 5 unmet precondition, 1 any other failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sumset_core::catalog;
use sumset_core::group::load_cayley;
use sumset_core::harness::{GroupDescriptor, Harness, Mode, Pruning, SearchPlan, Status};
use sumset_core::nullstellensatz::{verify_field_lemma_with, FieldLemmaOptions};
use sumset_core::reports::{GroupInfo, ReportDocument, ReportResult, Timing};
use sumset_core::{BoundKind, Error, FiniteField, FiniteGroup};

const EXIT_FAIL: u8 = 2;
const EXIT_PARTIAL: u8 = 3;
const EXIT_USAGE: u8 = 4;
const EXIT_PRECONDITION: u8 = 5;
const EXIT_RUNTIME: u8 = 1;

const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Parser)]
#[command(name = "sumset", version, about = "Restricted and twisted sumsets in small finite groups")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "SUMSET_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print order, p(G), structural flags and the automorphism count.
    GroupInfo {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Directory for cached automorphism groups.
        #[arg(long)]
        aut_cache: Option<PathBuf>,
        /// Skip automorphism enumeration.
        #[arg(long)]
        no_automorphisms: bool,
    },
    /// Check one bound or structure theorem over a search plan.
    Verify {
        #[arg(value_enum)]
        theorem: TheoremArg,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        aut_cache: Option<PathBuf>,
    },
    /// List the instances meeting a bound with equality.
    Extremal {
        #[arg(long, value_enum)]
        bound: BoundArg,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        plan: PlanArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        aut_cache: Option<PathBuf>,
    },
    /// List the group names the catalog understands.
    ListGroups,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Cd,
    Thm1,
    Thm2,
    Thm3,
    Bw,
    FieldLemma,
    Hall,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    #[value(alias = "cd")]
    CauchyDavenport,
    #[value(alias = "anr")]
    AnrRestricted,
    #[value(alias = "eh")]
    EhDiagonal,
    #[value(alias = "bw")]
    BalisterWheeler,
}

impl From<BoundArg> for BoundKind {
    fn from(b: BoundArg) -> Self {
        match b {
            BoundArg::CauchyDavenport => BoundKind::CauchyDavenport,
            BoundArg::AnrRestricted => BoundKind::AnrRestricted,
            BoundArg::EhDiagonal => BoundKind::EhDiagonal,
            BoundArg::BalisterWheeler => BoundKind::BalisterWheeler,
        }
    }
}

#[derive(Args)]
struct GroupArgs {
    /// Catalog name, e.g. Z9, Z3xZ3, Heis3, F21, Q8, D4.
    #[arg(long, conflicts_with = "group_file")]
    group: Option<String>,
    /// JSON Cayley-table definition.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[arg(long)]
    max_a: Option<usize>,
    #[arg(long)]
    max_b: Option<usize>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// none, inversion, auto or both.
    #[arg(long, value_parser = parse_pruning, default_value = "none")]
    prune: Pruning,
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic for field-lemma.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    /// Largest |A| = |B| for field-lemma.
    #[arg(long, default_value_t = 3)]
    max_size: usize,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time; reports are then no longer reproducible byte for byte.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::parse(s).ok_or_else(|| format!("unknown mode {s:?}; expected exhaustive, capped or sampled"))
}

fn parse_pruning(s: &str) -> Result<Pruning, String> {
    Pruning::parse(s).ok_or_else(|| format!("unknown pruning {s:?}; expected none, inversion, auto or both"))
}

/// Errors that carry their own exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

impl GroupArgs {
    fn load(&self) -> anyhow::Result<FiniteGroup> {
        match (&self.group, &self.group_file) {
            (Some(name), _) => Ok(catalog::resolve(name)?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(load_cayley(&text)?)
            }
            (None, None) => Err(usage(format!(
                "a group is required (--group or --group-file); known names:\n{}",
                catalog::listing().join("\n")
            ))),
        }
    }
}

impl PlanArgs {
    fn plan(&self, group: Option<&str>) -> SearchPlan {
        let capped = self.max_a.is_some() || self.max_b.is_some();
        let mode = self.mode.unwrap_or(if self.samples.is_some() {
            Mode::Sampled
        } else if capped {
            Mode::SizeCapped
        } else {
            Mode::Exhaustive
        });
        let mut plan = match mode {
            Mode::Sampled => SearchPlan::sampled(self.samples.unwrap_or(DEFAULT_SAMPLES), self.seed),
            _ => SearchPlan::exhaustive(),
        };
        plan.mode = mode;
        plan.max_a = self.max_a;
        plan.max_b = self.max_b.or(self.max_a.filter(|_| self.max_b.is_none()));
        plan.seed = self.seed;
        plan.pruning = self.prune;
        plan.group = group.map(String::from);
        plan
    }
}

fn emit(doc: &ReportDocument, out: &OutputArgs) -> anyhow::Result<()> {
    let text = match out.format {
        Format::Json => doc.to_json()?,
        Format::Text => doc.to_text(),
        Format::Csv => doc.to_csv()?,
    };
    match &out.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => EXIT_FAIL,
        Status::Partial => EXIT_PARTIAL,
    }
}

fn harness<'g>(g: &'g FiniteGroup, timing: bool, cache: &Option<PathBuf>) -> Harness<'g> {
    let h = Harness::new(g).with_timing(timing);
    match cache {
        Some(dir) => h.with_aut_cache(dir),
        None => h,
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let start = Instant::now();
    match cli.command {
        Command::ListGroups => {
            for line in catalog::listing() {
                println!("{line}");
            }
            Ok(0)
        }
        Command::GroupInfo {
            group,
            output,
            aut_cache,
            no_automorphisms,
        } => {
            let g = group.load()?;
            let h = harness(&g, false, &aut_cache);
            let auts = if no_automorphisms {
                None
            } else {
                h.automorphisms()?.map(|a| a.len())
            };
            let mut doc = ReportDocument::new(GroupDescriptor::of(&g), None);
            doc.push(ReportResult::GroupInfo(GroupInfo::of(&g, auts)));
            finish(&mut doc, &output, start);
            emit(&doc, &output)?;
            Ok(0)
        }
        Command::Verify {
            theorem: TheoremArg::FieldLemma,
            field,
            plan,
            output,
            ..
        } => {
            let Some(p) = field.p else {
                bail!(usage("field-lemma needs --p"));
            };
            let f = FiniteField::new(p, field.alpha)?;
            let opts = FieldLemmaOptions {
                seed: plan.seed,
                samples: plan.samples.unwrap_or(FieldLemmaOptions::default().samples),
                ..FieldLemmaOptions::default()
            };
            let report = verify_field_lemma_with(&f, field.max_size, &opts)?;
            let code = status_code(report.status);
            let mut doc = ReportDocument::new(report.group.clone(), Some(report.plan.clone()));
            doc.push(ReportResult::Verification(report));
            finish(&mut doc, &output, start);
            emit(&doc, &output)?;
            Ok(code)
        }
        Command::Verify {
            theorem,
            group,
            plan,
            output,
            aut_cache,
            ..
        } => {
            let g = group.load()?;
            let plan = plan.plan(Some(g.name()));
            let h = harness(&g, output.timing, &aut_cache);
            let report = match theorem {
                TheoremArg::Cd => h.verify_cauchy_davenport(&plan),
                TheoremArg::Thm1 => h.verify_theorem1(&plan),
                TheoremArg::Thm2 => h.verify_theorem2(&plan),
                TheoremArg::Thm3 => h.verify_theorem3(&plan),
                TheoremArg::Bw => h.verify_balister_wheeler(&plan),
                TheoremArg::Hall => h.verify_hall(&plan),
                TheoremArg::FieldLemma => unreachable!("handled above"),
            }?;
            let code = status_code(report.status);
            let mut doc = ReportDocument::new(GroupDescriptor::of(&g), Some(plan));
            doc.push(ReportResult::Verification(report));
            finish(&mut doc, &output, start);
            emit(&doc, &output)?;
            Ok(code)
        }
        Command::Extremal {
            bound,
            group,
            plan,
            output,
            aut_cache,
        } => {
            let g = group.load()?;
            let plan = plan.plan(Some(g.name()));
            let scan = harness(&g, false, &aut_cache).extremal_scan(&plan, bound.into())?;
            let mut doc = ReportDocument::new(GroupDescriptor::of(&g), Some(plan));
            doc.push(ReportResult::Extremal(scan));
            finish(&mut doc, &output, start);
            emit(&doc, &output)?;
            Ok(0)
        }
    }
}

fn finish(doc: &mut ReportDocument, output: &OutputArgs, start: Instant) {
    if output.timing {
        doc.timing = Some(Timing {
            wall_time_secs: start.elapsed().as_secs_f64(),
        });
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<Error>() {
        Some(
            Error::InvalidPlan(_)
            | Error::InvalidParameter(_)
            | Error::UnknownGroup { .. }
            | Error::Parse(_)
            | Error::OrderCapExceeded { .. }
            | Error::NotLatinSquare { .. }
            | Error::NotAssociative { .. }
            | Error::NoIdentity
            | Error::NoInverse { .. }
            | Error::ElementOutOfRange { .. },
        ) => EXIT_USAGE,
        Some(
            Error::NotNilpotent { .. }
            | Error::TrivialGroup
            | Error::HallHypothesis { .. }
            | Error::FieldUnsupported { .. }
            | Error::CoefficientPrecondition(_)
            | Error::MissingAutomorphism
            | Error::NoFieldQuotient,
        ) => EXIT_PRECONDITION,
        _ => EXIT_RUNTIME,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
