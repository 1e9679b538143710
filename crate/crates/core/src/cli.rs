//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 step cap exhausted,
//! 3 a check failed. Every command is deterministic given its flags.

use std::ffi::OsString;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{
    coalescence_bound, coalescence_sweep, write_trials_csv, ExperimentConfig, StartSpec,
    SweepReport,
};
use crate::config::{
    christoffel_configs, target_christoffel, Configuration, LineParams, Topology, Word,
};
use crate::dynamics::{
    canonical_start, read_trace, write_trace, EventRecording, Outcome, ProcessState, RunOptions,
    StartKind, StopCondition, StopKind, TraceHeader,
};
use crate::error::{Error, Result};
use crate::oracle::{
    exact_hitting_time, impossibility_report, reachable_set, theorem1_check, theorem3_check,
    verify_corpus, PatchedRule, SolveOptions, TransitionGraph, DEFAULT_STATE_CAP,
};
use crate::render::{ascii_grid, svg_snapshots, RenderSpec};
use crate::rule::{RuleParams, ThreadRule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "christoffel-thread",
    version,
    about = "Randomized local flips straightening a discrete thread into a Christoffel word"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one trajectory and write its JSON-lines trace.
    Simulate(SimulateArgs),
    /// Exhaustively check the structural properties of an instance.
    Verify(VerifyArgs),
    /// Exact hitting times and recurrence structure of a small instance.
    Oracle(OracleArgs),
    /// Seeded Monte Carlo coalescence statistics, optionally over several n.
    Stats(StatsArgs),
    /// Run the slope-1/(s+1) counterexample family against a rule.
    Impossibility(ImpossibilityArgs),
    /// Draw snapshots of a trace as SVG panels or ASCII grids.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Ascii,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub ta: u32,
    #[arg(long)]
    pub tb: u32,
    #[arg(long)]
    pub n: u32,
    /// Defaults to ta + tb.
    #[arg(long)]
    pub sight: Option<usize>,
    #[arg(long, default_value = "chain")]
    pub topology: Topology,
}

impl InstanceArgs {
    fn params(&self) -> Result<LineParams> {
        LineParams::new(self.ta, self.tb, self.n)
    }

    fn rule(&self) -> Result<RuleParams> {
        RuleParams::new(self.sight.unwrap_or((self.ta + self.tb) as usize))
    }
}

#[derive(Debug, Args)]
pub struct StartArgs {
    /// max-nonneg | min-nonpos | random | random-nonneg
    #[arg(long, conflicts_with = "start_word")]
    pub start: Option<StartKind>,
    /// Literal a/b word with the instance's letter counts.
    #[arg(long)]
    pub start_word: Option<Word>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent or "-".
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// stable | christoffel | strip | target | step-limit
    #[arg(long, default_value = "stable")]
    pub stop: StopKind,
    /// Step cap; defaults to ten times (2n-1)^3 (tot-1).
    #[arg(long)]
    pub cap: Option<u64>,
    /// Snapshot every k steps (0: first and last only).
    #[arg(long)]
    pub snapshot_every: Option<u64>,
    /// all | flips | none
    #[arg(long, default_value = "all")]
    pub events: EventRecording,
    /// Also write the snapshots as an SVG strip.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub cell: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Enumeration cap on the number of configurations.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetSet {
    /// Every configuration of thickness per - 1.
    Christoffel,
    /// The Christoffel configuration in the band [0, per-1].
    Target,
    /// Every stable configuration.
    Stable,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "christoffel")]
    pub target: TargetSet,
    /// Enumeration cap on the number of configurations.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: usize,
    /// Write the transition graph as an edge list.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub ta: u32,
    #[arg(long)]
    pub tb: u32,
    /// One or more values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long)]
    pub sight: Option<usize>,
    #[arg(long, default_value = "chain")]
    pub topology: Topology,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value = "target")]
    pub stop: StopKind,
    /// Step cap per trial; defaults to ten times (2n-1)^3 (tot-1).
    #[arg(long)]
    pub cap: Option<u64>,
    /// Directory for per-n trial CSVs and the summary files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleChoice {
    /// The thickness-reducing rule.
    Thread,
    /// The thread rule with the pair (a^s, ba^{s-1}) made inactive.
    Patched,
}

#[derive(Debug, Args)]
pub struct ImpossibilityArgs {
    #[arg(long)]
    pub sight: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "thread")]
    pub rule: RuleChoice,
    #[arg(long, default_value = "chain")]
    pub topology: Topology,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// JSON-lines trace written by `simulate`.
    #[arg(long)]
    pub trace: PathBuf,
    /// Snapshot steps to draw, comma separated; all snapshots when absent.
    #[arg(long, value_delimiter = ',')]
    pub steps: Vec<u64>,
    #[arg(long, default_value_t = 12)]
    pub cell: u32,
    #[arg(long)]
    pub no_grid: bool,
    #[arg(long)]
    pub no_ideal_line: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Stats(a) => cmd_stats(&a),
        Command::Impossibility(a) => cmd_impossibility(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

fn require_format(given: Option<Format>, allowed: &[Format]) -> Result<Format> {
    match given {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Error::InvalidArgument(format!(
            "format {f:?} not supported here (allowed: {allowed:?})"
        ))),
    }
}

/// Writes to `path` through a temporary file in the same directory, or to
/// standard output.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        None => write_stdout(bytes),
        Some(p) if p.as_os_str() == "-" => write_stdout(bytes),
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| Error::Io(e.error.to_string()))?;
            Ok(())
        }
    }
}

fn write_stdout(bytes: &[u8]) -> Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn default_cap(params: &LineParams) -> u64 {
    coalescence_bound(params).saturating_mul(10)
}

fn start_config(
    start: &StartArgs,
    params: LineParams,
    topology: Topology,
    seed: u64,
) -> Result<Option<Configuration>> {
    let config = match (&start.start_word, start.start) {
        (Some(w), _) => Configuration::new(w.clone(), params, topology)?,
        (None, Some(kind)) => canonical_start(params, kind, seed).with_topology(topology),
        (None, None) => return Ok(None),
    };
    Ok(Some(config))
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<i32> {
    require_format(a.output.format, &[Format::Json])?;
    let params = a.instance.params()?;
    let rule = a.instance.rule()?;
    let topology = a.instance.topology;
    let start = start_config(&a.start, params, topology, a.seed)?.unwrap_or_else(|| {
        canonical_start(params, StartKind::MaxNonneg, a.seed).with_topology(topology)
    });
    let cap = a.cap.unwrap_or_else(|| default_cap(&params));
    let snapshot_every = a.snapshot_every.or(a.svg.as_ref().map(|_| 0));
    let header = TraceHeader {
        ta: a.instance.ta,
        tb: a.instance.tb,
        n: a.instance.n,
        sight: rule.sight(),
        seed: a.seed,
        topology,
        stop: a.stop,
        cap,
        start: start.word().clone(),
        snapshot_every,
    };
    let mut state = ProcessState::new(start, rule, a.seed);
    let trace = state.run(
        StopCondition::new(a.stop, cap),
        RunOptions {
            snapshot_every,
            events: a.events,
        },
    );
    let mut buf = Vec::new();
    write_trace(&mut buf, &header, &trace)?;
    write_output(a.output.out.as_deref(), &buf)?;
    if let Some(svg_path) = &a.svg {
        let parsed = read_trace(BufReader::new(buf.as_slice()))?;
        let spec = RenderSpec {
            cell: a.cell,
            ..RenderSpec::default()
        };
        write_output(Some(svg_path), svg_snapshots(&parsed, &spec)?.as_bytes())?;
    }
    if a.output.out.is_some() {
        let summary = json!({
            "steps": trace.steps,
            "flips": trace.flips,
            "outcome": trace.outcome,
            "word": trace.terminal.word().to_string(),
            "thickness": trace.terminal.thickness(),
        });
        println!("{summary}");
    }
    Ok(match trace.outcome {
        Outcome::Satisfied => EXIT_OK,
        Outcome::CapExhausted => EXIT_CAP,
    })
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    require_format(a.output.format, &[Format::Json])?;
    let params = a.instance.params()?;
    let rule = a.instance.rule()?;
    let report = verify_corpus(params, &rule, a.instance.topology, a.cap)?;
    let body = json!({
        "instance": report.instance,
        "passed": report.passed(),
        "checks": report.checks,
    });
    write_output(a.output.out.as_deref(), &to_json(&body)?)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK })
}

#[derive(Serialize)]
struct ClassSummary {
    size: usize,
    representative: String,
    h_min: i64,
    h_max: i64,
    christoffel: bool,
}

const CLASS_LISTING_LIMIT: usize = 100;

pub fn cmd_oracle(a: &OracleArgs) -> Result<i32> {
    require_format(a.output.format, &[Format::Json])?;
    let params = a.instance.params()?;
    let rule = a.instance.rule()?;
    let topology = a.instance.topology;
    let start = start_config(&a.start, params, topology, a.seed)?;
    eprintln!(
        "building transition graph: {} states, about {} bytes",
        crate::oracle::count_configs(&params),
        TransitionGraph::memory_estimate(&params, topology)
    );
    let graph = TransitionGraph::build(params, &ThreadRule::new(rule), topology, a.cap)?;
    if let Some(path) = &a.edges {
        let mut buf = Vec::new();
        graph.write_edge_list(&mut buf)?;
        write_output(Some(path), &buf)?;
    }

    let classes = graph.closed_classes();
    let listing: Vec<ClassSummary> = classes
        .iter()
        .take(CLASS_LISTING_LIMIT)
        .map(|cl| ClassSummary {
            size: cl.len(),
            representative: graph.word(cl[0]).to_string(),
            h_min: cl.iter().map(|&s| graph.h_min(s)).min().unwrap_or(0),
            h_max: cl.iter().map(|&s| graph.h_max(s)).max().unwrap_or(0),
            christoffel: cl.iter().all(|&s| graph.is_christoffel(s)),
        })
        .collect();
    let checks = match topology {
        Topology::Chain => theorem1_check(&graph),
        Topology::Cycle => theorem3_check(&graph),
    };

    let hitting = match &start {
        None => None,
        Some(c) => {
            let s = graph
                .index_of(c.word())
                .ok_or(Error::ForeignConfiguration)?;
            let targets: Vec<usize> = match a.target {
                TargetSet::Christoffel => match topology {
                    Topology::Chain => christoffel_configs(params)
                        .iter()
                        .filter_map(|c| graph.index_of(c.word()))
                        .collect(),
                    Topology::Cycle => (0..graph.len())
                        .filter(|&s| graph.is_christoffel(s))
                        .collect(),
                },
                TargetSet::Target => graph
                    .index_of(target_christoffel(params).word())
                    .into_iter()
                    .collect(),
                TargetSet::Stable => graph.absorbing_states(),
            };
            if targets.is_empty() {
                return Err(Error::InvalidArgument("target set is empty".into()));
            }
            let time = exact_hitting_time(&graph, s, &targets, &SolveOptions::default())?;
            Some(json!({
                "start": c.word().to_string(),
                "target": format!("{:?}", a.target).to_lowercase(),
                "targets": targets.len(),
                "reachable": reachable_set(&graph, s).len(),
                "expected_time": time,
            }))
        }
    };
    let body = json!({
        "instance": checks.instance,
        "states": graph.len(),
        "degree": graph.degree(),
        "absorbing": graph.absorbing_states().len(),
        "closed_classes": classes.len(),
        "classes": listing,
        "all_recurrent_christoffel": classes.iter().all(|cl| cl.len() == 1 && graph.is_christoffel(cl[0])),
        "checks": checks.checks,
        "hitting": hitting,
    });
    write_output(a.output.out.as_deref(), &to_json(&body)?)?;
    Ok(if checks.passed() { EXIT_OK } else { EXIT_CHECK })
}

fn sweep_csv(sweep: &SweepReport) -> String {
    let mut out = String::from("n,tot,trials,mean,median,max,bound,cap_hits,exponent\n");
    let exponent = sweep.exponent.map(|e| e.to_string()).unwrap_or_default();
    for s in &sweep.instances {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.n,
            s.tot,
            s.trials,
            s.mean,
            s.median,
            s.max,
            s.bound,
            s.cap_hits.len(),
            exponent
        ));
    }
    out
}

pub fn cmd_stats(a: &StatsArgs) -> Result<i32> {
    let format = require_format(a.output.format, &[Format::Json, Format::Csv])?;
    if a.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    if a.start.start_word.is_some() && a.n.len() != 1 {
        return Err(Error::InvalidArgument(
            "--start-word needs a single --n value".into(),
        ));
    }
    let first = LineParams::new(a.ta, a.tb, a.n[0])?;
    let rule = RuleParams::new(a.sight.unwrap_or((a.ta + a.tb) as usize))?;
    let start = match (&a.start.start_word, a.start.start) {
        (Some(w), _) => {
            Configuration::new(w.clone(), first, a.topology)?;
            StartSpec::Word(w.clone())
        }
        (None, kind) => StartSpec::Kind(kind.unwrap_or(StartKind::MaxNonneg)),
    };
    let base = ExperimentConfig {
        params: first,
        rule,
        topology: a.topology,
        start,
        trials: a.trials,
        seed: a.seed,
        stop: a.stop,
        cap: 0,
        track_energy: false,
    };
    let (sweep, reports) =
        coalescence_sweep(&base, &a.n, |p| a.cap.unwrap_or_else(|| default_cap(p)))?;
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir)?;
        for r in &reports {
            let mut buf = Vec::new();
            write_trials_csv(&mut buf, r)?;
            write_output(
                Some(&dir.join(format!("trials_n{}.csv", r.summary.n))),
                &buf,
            )?;
        }
        write_output(Some(&dir.join("summary.json")), &to_json(&sweep)?)?;
        write_output(Some(&dir.join("summary.csv")), sweep_csv(&sweep).as_bytes())?;
    }
    let body = match format {
        Format::Csv if reports.len() == 1 => {
            let mut buf = Vec::new();
            write_trials_csv(&mut buf, &reports[0])?;
            buf
        }
        Format::Csv => sweep_csv(&sweep).into_bytes(),
        _ => to_json(&sweep)?,
    };
    write_output(a.output.out.as_deref(), &body)?;
    let capped = sweep.instances.iter().any(|s| !s.cap_hits.is_empty());
    Ok(if capped { EXIT_CAP } else { EXIT_OK })
}

pub fn cmd_impossibility(a: &ImpossibilityArgs) -> Result<i32> {
    require_format(a.output.format, &[Format::Json])?;
    let report = match a.rule {
        RuleChoice::Thread => {
            impossibility_report(&ThreadRule::with_sight(a.sight)?, a.sight, a.k, a.topology)?
        }
        RuleChoice::Patched => {
            impossibility_report(&PatchedRule::new(a.sight)?, a.sight, a.k, a.topology)?
        }
    };
    let body = json!({
        "rule": format!("{:?}", a.rule).to_lowercase(),
        "report": report,
    });
    write_output(a.output.out.as_deref(), &to_json(&body)?)?;
    Ok(if report.dichotomy_holds {
        EXIT_OK
    } else {
        EXIT_CHECK
    })
}

pub fn cmd_render(a: &RenderArgs) -> Result<i32> {
    let format = require_format(a.output.format, &[Format::Svg, Format::Ascii])?;
    let file = std::fs::File::open(&a.trace)?;
    let trace = read_trace(BufReader::new(file))?;
    let body = match format {
        Format::Ascii => {
            let params = trace.header.params()?;
            let steps: Vec<u64> = if a.steps.is_empty() {
                trace.snapshots.iter().map(|s| s.step).collect()
            } else {
                a.steps.clone()
            };
            let mut out = String::new();
            for step in steps {
                let snap = trace
                    .snapshots
                    .iter()
                    .find(|s| s.step == step)
                    .ok_or(Error::MissingSnapshot(step))?;
                let c = Configuration::chain(snap.word.clone(), params)?;
                out.push_str(&format!("step {step}\n"));
                out.push_str(&ascii_grid(&c)?);
            }
            out
        }
        _ => {
            let spec = RenderSpec {
                cell: a.cell,
                show_grid: !a.no_grid,
                show_ideal_line: !a.no_ideal_line,
                steps: a.steps.clone(),
            };
            svg_snapshots(&trace, &spec)?
        }
    };
    write_output(a.output.out.as_deref(), body.as_bytes())?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        let mut full = vec!["christoffel-thread"];
        full.extend_from_slice(args);
        run(full)
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(code(&["simulate", "--ta", "3", "--n", "2"]), EXIT_USAGE);
        assert_eq!(
            code(&["simulate", "--ta", "2", "--tb", "2", "--n", "2"]),
            EXIT_USAGE
        );
        assert_eq!(
            code(&["impossibility", "--sight", "2", "--k", "1"]),
            EXIT_USAGE
        );
        assert_eq!(
            code(&["stats", "--ta", "3", "--tb", "2", "--n", "2", "--trials", "0"]),
            EXIT_USAGE
        );
        assert_eq!(code(&["bogus"]), EXIT_USAGE);
        assert_eq!(code(&["--help"]), EXIT_OK);
    }

    #[test]
    fn verify_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let out = out.to_str().unwrap();
        assert_eq!(
            code(&["verify", "--ta", "1", "--tb", "1", "--n", "3", "--sight", "2", "--out", out]),
            EXIT_OK
        );
        assert_eq!(
            code(&["verify", "--ta", "2", "--tb", "1", "--n", "2", "--sight", "2", "--out", out]),
            EXIT_OK
        );
        let text = std::fs::read_to_string(out).unwrap();
        assert!(text.contains("hypothesis violated: per > sight"));
    }

    #[test]
    fn simulate_cap_exhaustion() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("t.jsonl");
        let out = out.to_str().unwrap();
        let stuck = crate::oracle::stuck_config(3).unwrap().word().to_string();
        let args = [
            "simulate",
            "--ta",
            "3",
            "--tb",
            "2",
            "--n",
            "3",
            "--sight",
            "5",
            "--start-word",
            &stuck,
            "--stop",
            "christoffel",
            "--cap",
            "2000",
            "--events",
            "none",
            "--out",
            out,
        ];
        assert_eq!(code(&args), EXIT_CAP);
    }
}
