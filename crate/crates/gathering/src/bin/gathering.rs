//! `gathering`: run, sweep, check and demo front end.
//!
//! Exit codes: 0 when the command's success condition holds, 1 when it ran
//! but the condition failed, 2 for usage, config and IO errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gathering::checks::{run_suite, Suite};
use gathering::config::{RunConfig, StrategyName};
use gathering::sweep::{run_parallel, SweepReport};
use gathering::trace::JsonlTrace;
use gathering_core::analysis::{attach_lemma_monitors, even_livelock_demo, Initializer, SweepPlan};
use gathering_core::geometry::{Point, Tolerance};
use gathering_core::model::normalize;
use gathering_core::sampling::random_team;
use gathering_core::simulator::{run, RunStatus, TraceEvent, TraceSink};
use gathering_core::streams::{stream_rng, Stream};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "gathering", version, about = "Gathering simulator for oblivious robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Random,
    Witness,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Geometry,
    Properties,
    Lemmas,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchedulerArg {
    Synchronous,
    #[value(alias = "round_robin")]
    RoundRobin,
    #[value(alias = "random_subset")]
    RandomSubset,
    #[value(alias = "boundary_only_adversary")]
    BoundaryOnlyAdversary,
}

impl From<SchedulerArg> for StrategyName {
    fn from(s: SchedulerArg) -> Self {
        match s {
            SchedulerArg::Synchronous => StrategyName::Synchronous,
            SchedulerArg::RoundRobin => StrategyName::RoundRobin,
            SchedulerArg::RandomSubset => StrategyName::RandomSubset,
            SchedulerArg::BoundaryOnlyAdversary => StrategyName::BoundaryOnlyAdversary,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration; exit 0 iff it gathers with no monitor violation.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Trace output; overrides the config's `trace` field.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run many random configurations; exit 0 iff all gather with no violation.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        scheduler: SchedulerArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "random")]
        init: InitArg,
        #[arg(long)]
        max_steps: Option<u64>,
    },
    /// Run an oracle or property suite; exit 0 iff every check passes.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the symmetric even-n witness; exit 0 iff it never gathers and
    /// keeps exactly two occupied points.
    DemoEven {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        /// Print the configuration every this many steps.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        every: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write a random run configuration.
    InitConfig {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "synchronous")]
        scheduler: SchedulerArg,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Command ran, success condition failed.
struct Failed;

#[derive(Serialize)]
struct OutcomeRecord {
    status: &'static str,
    final_t: u64,
    occupied: Vec<OccupiedRecord>,
    violations: Vec<ViolationRecord>,
}

#[derive(Serialize)]
struct OccupiedRecord {
    x: f64,
    y: f64,
    count: usize,
}

#[derive(Serialize)]
struct ViolationRecord {
    monitor: &'static str,
    step: Option<u64>,
    description: String,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn status_name(s: RunStatus) -> &'static str {
    match s {
        RunStatus::Gathered => "gathered",
        RunStatus::StepLimitReached => "step_limit_reached",
    }
}

fn cmd_run(config: &Path, trace: Option<PathBuf>) -> Result<Result<(), Failed>> {
    let cfg = RunConfig::load(config)?;
    let resolved = cfg.resolve()?;
    let trace_path = trace.or_else(|| cfg.trace.as_ref().map(PathBuf::from));
    let mut monitors = attach_lemma_monitors(&resolved.monitors);
    let outcome = match &trace_path {
        Some(path) => {
            let mut sink = JsonlTrace::new(create(path)?);
            let out = run(resolved.robots, resolved.spec, &resolved.sim, &mut monitors, &mut sink)?;
            sink.finish().with_context(|| format!("writing {}", path.display()))?;
            out
        }
        None => run(
            resolved.robots,
            resolved.spec,
            &resolved.sim,
            &mut monitors,
            &mut gathering_core::simulator::NullSink,
        )?,
    };
    let record = OutcomeRecord {
        status: status_name(outcome.status),
        final_t: outcome.final_t,
        occupied: outcome
            .final_config
            .occupied()
            .iter()
            .map(|o| OccupiedRecord {
                x: o.point.x,
                y: o.point.y,
                count: o.count,
            })
            .collect(),
        violations: outcome
            .violations
            .iter()
            .map(|v| ViolationRecord {
                monitor: v.monitor,
                step: v.step,
                description: v.description.clone(),
            })
            .collect(),
    };
    println!("{}", serde_json::to_string_pretty(&record)?);
    let ok = outcome.status == RunStatus::Gathered && outcome.violations.is_empty();
    Ok(if ok { Ok(()) } else { Err(Failed) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    n: usize,
    runs: u64,
    seed: u64,
    scheduler: SchedulerArg,
    out: &Path,
    init: InitArg,
    max_steps: Option<u64>,
) -> Result<Result<(), Failed>> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let mut plan = SweepPlan::new(n, runs as usize, seed, StrategyName::from(scheduler).to_strategy(None));
    plan.init = match init {
        InitArg::Random => Initializer::Random,
        InitArg::Witness => Initializer::EvenWitness,
    };
    plan.max_steps = max_steps;
    let (records, summary) = run_parallel(&plan)?;
    let report = SweepReport::new(&plan, &records, &summary);
    let mut w = create(out)?;
    writeln!(w, "{}", report.to_json())?;
    w.flush()?;
    println!("{}", serde_json::to_string_pretty(&report.summary)?);
    let ok = summary.gathered == summary.runs && summary.total_violations() == 0;
    Ok(if ok { Ok(()) } else { Err(Failed) })
}

fn cmd_check(suite: SuiteArg, seed: u64) -> Result<Result<(), Failed>> {
    let suite = match suite {
        SuiteArg::Geometry => Suite::Geometry,
        SuiteArg::Properties => Suite::Properties,
        SuiteArg::Lemmas => Suite::Lemmas,
        SuiteArg::All => Suite::All,
    };
    let lines = run_suite(suite, seed);
    for line in &lines {
        println!("{line}");
    }
    Ok(if lines.iter().all(|l| l.ok()) {
        Ok(())
    } else {
        Err(Failed)
    })
}

/// Prints the occupied points every `every` steps and forwards events.
struct Evolution<'a> {
    every: u64,
    n: usize,
    positions: Vec<Point>,
    inner: Option<&'a mut dyn TraceSink>,
    out: io::StdoutLock<'static>,
}

impl Evolution<'_> {
    fn print(&mut self, t: u64) {
        let cfg = normalize(&self.positions, Tolerance::default());
        let pts: Vec<String> = cfg
            .occupied()
            .iter()
            .map(|o| format!("({:.6}, {:.6})x{}", o.point.x, o.point.y, o.count))
            .collect();
        let _ = writeln!(self.out, "t={t} points={} {}", cfg.len(), pts.join(" "));
    }
}

impl TraceSink for Evolution<'_> {
    fn record(&mut self, e: &TraceEvent) {
        self.positions[e.robot] = e.new_pos;
        if let Some(s) = self.inner.as_deref_mut() {
            s.record(e);
        }
        let t = e.t + 1;
        if e.robot + 1 == self.n && t.is_multiple_of(self.every) {
            self.print(t);
        }
    }
}

fn cmd_demo_even(n: usize, steps: u64, every: u64, trace: Option<PathBuf>) -> Result<Result<(), Failed>> {
    if n == 0 || !n.is_multiple_of(2) {
        bail!("demo-even needs a positive even --n, got {n}");
    }
    if steps == 0 {
        bail!("--steps must be at least 1");
    }
    let team = gathering_core::analysis::even_witness_team(n)?;
    let mut file_sink = trace.as_deref().map(create).transpose()?.map(JsonlTrace::new);
    let mut sink = Evolution {
        every,
        n,
        positions: team.iter().map(|r| r.pos).collect(),
        inner: file_sink.as_mut().map(|s| s as &mut dyn TraceSink),
        out: io::stdout().lock(),
    };
    sink.print(0);
    let outcome = even_livelock_demo(n, steps, &mut sink)?;
    drop(sink);
    if let Some(s) = file_sink {
        s.finish().context("writing trace")?;
    }
    let held = outcome.status == RunStatus::StepLimitReached && outcome.violations.is_empty();
    for v in &outcome.violations {
        println!("violation {} at step {:?}: {}", v.monitor, v.step, v.description);
    }
    println!(
        "n={n}: {} after {} steps with {} occupied points",
        if outcome.final_config.is_gathered() {
            "gathered"
        } else {
            "not gathered"
        },
        outcome.final_t,
        outcome.final_config.len()
    );
    Ok(if held { Ok(()) } else { Err(Failed) })
}

fn cmd_init_config(n: usize, seed: u64, scheduler: SchedulerArg, out: &Path) -> Result<Result<(), Failed>> {
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let team = random_team(&mut stream_rng(seed, Stream::Initializer), n, Tolerance::default());
    let cfg = RunConfig::new(&team, scheduler.into(), seed);
    let mut w = create(out)?;
    writeln!(w, "{}", cfg.dump())?;
    w.flush()?;
    Ok(Ok(()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, trace } => cmd_run(&config, trace),
        Command::Sweep {
            n,
            runs,
            seed,
            scheduler,
            out,
            init,
            max_steps,
        } => cmd_sweep(n, runs, seed, scheduler, &out, init, max_steps),
        Command::Check { suite, seed } => cmd_check(suite, seed),
        Command::DemoEven { n, steps, every, trace } => cmd_demo_even(n, steps, every, trace),
        Command::InitConfig {
            n,
            seed,
            scheduler,
            out,
        } => cmd_init_config(n, seed, scheduler, &out),
    };
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
