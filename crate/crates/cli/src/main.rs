use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};

use memmod_core::analysis::run_law_suite;
use memmod_core::ast::Model;
use memmod_core::litmus::{parse_litmus, run_litmus, Litmus, Outcome, Report, TextReport};
use memmod_core::reorder::{EvalOrder, FoldOrder, ModelConfig, OcMore};
use memmod_core::semantics::{enumerate_traces, Domain, ExplorationLimits};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "memmod", version, about = "Explore litmus tests under a reordering memory model")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a litmus file and check its expectations.
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: ConfigOpts,
        #[command(flatten)]
        limits: LimitOpts,
        /// Print the JSON report.
        #[arg(long)]
        json: bool,
        /// Print witnesses for expectations that hold as well.
        #[arg(long)]
        witness: bool,
    },
    /// Print the visible traces of the composed program.
    Traces {
        file: PathBuf,
        #[command(flatten)]
        opts: ConfigOpts,
        #[command(flatten)]
        limits: LimitOpts,
    },
    /// Run the law fixture suite.
    Laws {
        /// Only fixtures of this law.
        #[arg(long)]
        law: Option<String>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: LimitOpts,
    },
    /// Run every `.lit` file in a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        limits: LimitOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    C11,
    Sc,
    Par,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalArg {
    Nondet,
    Ltr,
}

#[derive(Clone, Copy, ValueEnum)]
enum FoldArg {
    Nearest,
    Earliest,
}

/// Overrides applied on top of the file's own directives.
#[derive(Args, Default)]
struct ConfigOpts {
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, overrides_with = "no_sfp")]
    sfp: bool,
    #[arg(long)]
    no_sfp: bool,
    /// Reading of "may change ordering constraints" (a-e).
    #[arg(long, value_parser = parse_ocmore)]
    ocmore: Option<OcMore>,
    #[arg(long)]
    no_forwarding: bool,
    /// Forbid stores overtaking guards (hardware-like).
    #[arg(long)]
    no_guard_store_reorder: bool,
    #[arg(long)]
    optimize: bool,
    #[arg(long)]
    incremental: bool,
    #[arg(long, value_enum)]
    eval_order: Option<EvalArg>,
    #[arg(long, value_enum)]
    fold_order: Option<FoldArg>,
}

#[derive(Args)]
struct LimitOpts {
    #[arg(long)]
    max_unroll: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Configuration cap; MEMMOD_MAX_CONFIGS sets the default.
    #[arg(long)]
    max_configs: Option<usize>,
}

fn parse_ocmore(s: &str) -> Result<OcMore, String> {
    let mut cs = s.chars();
    match (cs.next().and_then(OcMore::from_letter), cs.next()) {
        (Some(o), None) => Ok(o),
        _ => Err(format!("expected one of a, b, c, d, e; got `{s}`")),
    }
}

impl ConfigOpts {
    fn apply(&self, mut cfg: ModelConfig) -> ModelConfig {
        if let Some(m) = self.model {
            cfg.base = match m {
                ModelArg::C11 => Model::C11,
                ModelArg::Sc => Model::Sc,
                ModelArg::Par => Model::Par,
            };
        }
        if self.sfp {
            cfg.sfp = true;
        }
        if self.no_sfp {
            cfg.sfp = false;
        }
        if let Some(o) = self.ocmore {
            cfg.ocmore = o;
        }
        if self.no_forwarding {
            cfg.forwarding = false;
        }
        if self.no_guard_store_reorder {
            cfg.guard_store_reorder = false;
        }
        if self.optimize {
            cfg.optimize = true;
        }
        if self.incremental {
            cfg.incremental = true;
        }
        if let Some(e) = self.eval_order {
            cfg.eval_order = match e {
                EvalArg::Nondet => EvalOrder::Nondet,
                EvalArg::Ltr => EvalOrder::LeftToRight,
            };
        }
        if let Some(f) = self.fold_order {
            cfg.fold_order = match f {
                FoldArg::Nearest => FoldOrder::NearestFirst,
                FoldArg::Earliest => FoldOrder::EarliestFirst,
            };
        }
        cfg
    }
}

impl LimitOpts {
    fn limits(&self) -> ExplorationLimits {
        let mut l = ExplorationLimits::from_env();
        if let Some(n) = self.max_unroll {
            l.max_unroll = n;
        }
        if let Some(n) = self.max_depth {
            l.max_depth = n;
        }
        if let Some(n) = self.max_configs {
            l.max_configs = n;
        }
        l
    }
}

fn load(path: &Path) -> Result<Litmus, String> {
    let src = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_litmus(&src).map_err(|e| format!("{}:{e}", path.display()))
}

fn run_file(path: &Path, opts: &ConfigOpts, limits: &ExplorationLimits) -> Result<Report, String> {
    let lit = load(path)?;
    let cfg = opts.apply(lit.config());
    let mut report = run_litmus(&lit, &cfg, limits);
    report.file = Some(path.display().to_string());
    Ok(report)
}

fn cmd_run(file: &Path, opts: &ConfigOpts, limits: &LimitOpts, json: bool, witness: bool) -> u8 {
    match run_file(file, opts, &limits.limits()) {
        Ok(r) => {
            if json {
                println!("{}", r.to_json());
            } else {
                print!("{}", TextReport { report: &r, witnesses: witness });
            }
            r.exit_code() as u8
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn cmd_traces(file: &Path, opts: &ConfigOpts, limits: &LimitOpts) -> u8 {
    let lit = match load(file) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let cfg = opts.apply(lit.config());
    let dom = Domain::for_program(&lit.program);
    let ts = enumerate_traces(&cfg, &lit.program.composed(), &dom, &limits.limits());
    for t in &ts.traces {
        let labels: Vec<String> = t.iter().map(|a| a.to_string()).collect();
        println!("{}", if labels.is_empty() { "(empty)".to_string() } else { labels.join(" ; ") });
    }
    eprintln!(
        "{} trace(s){}{}",
        ts.traces.len(),
        if ts.unrolled { ", loops unrolled to the bound" } else { "" },
        if ts.bounded { ", enumeration cut off by a limit" } else { "" }
    );
    if ts.bounded {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn cmd_laws(law: Option<&str>, json: bool, limits: &LimitOpts) -> u8 {
    let outcomes = match run_law_suite(law, &limits.limits()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&outcomes).expect("outcomes serialise"));
    } else {
        for o in &outcomes {
            let got = match (&o.status, &o.error) {
                (Some(s), _) => s.name().to_string(),
                (None, Some(e)) => format!("not applicable ({e})"),
                (None, None) => "no verdict".to_string(),
            };
            println!(
                "{} {} / {}: expected {:?}, got {got}",
                if o.passed { "PASS" } else { "FAIL" },
                o.law,
                o.fixture,
                o.expect
            );
        }
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        println!("{} fixture(s), {failed} failed", outcomes.len());
    }
    if outcomes.iter().all(|o| o.passed) {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    }
}

fn cmd_corpus(dir: &Path, json: bool, jobs: Option<usize>, limits: &LimitOpts) -> u8 {
    let mut files: Vec<PathBuf> = match fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "lit"))
            .collect(),
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return EXIT_ERROR;
        }
    };
    files.sort();
    let limits = limits.limits();
    let opts = ConfigOpts::default();
    let workers = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, files.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Report, String>>>> = Mutex::new(vec![None; files.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(f) = files.get(i) else { break };
                let r = run_file(f, &opts, &limits);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let results: Vec<Result<Report, String>> =
        results.into_inner().unwrap().into_iter().map(|r| r.expect("every file ran")).collect();

    let mut code = EXIT_OK;
    let mut bump = |c: u8| {
        // errors beat violations beat inconclusive results
        let rank = |c: u8| match c {
            EXIT_ERROR => 3,
            EXIT_VIOLATED => 2,
            EXIT_INCONCLUSIVE => 1,
            _ => 0,
        };
        if rank(c) > rank(code) {
            code = c;
        }
    };
    let mut reports = Vec::new();
    for (f, r) in files.iter().zip(&results) {
        match r {
            Ok(r) => {
                bump(r.exit_code() as u8);
                if !json {
                    let tag = match r.outcome {
                        Outcome::Pass => "PASS",
                        Outcome::Fail => "FAIL",
                        Outcome::Inconclusive => "INCONCLUSIVE",
                    };
                    println!("{tag:<12} {} ({:.1} ms)", f.display(), r.elapsed.as_secs_f64() * 1000.0);
                }
                reports.push(r);
            }
            Err(e) => {
                bump(EXIT_ERROR);
                eprintln!("error: {e}");
                if !json {
                    println!("{:<12} {}", "ERROR", f.display());
                }
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialise"));
    } else {
        let passed = reports.iter().filter(|r| r.outcome == Outcome::Pass).count();
        println!("{passed}/{} file(s) met every expectation", files.len());
    }
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match &cli.cmd {
        Cmd::Run { file, opts, limits, json, witness } => cmd_run(file, opts, limits, *json, *witness),
        Cmd::Traces { file, opts, limits } => cmd_traces(file, opts, limits),
        Cmd::Laws { law, json, limits } => cmd_laws(law.as_deref(), *json, limits),
        Cmd::Corpus { dir, json, jobs, limits } => cmd_corpus(dir, *json, *jobs, limits),
    };
    ExitCode::from(code)
}
