use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analysis::{judge_exploration, Evidence, HoareMode, Status};
use crate::reorder::{EvalOrder, FoldOrder, ModelConfig};
use crate::semantics::{explore_finals, ExplorationLimits, State};

use super::syntax::ExpectKind;
use super::Litmus;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationResult {
    pub kind: ExpectKind,
    pub condition: String,
    /// Whether the expectation is met.
    pub status: Status,
    /// Witness for a reachable outcome, or the run that violates `always`.
    pub trace: Option<Vec<String>>,
    pub final_state: Option<State>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReportStats {
    pub configs: usize,
    pub transitions: usize,
    pub final_states: usize,
    pub truncated: bool,
    pub unstable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub name: String,
    pub file: Option<String>,
    pub config: ModelConfig,
    pub limits: ExplorationLimits,
    pub expectations: Vec<ExpectationResult>,
    pub stats: ReportStats,
    pub outcome: Outcome,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    /// 0 all met, 1 some violated, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn expectation(&self, kind: ExpectKind, condition: &str) -> Option<&ExpectationResult> {
        self.expectations.iter().find(|e| e.kind == kind && e.condition == condition)
    }
}

fn render(ev: &Evidence, names: &[String]) -> Vec<String> {
    ev.steps
        .iter()
        .map(|s| {
            let t = names.get(s.thread).map(String::as_str).unwrap_or("?");
            if s.origin == s.label {
                format!("{t}:{}", s.label)
            } else {
                format!("{t}:{} (from {})", s.label, s.origin)
            }
        })
        .collect()
}

/// Explore once and judge every expectation against the final states.
pub fn run_litmus(lit: &Litmus, cfg: &ModelConfig, limits: &ExplorationLimits) -> Report {
    let start = Instant::now();
    let ex = explore_finals(&lit.program, cfg, limits);
    let loops = lit.program.threads.iter().any(|t| t.body.contains_iterate());
    let bound = loops.then_some(limits.max_unroll);
    let names: Vec<String> = lit.program.threads.iter().map(|t| t.name.clone()).collect();
    let mut results = Vec::new();
    for e in &lit.expectations {
        let mode = if e.kind == ExpectKind::Always { HoareMode::Always } else { HoareMode::Reach };
        // conditions were type checked against the declarations
        let j = judge_exploration(&ex, &e.cond, mode, bound).expect("well-typed condition");
        let status = match (e.kind, j.status) {
            (ExpectKind::Forbidden, Status::Holds) => Status::Fails,
            (ExpectKind::Forbidden, Status::Fails) => Status::Holds,
            (_, s) => s,
        };
        let ev = j.witness.or(j.counterexample);
        results.push(ExpectationResult {
            kind: e.kind,
            condition: e.text.clone(),
            status,
            trace: ev.as_ref().map(|w| render(w, &names)),
            final_state: ev.and_then(|w| w.state),
        });
    }
    let outcome = if results.iter().any(|r| r.status == Status::Fails) {
        Outcome::Fail
    } else if results.iter().any(|r| r.status == Status::InconclusiveAtBound) {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    Report {
        schema_version: SCHEMA_VERSION,
        name: lit.file.name.clone(),
        file: None,
        config: cfg.clone(),
        limits: *limits,
        expectations: results,
        stats: ReportStats {
            configs: ex.stats.configs,
            transitions: ex.stats.transitions,
            final_states: ex.finals.len(),
            truncated: ex.truncated,
            unstable: ex.unstable,
        },
        outcome,
        elapsed: start.elapsed(),
    }
}

pub fn describe_config(cfg: &ModelConfig) -> String {
    let on = |b: bool| if b { "on" } else { "off" };
    let mut parts = vec![
        format!("model {}", cfg.base.name()),
        format!("forwarding {}", on(cfg.forwarding)),
        format!("sfp {}", on(cfg.sfp)),
        format!("ocmore {}", cfg.ocmore.letter()),
    ];
    if !cfg.guard_store_reorder {
        parts.push("guard-store reordering off".into());
    }
    if cfg.optimize {
        parts.push(format!("optimize on{}", if cfg.optimize_strict { " (strict)" } else { "" }));
    }
    if cfg.incremental {
        parts.push("incremental on".into());
    }
    if cfg.eval_order == EvalOrder::LeftToRight {
        parts.push("evalorder ltr".into());
    }
    if cfg.fold_order == FoldOrder::EarliestFirst {
        parts.push("foldorder earliest".into());
    }
    for (flag, name) in [(cfg.load_coalesce, "loadcoalesce"), (cfg.write_coalesce, "writecoalesce"), (cfg.elim_cond, "elimcond")] {
        if flag {
            parts.push(format!("{name} on"));
        }
    }
    parts.join(", ")
}

/// Text rendering; `witnesses` also prints traces of expectations that hold.
pub struct TextReport<'a> {
    pub report: &'a Report,
    pub witnesses: bool,
}

impl fmt::Display for TextReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.report;
        writeln!(f, "{} [{}]", r.name, describe_config(&r.config))?;
        for e in &r.expectations {
            writeln!(f, "  {} ({}): {}", e.kind.name(), e.condition, e.status.name())?;
            let show = self.witnesses || e.status == Status::Fails;
            if let (true, Some(t)) = (show, &e.trace) {
                let what = match (e.kind, e.status) {
                    (ExpectKind::Allowed, Status::Holds) => "witness",
                    _ => "counterexample",
                };
                writeln!(f, "    {what}:")?;
                for step in t {
                    writeln!(f, "      {step}")?;
                }
                if let Some(s) = &e.final_state {
                    writeln!(f, "      final {s}")?;
                }
            }
        }
        let mut notes = String::new();
        if r.stats.truncated {
            notes.push_str(", search truncated");
        }
        if r.stats.unstable {
            notes.push_str(", final states change with one more loop unrolling");
        }
        writeln!(
            f,
            "  {} configuration(s), {} final state(s), {:.1} ms{notes}",
            r.stats.configs,
            r.stats.final_states,
            r.elapsed.as_secs_f64() * 1000.0
        )
    }
}
