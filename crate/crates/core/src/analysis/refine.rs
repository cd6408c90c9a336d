use std::collections::BTreeSet;

use crate::ast::Command;
use crate::reorder::ModelConfig;
use crate::semantics::{enumerate_traces, Domain, ExplorationLimits, Trace, TraceSet};

use super::{Evidence, Judgment, JudgmentKind, Status};

fn least_missing(sub: &BTreeSet<Trace>, sup: &BTreeSet<Trace>) -> Option<Trace> {
    sub.iter().filter(|t| !sup.contains(*t)).min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))).cloned()
}

fn inclusion(kind: JudgmentKind, c: &TraceSet, d: &TraceSet, limits: &ExplorationLimits) -> Judgment {
    let mut j = Judgment::new(kind, Status::Holds);
    if c.unrolled || d.unrolled {
        j.unroll_bound = Some(limits.max_unroll);
    }
    if let Some(t) = least_missing(&d.traces, &c.traces) {
        // a trace missing from a truncated enumeration might still exist
        j.status = if c.bounded { Status::InconclusiveAtBound } else { Status::Fails };
        j.counterexample = Some(Evidence::from_trace(&t));
    } else if d.bounded {
        j.status = Status::InconclusiveAtBound;
    }
    j.detail = format!("{} trace(s) vs {} trace(s)", c.traces.len(), d.traces.len());
    j
}

/// `c ⊑ d`: every terminating trace of `d` is a trace of `c`.
pub fn refines_in(cfg: &ModelConfig, c: &Command, d: &Command, dom: &Domain, limits: &ExplorationLimits) -> Judgment {
    let tc = enumerate_traces(cfg, c, dom, limits);
    let td = enumerate_traces(cfg, d, dom, limits);
    inclusion(JudgmentKind::Refines, &tc, &td, limits)
}

pub fn refines(cfg: &ModelConfig, c: &Command, d: &Command, limits: &ExplorationLimits) -> Judgment {
    refines_in(cfg, c, d, &Domain::for_commands([c, d]), limits)
}

/// Both inclusions; the counterexample is taken from the first that fails.
pub fn trace_equiv_in(cfg: &ModelConfig, c: &Command, d: &Command, dom: &Domain, limits: &ExplorationLimits) -> Judgment {
    let tc = enumerate_traces(cfg, c, dom, limits);
    let td = enumerate_traces(cfg, d, dom, limits);
    let fwd = inclusion(JudgmentKind::TraceEquiv, &tc, &td, limits);
    let back = inclusion(JudgmentKind::TraceEquiv, &td, &tc, limits);
    let rank = |s: Status| match s {
        Status::Fails => 0,
        Status::InconclusiveAtBound => 1,
        Status::Holds => 2,
    };
    let mut j = if rank(back.status) < rank(fwd.status) { back } else { fwd };
    j.detail = format!("{} trace(s) vs {} trace(s)", tc.traces.len(), td.traces.len());
    j
}

pub fn trace_equiv(cfg: &ModelConfig, c: &Command, d: &Command, limits: &ExplorationLimits) -> Judgment {
    trace_equiv_in(cfg, c, d, &Domain::for_commands([c, d]), limits)
}
