use std::sync::Arc;

use serde::Serialize;

use crate::ast::{Command, Expr, Program, Value};
use crate::reorder::ModelConfig;
use crate::semantics::{explore_threads, initial_states, Domain, Exploration, ExplorationLimits, State, WitnessStep};

use super::{AnalysisError, Evidence, Judgment, JudgmentKind, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HoareMode {
    /// Every final state satisfies the postcondition.
    Always,
    /// Some final state satisfies the postcondition.
    Reach,
}

fn check_bound(p: &Program, e: &Expr) -> Result<(), AnalysisError> {
    match e.vars().into_iter().find(|v| p.decl(v).is_none()) {
        Some(v) => Err(AnalysisError::UnboundVariable(v.name().to_string())),
        None => Ok(()),
    }
}

fn truth(e: &Expr, s: &State) -> Result<bool, AnalysisError> {
    match s.eval(e) {
        Ok(Value::Bool(b)) => Ok(b),
        _ => Err(AnalysisError::NotBoolean(e.to_string())),
    }
}

/// Least by (length, rendered labels) so reports are deterministic.
fn least<'a>(it: impl Iterator<Item = (&'a State, &'a Vec<WitnessStep>)>) -> Option<Evidence> {
    it.min_by_key(|(s, w)| (w.len(), w.iter().map(|x| (x.thread, x.label.to_string())).collect::<Vec<_>>(), (*s).clone()))
        .map(|(s, w)| Evidence { steps: w.clone(), state: Some(s.clone()) })
}

/// Decide `{pre} p {post}` (always) or its reachability dual by exhaustive
/// exploration from the declared initial states satisfying `pre`.
pub fn hoare_check(
    cfg: &ModelConfig,
    p: &Program,
    pre: &Expr,
    post: &Expr,
    mode: HoareMode,
    limits: &ExplorationLimits,
) -> Result<Judgment, AnalysisError> {
    check_bound(p, pre)?;
    check_bound(p, post)?;
    let dom = Domain::for_program(p);
    let mut inits = Vec::new();
    for s in initial_states(p, &dom) {
        if truth(pre, &s)? {
            inits.push(s);
        }
    }
    let threads: Vec<Arc<Command>> = p.threads.iter().map(|t| t.body.clone()).collect();
    let ex = explore_threads(cfg, &threads, &inits, &dom, limits);
    let loops = threads.iter().any(|t| t.contains_iterate());
    judge_exploration(&ex, post, mode, loops.then_some(limits.max_unroll))
}

/// Judge an already computed exploration against `post`.
pub fn judge_exploration(
    ex: &Exploration,
    post: &Expr,
    mode: HoareMode,
    unroll_bound: Option<usize>,
) -> Result<Judgment, AnalysisError> {
    let mut sat = Vec::new();
    let mut unsat = Vec::new();
    for (s, w) in &ex.finals {
        if truth(post, s)? {
            sat.push((s, w));
        } else {
            unsat.push((s, w));
        }
    }
    let bounded = !ex.is_conclusive();
    let mut j = match mode {
        HoareMode::Always => {
            let mut j = Judgment::new(JudgmentKind::Always, Status::Holds);
            if let Some(cex) = least(unsat.into_iter()) {
                j.status = Status::Fails;
                j.counterexample = Some(cex);
            } else if bounded {
                j.status = Status::InconclusiveAtBound;
            }
            j
        }
        HoareMode::Reach => {
            let mut j = Judgment::new(JudgmentKind::Reach, Status::Fails);
            if let Some(w) = least(sat.into_iter()) {
                j.status = Status::Holds;
                j.witness = Some(w);
            } else if bounded {
                j.status = Status::InconclusiveAtBound;
            }
            j
        }
    };
    j.unroll_bound = unroll_bound;
    j.detail = format!(
        "{} final state(s), {} configuration(s){}{}",
        ex.finals.len(),
        ex.stats.configs,
        if ex.truncated { ", search truncated" } else { "" },
        if ex.unstable { ", final states not stable under one more unrolling" } else { "" },
    );
    Ok(j)
}
