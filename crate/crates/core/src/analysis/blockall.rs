use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::ast::{Action, Command};
use crate::reorder::{reorder_triple, ModelConfig};
use crate::semantics::{classify, step_command, Domain, ExplorationLimits, LabelKind};

use super::{Evidence, Judgment, JudgmentKind, Status};

/// Unfinished residuals of `c` after any feasible partial run, `c` included.
fn residuals(cfg: &ModelConfig, c: &Command, dom: &Domain, limits: &ExplorationLimits) -> (Vec<Command>, bool) {
    let mut seen: HashSet<Command> = HashSet::from([c.clone()]);
    let mut queue = VecDeque::from([c.clone()]);
    let mut out = Vec::new();
    let mut truncated = false;
    while let Some(cur) = queue.pop_front() {
        if cur.is_nil() {
            continue;
        }
        out.push(cur.clone());
        for st in step_command(cfg, &cur, limits, dom) {
            if classify(&st.label, dom) == LabelKind::Infeasible {
                continue;
            }
            if seen.len() >= limits.max_configs {
                truncated = true;
                break;
            }
            if seen.insert((*st.next).clone()) {
                queue.push_back((*st.next).clone());
            }
        }
    }
    (out, truncated)
}

/// Visible labels `d` can emit first, possibly after silent steps.
fn first_visible(cfg: &ModelConfig, d: &Command, dom: &Domain, limits: &ExplorationLimits) -> BTreeSet<Action> {
    let mut seen: HashSet<Command> = HashSet::from([d.clone()]);
    let mut stack = vec![d.clone()];
    let mut out = BTreeSet::new();
    while let Some(cur) = stack.pop() {
        for st in step_command(cfg, &cur, limits, dom) {
            match classify(&st.label, dom) {
                LabelKind::Infeasible => {}
                LabelKind::Visible => {
                    out.insert(st.label.clone());
                }
                LabelKind::Silent => {
                    if seen.insert((*st.next).clone()) {
                        stack.push((*st.next).clone());
                    }
                }
            }
        }
    }
    out
}

/// `c` blocks every first step of `d` at every unfinished point of its execution.
pub fn block_all_check_in(
    cfg: &ModelConfig,
    c: &Command,
    d: &Command,
    dom: &Domain,
    limits: &ExplorationLimits,
) -> Judgment {
    let (cs, truncated) = residuals(cfg, c, dom, limits);
    let bs = first_visible(cfg, d, dom, limits);
    let mut j = Judgment::new(JudgmentKind::Blockall, Status::Holds);
    for c2 in &cs {
        for b in &bs {
            if let Some(b2) = reorder_triple(cfg, c2, b).into_iter().next() {
                j.status = Status::Fails;
                j.counterexample = Some(Evidence::from_trace(std::slice::from_ref(&b2)));
                j.detail = format!("`{b}` overtakes `{c2}` as `{b2}`");
                return j;
            }
        }
    }
    if truncated {
        j.status = Status::InconclusiveAtBound;
    }
    j.detail = format!("{} residual(s) of c, {} first step(s) of d", cs.len(), bs.len());
    j
}

pub fn block_all_check(cfg: &ModelConfig, c: &Command, d: &Command, limits: &ExplorationLimits) -> Judgment {
    block_all_check_in(cfg, c, d, &Domain::for_commands([c, d]), limits)
}
