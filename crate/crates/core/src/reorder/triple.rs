use std::collections::BTreeSet;

use crate::ast::{Action, Command, Instr, Model};

use super::forward::{forward_action, guard_forward_action};
use super::optimize::ocmore_allows_instr;
use super::relation::ro_instr;
use super::{FoldOrder, ModelConfig};

fn ocmore_action(cfg: &ModelConfig, before: &Action, after: &Action) -> bool {
    before == after
        || before.instrs().iter().zip(after.instrs()).all(|(x, y)| ocmore_allows_instr(cfg.ocmore, x, y))
}

/// All `b'` such that `b` may overtake the single instruction `a`, emerging as `b'`.
fn through_instr(cfg: &ModelConfig, a: &Instr, b: &Action) -> BTreeSet<Action> {
    match cfg.base {
        Model::Sc => return BTreeSet::new(),
        // parallel composition never forwards between threads
        Model::Par => return BTreeSet::from([b.clone()]),
        Model::C11 => {}
    }
    let mut cands = BTreeSet::new();
    if cfg.forwarding {
        cands.insert(forward_action(a, b));
    } else {
        cands.insert(b.clone());
    }
    if cfg.sfp && a.is_guard() {
        cands.extend(guard_forward_action(a, b));
    }
    cands
        .into_iter()
        .filter(|b2| b2.instrs().iter().all(|y| ro_instr(cfg, a, y)) && ocmore_action(cfg, b, b2))
        .collect()
}

fn through_all(cfg: &ModelConfig, c: &Command, bs: BTreeSet<Action>) -> BTreeSet<Action> {
    let mut out = BTreeSet::new();
    for b in &bs {
        out.extend(reorder_triple(cfg, c, b));
    }
    out
}

/// The set of `b'` with `c <<b'<< b`: `b` may execute before all of `c`,
/// emerging as `b'`.
pub fn reorder_triple(cfg: &ModelConfig, c: &Command, b: &Action) -> BTreeSet<Action> {
    match c {
        Command::Nil => BTreeSet::from([b.clone()]),
        Command::Stmt(s) => {
            // nearest instruction of the action first
            let mut cur = BTreeSet::from([b.clone()]);
            for si in s.iter().rev() {
                let mut next = BTreeSet::new();
                for x in &cur {
                    next.extend(through_instr(cfg, &si.instr, x));
                }
                cur = next;
                if cur.is_empty() {
                    break;
                }
            }
            cur
        }
        Command::Pseq(_, c1, c2) => match cfg.fold_order {
            FoldOrder::NearestFirst => {
                let mid = reorder_triple(cfg, c2, b);
                through_all(cfg, c1, mid)
            }
            FoldOrder::EarliestFirst => {
                let mid = reorder_triple(cfg, c1, b);
                through_all(cfg, c2, mid)
            }
        },
        Command::Choice(c1, c2) => {
            let l = reorder_triple(cfg, c1, b);
            if l.is_empty() {
                return l;
            }
            let r = reorder_triple(cfg, c2, b);
            l.intersection(&r).cloned().collect()
        }
        Command::Iterate(_, body) => {
            if reorder_triple(cfg, body, b).contains(b) {
                BTreeSet::from([b.clone()])
            } else {
                BTreeSet::new()
            }
        }
    }
}

pub fn reorder_triple_instr(cfg: &ModelConfig, c: &Command, b: &Instr) -> BTreeSet<Instr> {
    reorder_triple(cfg, c, &Action::single(b.clone()))
        .into_iter()
        .map(|a| a.instrs()[0].clone())
        .collect()
}
