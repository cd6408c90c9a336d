use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use serde::Serialize;

use crate::ast::Command;
use crate::reorder::ModelConfig;

use super::state::{classify, Domain, LabelKind};
use super::step::{instantiate_domain, Stepper};
use super::{ExplorationLimits, Trace};

/// Terminating traces of visible labels. `bounded` is set when a limit cut
/// the enumeration short, `unrolled` when a loop was unrolled to the bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub traces: BTreeSet<Trace>,
    pub bounded: bool,
    pub unrolled: bool,
}

struct Enum<'a> {
    stepper: Stepper<'a>,
    dom: &'a Domain,
    limits: &'a ExplorationLimits,
    memo: HashMap<Command, Rc<BTreeSet<Trace>>>,
    active: HashSet<Command>,
    bounded: bool,
}

impl Enum<'_> {
    fn go(&mut self, c: &Command, depth: usize) -> Rc<BTreeSet<Trace>> {
        if let Some(t) = self.memo.get(c) {
            return t.clone();
        }
        if c.is_nil() {
            return Rc::new(BTreeSet::from([Vec::new()]));
        }
        if depth >= self.limits.max_depth || self.memo.len() >= self.limits.max_configs || self.active.contains(c) {
            self.bounded = true;
            return Rc::new(BTreeSet::new());
        }
        self.active.insert(c.clone());
        let mut out = BTreeSet::new();
        let steps = self.stepper.steps(c);
        for raw in steps.iter() {
            for st in instantiate_domain(raw, self.dom) {
                let kind = classify(&st.label, self.dom);
                if kind == LabelKind::Infeasible {
                    continue;
                }
                let rest = self.go(&st.next, depth + 1);
                if kind == LabelKind::Silent {
                    out.extend(rest.iter().cloned());
                } else {
                    for t in rest.iter() {
                        let mut t2 = Vec::with_capacity(t.len() + 1);
                        t2.push(st.label.clone());
                        t2.extend(t.iter().cloned());
                        out.insert(t2);
                    }
                }
            }
        }
        self.active.remove(c);
        let out = Rc::new(out);
        self.memo.insert(c.clone(), out.clone());
        out
    }
}

/// All terminating visible traces of `c`, loads ranging over `dom`.
pub fn enumerate_traces(cfg: &ModelConfig, c: &Command, dom: &Domain, limits: &ExplorationLimits) -> TraceSet {
    let mut e = Enum {
        stepper: Stepper::new(cfg, limits),
        dom,
        limits,
        memo: HashMap::new(),
        active: HashSet::new(),
        bounded: false,
    };
    let traces = e.go(c, 0);
    TraceSet { traces: (*traces).clone(), bounded: e.bounded, unrolled: c.contains_iterate() }
}
