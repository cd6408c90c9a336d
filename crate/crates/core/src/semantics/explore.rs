use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::ast::{Action, Command, Program, Syntax, Value};
use crate::reorder::ModelConfig;

use super::state::{apply_action, Domain, State};
use super::step::{instantiate_state, Stepper};
use super::ExplorationLimits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    pub thread: usize,
    pub label: Action,
    /// The label as first produced, before being moved past earlier code.
    pub origin: Action,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExploreStats {
    pub configs: usize,
    pub transitions: usize,
}

/// Reachable final states, each with a shortest visible witness.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Exploration {
    pub finals: BTreeMap<State, Vec<WitnessStep>>,
    /// A limit stopped the search before it was exhaustive.
    pub truncated: bool,
    /// Loops were present and one more unrolling changed the final states.
    pub unstable: bool,
    pub stats: ExploreStats,
}

impl Exploration {
    pub fn is_conclusive(&self) -> bool {
        !self.truncated && !self.unstable
    }

    pub fn final_states(&self) -> BTreeSet<State> {
        self.finals.keys().cloned().collect()
    }
}

/// Initialised variables take their value; the rest range over the domain.
pub fn initial_states(p: &Program, dom: &Domain) -> Vec<State> {
    let mut out = vec![State::new()];
    for d in p.decls() {
        let vals: Vec<Value> = match d.init {
            Some(v) => vec![v],
            None => dom.values_for(&d.var),
        };
        out = out
            .into_iter()
            .flat_map(|s| {
                vals.iter().map(move |v| {
                    let mut s2 = s.clone();
                    s2.set(d.var.clone(), *v);
                    s2
                })
            })
            .collect();
    }
    out
}

type Config = (Vec<Arc<Command>>, State);

fn is_silent(a: &Action) -> bool {
    a.is_all_guards() && a.var_sets().sv.is_empty()
}

fn run(
    cfg: &ModelConfig,
    threads: &[Arc<Command>],
    inits: &[State],
    dom: &Domain,
    limits: &ExplorationLimits,
) -> Exploration {
    let stepper = Stepper::new(cfg, limits);
    let mut parent: HashMap<Config, Option<(Config, Option<WitnessStep>)>> = HashMap::new();
    let mut dist: HashMap<Config, usize> = HashMap::new();
    let mut queue: VecDeque<(Config, usize)> = VecDeque::new();
    let mut ex = Exploration::default();
    for s in inits {
        let c: Config = (threads.to_vec(), s.clone());
        if dist.insert(c.clone(), 0).is_none() {
            parent.insert(c.clone(), None);
            queue.push_back((c, 0));
        }
    }
    let mut done: BTreeSet<State> = BTreeSet::new();
    let mut finals_cfg: Vec<Config> = Vec::new();
    while let Some((conf, d)) = queue.pop_front() {
        if dist.get(&conf).is_some_and(|&best| best < d) {
            continue;
        }
        ex.stats.configs += 1;
        if conf.0.iter().all(|c| c.is_nil()) {
            if done.insert(conf.1.clone()) {
                finals_cfg.push(conf.clone());
            }
            continue;
        }
        if d >= limits.max_depth {
            ex.truncated = true;
            continue;
        }
        for (t, cmd) in conf.0.iter().enumerate() {
            for raw in stepper.steps(cmd).iter() {
                for st in instantiate_state(raw, &conf.1, dom) {
                    let Some(s2) = apply_action(&conf.1, &st.label) else { continue };
                    ex.stats.transitions += 1;
                    let mut ts = conf.0.clone();
                    ts[t] = st.next.clone();
                    let next: Config = (ts, s2);
                    let silent = is_silent(&st.label);
                    let nd = if silent { d } else { d + 1 };
                    if dist.get(&next).is_some_and(|&best| best <= nd) {
                        continue;
                    }
                    if dist.len() >= limits.max_configs {
                        ex.truncated = true;
                        continue;
                    }
                    dist.insert(next.clone(), nd);
                    let w = (!silent).then(|| WitnessStep { thread: t, label: st.label.clone(), origin: st.origin.clone() });
                    parent.insert(next.clone(), Some((conf.clone(), w)));
                    if silent {
                        queue.push_front((next, nd));
                    } else {
                        queue.push_back((next, nd));
                    }
                }
            }
        }
    }
    for conf in finals_cfg {
        let mut path = Vec::new();
        let mut cur = conf.clone();
        while let Some(Some((prev, w))) = parent.get(&cur) {
            if let Some(w) = w {
                path.push(w.clone());
            }
            cur = prev.clone();
        }
        path.reverse();
        ex.finals.insert(conf.1, path);
    }
    ex
}

/// Explore the parallel composition of `threads` from each initial state.
/// With loops present, a second run at one more unrolling checks that the
/// final states have stabilised.
pub fn explore_threads(
    cfg: &ModelConfig,
    threads: &[Arc<Command>],
    inits: &[State],
    dom: &Domain,
    limits: &ExplorationLimits,
) -> Exploration {
    let mut ex = run(cfg, threads, inits, dom, limits);
    if threads.iter().any(|t| t.contains_iterate()) && !ex.truncated {
        let more = run(cfg, threads, inits, dom, &limits.with_unroll(limits.max_unroll + 1));
        ex.truncated |= more.truncated;
        ex.unstable = more.final_states() != ex.final_states();
    }
    ex
}

pub fn explore_finals(p: &Program, cfg: &ModelConfig, limits: &ExplorationLimits) -> Exploration {
    let dom = Domain::for_program(p);
    let threads: Vec<Arc<Command>> = p.threads.iter().map(|t| t.body.clone()).collect();
    explore_threads(cfg, &threads, &initial_states(p, &dom), &dom, limits)
}
