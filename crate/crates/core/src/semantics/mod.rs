//! Operational semantics: single steps, trace sets and final-state exploration.

mod explore;
mod state;
mod step;
mod traces;

use serde::Serialize;

pub use explore::{explore_finals, explore_threads, initial_states, Exploration, ExploreStats, WitnessStep};
pub use state::{apply_action, classify, Domain, LabelKind, State};
pub use step::{step_command, step_expr, step_instr, Step};
pub use traces::{enumerate_traces, TraceSet};

pub type Trace = Vec<crate::ast::Action>;

/// Bounds on exploration. `MEMMOD_MAX_CONFIGS` overrides `max_configs` in
/// [`ExplorationLimits::from_env`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationLimits {
    pub max_unroll: usize,
    pub max_depth: usize,
    pub max_configs: usize,
}

impl Default for ExplorationLimits {
    fn default() -> Self {
        ExplorationLimits { max_unroll: 3, max_depth: 1_000_000, max_configs: 1_000_000 }
    }
}

impl ExplorationLimits {
    pub fn from_env() -> Self {
        let mut l = Self::default();
        if let Some(n) = std::env::var("MEMMOD_MAX_CONFIGS").ok().and_then(|s| s.trim().parse().ok()) {
            l.max_configs = n;
        }
        l
    }

    pub fn with_unroll(self, max_unroll: usize) -> Self {
        ExplorationLimits { max_unroll, ..self }
    }
}
