//! Judgments over explorations: Hoare and reachability checks, refinement,
//! plain interpretation, blockall and the reduction-law suite.

mod blockall;
mod hoare;
mod laws;
mod oracle;
mod plain;
mod refine;

use serde::Serialize;
use thiserror::Error;

use crate::ast::Action;
use crate::semantics::{State, WitnessStep};

pub use blockall::{block_all_check, block_all_check_in};
pub use hoare::{hoare_check, judge_exploration, HoareMode};
pub use laws::{law_check, law_fixtures, law_ids, run_law_suite, Expect, LawArgs, LawFixture, LawOutcome};
pub use oracle::sc_oracle;
pub use plain::{plain_interpretation, strip_constraints};
pub use refine::{refines, refines_in, trace_equiv, trace_equiv_in};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JudgmentKind {
    Always,
    Reach,
    Refines,
    TraceEquiv,
    Blockall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    InconclusiveAtBound,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::InconclusiveAtBound => "inconclusive_at_bound",
        }
    }
}

/// A run through the program; `state` is the final state when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub steps: Vec<WitnessStep>,
    pub state: Option<State>,
}

impl Evidence {
    /// A single-thread trace with no state.
    pub fn from_trace(t: &[Action]) -> Self {
        Evidence {
            steps: t.iter().map(|a| WitnessStep { thread: 0, label: a.clone(), origin: a.clone() }).collect(),
            state: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Judgment {
    pub kind: JudgmentKind,
    pub status: Status,
    pub witness: Option<Evidence>,
    pub counterexample: Option<Evidence>,
    /// Loop unrolling bound the verdict was reached at, when loops were present.
    pub unroll_bound: Option<usize>,
    pub detail: String,
}

impl Judgment {
    pub(crate) fn new(kind: JudgmentKind, status: Status) -> Self {
        Judgment { kind, status, witness: None, counterexample: None, unroll_bound: None, detail: String::new() }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("condition `{0}` does not evaluate to a boolean")]
    NotBoolean(String),
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("law {law}: {reason}")]
    BadArgs { law: String, reason: String },
    #[error("law {law}: side condition violated: {reason}")]
    SideCondition { law: String, reason: String },
}
