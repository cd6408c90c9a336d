//! Reordering relations, forwarding and reorder triples.

mod forward;
mod optimize;
mod relation;
mod triple;

use serde::Serialize;

use crate::ast::Model;

pub use forward::{forward, forward_action, guard_forward, guard_forward_action};
pub use optimize::{ocmore_allows, ocmore_allows_instr, optimize_expr, simpler, OcMore};
pub use relation::{
    oc_allows, ro_action, ro_fence, ro_g, ro_instr, ro_ocs, OC_RELATION,
};
pub use triple::{reorder_triple, reorder_triple_instr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldOrder {
    #[default]
    NearestFirst,
    EarliestFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalOrder {
    #[default]
    Nondet,
    LeftToRight,
}

/// Which reordering relation applies, plus the semantic toggles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModelConfig {
    pub base: Model,
    pub guard_store_reorder: bool,
    pub forwarding: bool,
    pub sfp: bool,
    pub ocmore: OcMore,
    pub optimize: bool,
    /// Restrict optimisation context guards to local variables.
    pub optimize_strict: bool,
    pub fold_order: FoldOrder,
    pub eval_order: EvalOrder,
    pub incremental: bool,
    pub load_coalesce: bool,
    pub write_coalesce: bool,
    pub elim_cond: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            base: Model::C11,
            guard_store_reorder: true,
            forwarding: true,
            sfp: false,
            ocmore: OcMore::B,
            optimize: false,
            optimize_strict: false,
            fold_order: FoldOrder::NearestFirst,
            eval_order: EvalOrder::Nondet,
            incremental: false,
            load_coalesce: false,
            write_coalesce: false,
            elim_cond: false,
        }
    }
}

impl ModelConfig {
    pub fn c11() -> Self {
        Self::default()
    }

    pub fn sc() -> Self {
        ModelConfig { base: Model::Sc, ..Self::default() }
    }

    pub fn par() -> Self {
        ModelConfig { base: Model::Par, ..Self::default() }
    }

    /// Hardware-like preset: guards may not be overtaken by stores.
    pub fn hardware() -> Self {
        ModelConfig { guard_store_reorder: false, ..Self::default() }
    }

    pub fn with_base(&self, base: Model) -> Self {
        ModelConfig { base, ..self.clone() }
    }

    /// The configuration governing a composition node of model `m`.
    pub fn for_node(&self, m: Model) -> ModelConfig {
        match m {
            Model::C11 => self.clone(),
            other => self.with_base(other),
        }
    }
}
