use crate::ast::{Action, FenceKind, Instr, Model, Oc, Syntax};

use super::ModelConfig;

/// Allowed (earlier, later) constraint pairs for reordering.
pub const OC_RELATION: [(Oc, Oc); 4] = [
    (Oc::Relaxed, Oc::Relaxed),
    (Oc::Relaxed, Oc::Acquire),
    (Oc::Release, Oc::Relaxed),
    (Oc::Release, Oc::Acquire),
];

fn as_ordering(oc: Oc) -> Oc {
    // consume orders exactly like relaxed
    if oc == Oc::Consume {
        Oc::Relaxed
    } else {
        oc
    }
}

pub fn oc_allows(a: Oc, b: Oc) -> bool {
    OC_RELATION.contains(&(as_ordering(a), as_ordering(b)))
}

pub fn ro_g(a: &Instr, b: &Instr, guard_store_reorder: bool) -> bool {
    let d = crate::ast::dep_relations(a, b);
    if !(d.interference_free && d.load_indep) {
        return false;
    }
    guard_store_reorder || !(a.is_guard() && b.is_store())
}

fn fence_permits(kind: FenceKind, other: &Instr) -> bool {
    match kind {
        FenceKind::Store => !other.is_store(),
        FenceKind::Load => !other.is_load(),
        FenceKind::Full => false,
    }
}

pub fn ro_fence(a: &Instr, b: &Instr) -> bool {
    let fa = a.constraint_sets().fences;
    let fb = b.constraint_sets().fences;
    fa.iter().all(|k| fence_permits(*k, b)) && fb.iter().all(|k| fence_permits(*k, a))
}

pub fn ro_ocs(a: &Instr, b: &Instr) -> bool {
    let (oa, ob) = (a.ocs(), b.ocs());
    oa.iter().all(|x| ob.iter().all(|y| oc_allows(x, y)))
}

pub fn ro_instr(cfg: &ModelConfig, a: &Instr, b: &Instr) -> bool {
    match cfg.base {
        Model::Sc => false,
        Model::Par => true,
        Model::C11 => ro_g(a, b, cfg.guard_store_reorder) && ro_fence(a, b) && ro_ocs(a, b),
    }
}

/// Lifted pointwise: every constituent pair must permit the swap.
pub fn ro_action(cfg: &ModelConfig, a: &Action, b: &Action) -> bool {
    a.instrs().iter().all(|x| b.instrs().iter().all(|y| ro_instr(cfg, x, y)))
}
