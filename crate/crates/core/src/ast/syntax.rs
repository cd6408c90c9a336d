//! Syntactic extraction: variable sets, constraint sets, dependency tests.

use std::collections::BTreeSet;

use serde::Serialize;

use super::command::Command;
use super::expr::{Expr, OcSet, VarId};
use super::instr::{Action, FenceKind, Instr, SpecInstr};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VarSets {
    pub wv: BTreeSet<VarId>,
    pub rv: BTreeSet<VarId>,
    pub fv: BTreeSet<VarId>,
    pub sv: BTreeSet<VarId>,
    pub rsv: BTreeSet<VarId>,
    pub wsv: BTreeSet<VarId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintSets {
    pub ocs: OcSet,
    pub fences: BTreeSet<FenceKind>,
}

/// Anything the reorder relations can inspect.
pub trait Syntax {
    fn collect_vars(&self, w: &mut BTreeSet<VarId>, r: &mut BTreeSet<VarId>);
    fn collect_constraints(&self, cs: &mut ConstraintSets);

    fn var_sets(&self) -> VarSets {
        let (mut wv, mut rv) = (BTreeSet::new(), BTreeSet::new());
        self.collect_vars(&mut wv, &mut rv);
        let fv: BTreeSet<VarId> = wv.union(&rv).cloned().collect();
        let shared = |s: &BTreeSet<VarId>| s.iter().filter(|v| v.is_shared()).cloned().collect::<BTreeSet<_>>();
        VarSets { sv: shared(&fv), rsv: shared(&rv), wsv: shared(&wv), wv, rv, fv }
    }

    fn constraint_sets(&self) -> ConstraintSets {
        let mut cs = ConstraintSets::default();
        self.collect_constraints(&mut cs);
        cs
    }

    fn ocs(&self) -> OcSet {
        self.constraint_sets().ocs
    }

    fn is_store(&self) -> bool {
        !self.var_sets().wsv.is_empty()
    }

    fn is_load(&self) -> bool {
        !self.var_sets().rsv.is_empty()
    }
}

impl Syntax for Expr {
    fn collect_vars(&self, _w: &mut BTreeSet<VarId>, r: &mut BTreeSet<VarId>) {
        self.visit_refs(&mut |v| {
            r.insert(v.var.clone());
        });
    }

    fn collect_constraints(&self, cs: &mut ConstraintSets) {
        cs.ocs = cs.ocs.union(Expr::ocs(self));
    }
}

impl Syntax for Instr {
    fn collect_vars(&self, w: &mut BTreeSet<VarId>, r: &mut BTreeSet<VarId>) {
        match self {
            Instr::Assign { target, rhs } => {
                w.insert(target.var.clone());
                rhs.collect_vars(w, r);
            }
            Instr::Guard(e) => e.collect_vars(w, r),
            Instr::Fence { .. } => {}
        }
    }

    fn collect_constraints(&self, cs: &mut ConstraintSets) {
        match self {
            Instr::Assign { target, rhs } => {
                cs.ocs = cs.ocs.union(target.ocs);
                rhs.collect_constraints(cs);
            }
            Instr::Guard(e) => e.collect_constraints(cs),
            Instr::Fence { kind, ocs } => {
                cs.ocs = cs.ocs.union(*ocs);
                cs.fences.insert(*kind);
            }
        }
    }
}

impl Syntax for SpecInstr {
    fn collect_vars(&self, w: &mut BTreeSet<VarId>, r: &mut BTreeSet<VarId>) {
        self.instr.collect_vars(w, r)
    }

    fn collect_constraints(&self, cs: &mut ConstraintSets) {
        self.instr.collect_constraints(cs)
    }
}

impl Syntax for Action {
    fn collect_vars(&self, w: &mut BTreeSet<VarId>, r: &mut BTreeSet<VarId>) {
        self.instrs().iter().for_each(|i| i.collect_vars(w, r))
    }

    fn collect_constraints(&self, cs: &mut ConstraintSets) {
        self.instrs().iter().for_each(|i| i.collect_constraints(cs))
    }
}

impl Syntax for Command {
    fn collect_vars(&self, w: &mut BTreeSet<VarId>, r: &mut BTreeSet<VarId>) {
        self.visit_instrs(&mut |i| i.collect_vars(w, r))
    }

    fn collect_constraints(&self, cs: &mut ConstraintSets) {
        self.visit_instrs(&mut |i| i.collect_constraints(cs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DepRelations {
    pub datadep: bool,
    pub interference_free: bool,
    pub load_indep: bool,
    pub is_store_a: bool,
    pub is_load_a: bool,
}

pub fn dep_relations(a: &impl Syntax, b: &impl Syntax) -> DepRelations {
    let (sa, sb) = (a.var_sets(), b.var_sets());
    DepRelations {
        datadep: !sa.wv.is_disjoint(&sb.rv),
        interference_free: sa.wv.is_disjoint(&sb.fv) && sb.wv.is_disjoint(&sa.fv),
        load_indep: sa.rsv.is_disjoint(&sb.rsv),
        is_store_a: !sa.wsv.is_empty(),
        is_load_a: !sa.rsv.is_empty(),
    }
}

pub fn datadep(a: &impl Syntax, b: &impl Syntax) -> bool {
    dep_relations(a, b).datadep
}
