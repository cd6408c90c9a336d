use crate::ast::{Command, Instr, Model, SpecInstr, VarRef};

/// Every non-parallel composition and every loop becomes SC and fences are
/// deleted. Ordering constraints stay in place; they are inert under SC.
pub fn plain_interpretation(c: &Command) -> Command {
    c.rebuild(
        &|m| if m == Model::Par { Model::Par } else { Model::Sc },
        &|s: &[SpecInstr]| {
            let kept: Vec<SpecInstr> =
                s.iter().filter(|si| !matches!(si.instr, Instr::Fence { .. })).cloned().collect();
            Command::stmt(kept)
        },
    )
}

/// Drop ordering constraints from every variable reference.
pub fn strip_constraints(c: &Command) -> Command {
    c.map_instrs(&|i| match i {
        Instr::Fence { .. } => i.clone(),
        _ => {
            let i = match i {
                Instr::Assign { target, rhs } => {
                    Instr::Assign { target: VarRef::plain(target.var.clone()), rhs: rhs.clone() }
                }
                other => other.clone(),
            };
            i.map_expr(|e| e.map_refs(&|r| VarRef::plain(r.var.clone())))
        }
    })
}
