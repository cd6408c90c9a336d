use serde::Serialize;

use crate::ast::{BinOp, Expr, Instr, Oc, OcSet, UnOp, Value};

use super::ModelConfig;

/// The five candidate readings of "e may be replaced by e'".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OcMore {
    A,
    B,
    C,
    D,
    E,
}

impl OcMore {
    pub const ALL: [OcMore; 5] = [OcMore::A, OcMore::B, OcMore::C, OcMore::D, OcMore::E];

    pub fn letter(self) -> char {
        match self {
            OcMore::A => 'a',
            OcMore::B => 'b',
            OcMore::C => 'c',
            OcMore::D => 'd',
            OcMore::E => 'e',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        OcMore::ALL.into_iter().find(|o| o.letter() == c.to_ascii_lowercase())
    }
}

fn acs() -> OcSet {
    OcSet::of(&[Oc::Acquire, Oc::Consume, Oc::SeqCst])
}

pub fn ocmore_allows(opt: OcMore, before: &Expr, after: &Expr) -> bool {
    let (e, e2) = (before.ocs(), after.ocs());
    match opt {
        OcMore::A => e2 == e,
        OcMore::B => e2.is_subset(e) && e.is_subset(OcSet::relaxed()),
        OcMore::C => e.is_subset(OcSet::relaxed()),
        OcMore::D => e.intersect(acs()) == e2.intersect(acs()),
        OcMore::E => true,
    }
}

/// Instruction-level check used by reorder triples: only a changed
/// expression is subject to the option.
pub fn ocmore_allows_instr(opt: OcMore, before: &Instr, after: &Instr) -> bool {
    match (before.expr(), after.expr()) {
        (Some(e), Some(e2)) if e != e2 => ocmore_allows(opt, e, e2),
        _ => true,
    }
}

/// Strictly smaller by node count, then by variable occurrences.
pub fn simpler(before: &Expr, after: &Expr) -> bool {
    (after.node_count(), after.var_occurrences()) < (before.node_count(), before.var_occurrences())
}

fn is_int(e: &Expr, i: i64) -> bool {
    e.as_const() == Some(Value::Int(i))
}

/// Candidate rewrites at the root of `e`, with their context guards.
fn root_rewrites(cfg: &ModelConfig, e: &Expr) -> Vec<(Expr, Expr)> {
    let t = Expr::bool(true);
    let mut out = Vec::new();
    match e {
        Expr::Unary(op, a) => {
            if let Some(v) = a.as_const() {
                if let Ok(r) = crate::ast::apply_unop(*op, v) {
                    out.push((t.clone(), Expr::Const(r)));
                }
            }
            if *op == UnOp::Neg && is_int(a, 0) {
                out.push((t, Expr::int(0)));
            }
        }
        Expr::Binary(op, a, b) => {
            if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
                if let Ok(r) = crate::ast::apply_binop(*op, x, y) {
                    out.push((t.clone(), Expr::Const(r)));
                }
            }
            match op {
                BinOp::Sub if a == b => out.push((t.clone(), Expr::int(0))),
                BinOp::Sub => {
                    if let (Expr::Var(r1), Expr::Var(r2)) = (&**a, &**b) {
                        let local_only = !r1.var.is_shared() && !r2.var.is_shared();
                        if r1.var != r2.var && (local_only || !cfg.optimize_strict) {
                            out.push((Expr::eq((**a).clone(), (**b).clone()), Expr::int(0)));
                        }
                    }
                }
                BinOp::Mul => {
                    if is_int(a, 0) || is_int(b, 0) {
                        out.push((t.clone(), Expr::int(0)));
                    }
                    if is_int(b, 1) {
                        out.push((t.clone(), (**a).clone()));
                    }
                    if is_int(a, 1) {
                        out.push((t.clone(), (**b).clone()));
                    }
                }
                BinOp::Add => {
                    if is_int(b, 0) {
                        out.push((t.clone(), (**a).clone()));
                    }
                    if is_int(a, 0) {
                        out.push((t.clone(), (**b).clone()));
                    }
                }
                _ => {}
            }
        }
        Expr::Const(_) | Expr::Var(_) => {}
    }
    out
}

fn all_rewrites(cfg: &ModelConfig, e: &Expr) -> Vec<(Expr, Expr)> {
    let mut out = root_rewrites(cfg, e);
    match e {
        Expr::Unary(op, a) => {
            for (g, a2) in all_rewrites(cfg, a) {
                out.push((g, Expr::Unary(*op, Box::new(a2))));
            }
        }
        Expr::Binary(op, a, b) => {
            for (g, a2) in all_rewrites(cfg, a) {
                out.push((g, Expr::Binary(*op, Box::new(a2), b.clone())));
            }
            for (g, b2) in all_rewrites(cfg, b) {
                out.push((g, Expr::Binary(*op, a.clone(), Box::new(b2))));
            }
        }
        Expr::Const(_) | Expr::Var(_) => {}
    }
    out
}

/// One-step optimisations of `e`: pairs of (context guard, replacement).
pub fn optimize_expr(cfg: &ModelConfig, e: &Expr) -> Vec<(Expr, Expr)> {
    let mut out: Vec<(Expr, Expr)> = all_rewrites(cfg, e)
        .into_iter()
        .filter(|(_, e2)| simpler(e, e2) && ocmore_allows(cfg.ocmore, e, e2))
        .collect();
    out.sort();
    out.dedup();
    out
}
