use std::collections::BTreeSet;

use crate::ast::{Action, BinOp, Expr, Instr, UnOp, VarId};

/// Substitute `with` for `v` in `b`'s members, stopping after the first
/// member that itself writes `v`.
fn subst_action(b: &Action, v: &VarId, with: &Expr) -> Action {
    let mut live = true;
    b.map(|i| {
        if !live {
            return i.clone();
        }
        let out = i.map_expr(|e| e.substitute(v, with));
        if i.target() == Some(v) {
            live = false;
        }
        out
    })
}

/// `b` with `a`'s assignment forwarded into it.
pub fn forward(a: &Instr, b: &Instr) -> Instr {
    match a {
        Instr::Assign { target, rhs } => b.map_expr(|e| e.substitute(&target.var, rhs)),
        _ => b.clone(),
    }
}

pub fn forward_action(a: &Instr, b: &Action) -> Action {
    match a {
        Instr::Assign { target, rhs } => subst_action(b, &target.var, rhs),
        _ => b.clone(),
    }
}

/// Split a condition into conjuncts, pushing negation inwards.
fn conjuncts(p: &Expr, out: &mut Vec<Expr>) {
    match p {
        Expr::Binary(BinOp::And, a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        Expr::Unary(UnOp::Not, inner) => match &**inner {
            Expr::Binary(BinOp::Or, a, b) => {
                conjuncts(&Expr::not((**a).clone()), out);
                conjuncts(&Expr::not((**b).clone()), out);
            }
            other => {
                let n = Expr::not(other.clone());
                if matches!(n, Expr::Unary(UnOp::Not, _)) {
                    out.push(n);
                } else {
                    conjuncts(&n, out);
                }
            }
        },
        other => out.push(other.clone()),
    }
}

/// Equalities `v = e` (e a constant or variable) syntactically entailed by `p`.
fn entailed_equalities(p: &Expr) -> Vec<(VarId, Expr)> {
    let mut cs = Vec::new();
    conjuncts(p, &mut cs);
    let mut out = Vec::new();
    for c in cs {
        match c {
            Expr::Binary(BinOp::Eq, a, b) => {
                if let Expr::Var(r) = &*a {
                    if matches!(*b, Expr::Const(_) | Expr::Var(_)) {
                        out.push((r.var.clone(), (*b).clone()));
                    }
                }
                if let Expr::Var(r) = &*b {
                    if matches!(*a, Expr::Const(_) | Expr::Var(_)) {
                        out.push((r.var.clone(), (*a).clone()));
                    }
                }
            }
            Expr::Var(r) => out.push((r.var.clone(), Expr::bool(true))),
            Expr::Unary(UnOp::Not, inner) => {
                if let Expr::Var(r) = &*inner {
                    out.push((r.var.clone(), Expr::bool(false)));
                }
            }
            _ => {}
        }
    }
    out.retain(|(v, e)| !e.mentions(v));
    out
}

fn fold_action(a: &Action) -> Action {
    a.map(|i| i.map_expr(Expr::fold_constants))
}

/// Guard forwarding: assignments forward as usual; a guard `<p>` may
/// rewrite `b` using equalities that `p` entails, followed by constant folding.
pub fn guard_forward_action(a: &Instr, b: &Action) -> BTreeSet<Action> {
    let mut out = BTreeSet::new();
    let plain = forward_action(a, b);
    out.insert(plain.clone());
    if let Instr::Guard(p) = a {
        let eqs = entailed_equalities(p);
        let mut all = b.clone();
        for (v, e) in &eqs {
            let one = subst_action(b, v, e);
            out.insert(fold_action(&one));
            out.insert(one);
            all = subst_action(&all, v, e);
        }
        out.insert(fold_action(&all));
        out.insert(all);
    }
    out
}

pub fn guard_forward(a: &Instr, b: &Instr) -> BTreeSet<Instr> {
    guard_forward_action(a, &Action::single(b.clone()))
        .into_iter()
        .map(|act| act.instrs()[0].clone())
        .collect()
}
