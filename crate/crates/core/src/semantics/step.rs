//! The small-step relation. Loads step to a placeholder value which callers
//! instantiate, either over the domain (symbolic) or from the current state.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use crate::ast::{Action, BinOp, Command, Expr, Instr, Model, SpecInstr, Value, VarId, VarRef};
use crate::reorder::{ocmore_allows, optimize_expr, reorder_triple, EvalOrder, ModelConfig};

use super::state::{Domain, State};
use super::ExplorationLimits;

/// One transition: the emitted label, the label as first produced before any
/// forwarding, and the residual command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub label: Action,
    pub origin: Action,
    pub next: Arc<Command>,
}

fn hole_expr() -> Expr {
    Expr::Var(VarRef::plain(VarId::hole()))
}

fn apply(e: &Expr) -> Option<Expr> {
    // operands are constants here; folding evaluates exactly one operator
    let f = e.fold_constants();
    f.is_const().then_some(f)
}

/// Incremental expression steps; labels are single guards.
pub(crate) fn expr_steps(cfg: &ModelConfig, e: &Expr) -> Vec<(Instr, Expr)> {
    match e {
        Expr::Const(_) => vec![],
        Expr::Var(r) if r.var.is_shared() => {
            vec![(Instr::guard(Expr::eq(e.clone(), hole_expr())), hole_expr())]
        }
        Expr::Var(_) => vec![],
        Expr::Unary(op, a) => {
            if a.is_const() {
                return apply(e).map(|v| (Instr::tau(), v)).into_iter().collect();
            }
            expr_steps(cfg, a).into_iter().map(|(l, a2)| (l, Expr::Unary(*op, Box::new(a2)))).collect()
        }
        Expr::Binary(op, a, b) => {
            if a.is_const() && b.is_const() {
                return apply(e).map(|v| (Instr::tau(), v)).into_iter().collect();
            }
            let left: Vec<(Instr, Expr)> = expr_steps(cfg, a)
                .into_iter()
                .map(|(l, a2)| (l, Expr::Binary(*op, Box::new(a2), b.clone())))
                .collect();
            let right_ok = cfg.eval_order == EvalOrder::Nondet || left.is_empty();
            let mut out = left;
            if right_ok {
                out.extend(
                    expr_steps(cfg, b).into_iter().map(|(l, b2)| (l, Expr::Binary(*op, a.clone(), Box::new(b2)))),
                );
            }
            out
        }
    }
}

fn opt_steps(cfg: &ModelConfig, i: &Instr) -> Vec<(Instr, Instr)> {
    match i.expr() {
        Some(e) if cfg.optimize => {
            optimize_expr(cfg, e).into_iter().map(|(g, e2)| (Instr::guard(g), i.with_expr(e2))).collect()
        }
        _ => vec![],
    }
}

/// Steps of a statement: its first member that can still evaluate steps,
/// otherwise the whole statement is emitted as one action.
pub(crate) fn stmt_steps(cfg: &ModelConfig, s: &[SpecInstr]) -> Vec<Step> {
    let multi = s.len() > 1;
    let mut out = Vec::new();
    let mut blocked = false;
    for (k, si) in s.iter().enumerate() {
        let divisible = si.tagged_divisible() || (cfg.incremental && !multi);
        let mut local: Vec<(Instr, Instr)> = Vec::new();
        if divisible {
            if let Some(e) = si.instr.expr() {
                local = expr_steps(cfg, e).into_iter().map(|(l, e2)| (l, si.instr.with_expr(e2))).collect();
            }
        }
        let evaluating = !local.is_empty();
        local.extend(opt_steps(cfg, &si.instr));
        for (label, i2) in local {
            let mut rest = s.to_vec();
            rest[k] = SpecInstr { instr: i2, divisibility: si.divisibility };
            let label = Action::single(label);
            out.push(Step { origin: label.clone(), label, next: Arc::new(Command::Stmt(rest)) });
        }
        if evaluating {
            blocked = true;
            break;
        }
    }
    if !blocked {
        let a = Action::new(s.iter().map(|si| si.instr.clone()).collect()).expect("statements are non-empty");
        out.push(Step { origin: a.clone(), label: a, next: Arc::new(Command::Nil) });
    }
    out
}

fn silent(next: Command) -> Step {
    Step { label: Action::tau(), origin: Action::tau(), next: Arc::new(next) }
}

fn single_instr(c: &Command) -> Option<&Instr> {
    match c {
        Command::Stmt(s) if s.len() == 1 => Some(&s[0].instr),
        _ => None,
    }
}

/// The leading statement of a right-nested chain, and a way to replace it.
fn head(c: &Command) -> Option<(&Instr, Box<dyn Fn(Command) -> Command + '_>)> {
    match c {
        Command::Stmt(_) => single_instr(c).map(|i| (i, Box::new(|h| h) as Box<dyn Fn(Command) -> Command>)),
        Command::Pseq(m, a, rest) => {
            let i = single_instr(a)?;
            let m = *m;
            Some((i, Box::new(move |h| Command::seq(m, h, (**rest).clone()))))
        }
        _ => None,
    }
}

/// Optional compiler transformations, as silent rewrites of a node.
fn transform_steps(cfg: &ModelConfig, c: &Command) -> Vec<Step> {
    let mut out = Vec::new();
    match c {
        Command::Pseq(Model::C11, c1, c2) if cfg.base == Model::C11 => {
            let (Some(first), Some((second, rebuild))) = (single_instr(c1), head(c2)) else { return out };
            if let (
                Instr::Assign { target: t1, rhs: Expr::Var(x1) },
                Instr::Assign { target: t2, rhs: Expr::Var(x2) },
            ) = (first, second)
            {
                let reuse = Expr::Var(t1.clone());
                if cfg.load_coalesce
                    && x1.var.is_shared()
                    && x1.var == x2.var
                    && !t1.var.is_shared()
                    && t1.var != x1.var
                    && ocmore_allows(cfg.ocmore, &Expr::Var(x2.clone()), &reuse)
                {
                    let c2b = rebuild(Command::instr(Instr::assign(t2.clone(), reuse)));
                    out.push(silent(Command::Pseq(Model::C11, c1.clone(), Arc::new(c2b))));
                }
            }
            if let (Instr::Assign { target: t1, rhs: e1 }, Instr::Assign { target: t2, .. }) = (first, second) {
                if cfg.write_coalesce && t1 == t2 && ocmore_allows(cfg.ocmore, e1, &Expr::int(0)) {
                    out.push(silent((**c2).clone()));
                }
            }
        }
        Command::Choice(l, r) if cfg.elim_cond => {
            if let Some(c) = elim_cond(l, r) {
                out.push(silent(c));
            }
        }
        _ => {}
    }
    out
}

/// `(<r != n> ; b := true ; r := n) [] <r == n>` becomes `b := (r != n) ; r := n`.
fn elim_cond(l: &Command, r: &Command) -> Option<Command> {
    let Command::Pseq(m, g, body) = l else { return None };
    let Instr::Guard(Expr::Binary(BinOp::Ne, rv, n)) = single_instr(g)? else { return None };
    let Instr::Guard(Expr::Binary(BinOp::Eq, rv2, n2)) = single_instr(r)? else { return None };
    if rv != rv2 || n != n2 || !n.is_const() {
        return None;
    }
    let Command::Pseq(_, set_b, set_r) = &**body else { return None };
    let Instr::Assign { target: bt, rhs: Expr::Const(Value::Bool(true)) } = single_instr(set_b)? else { return None };
    let Instr::Assign { target: rt, rhs } = single_instr(set_r)? else { return None };
    if Expr::Var(rt.clone()) != **rv || rhs != &**n {
        return None;
    }
    let assign_b = Instr::assign(bt.clone(), Expr::ne((**rv).clone(), (**n).clone()));
    Some(Command::seq(*m, Command::instr(assign_b), (**set_r).clone()))
}

/// Memoising step generator for one configuration.
pub(crate) struct Stepper<'a> {
    pub cfg: &'a ModelConfig,
    pub limits: &'a ExplorationLimits,
    cache: RefCell<HashMap<Command, Rc<Vec<Step>>>>,
}

impl<'a> Stepper<'a> {
    pub fn new(cfg: &'a ModelConfig, limits: &'a ExplorationLimits) -> Self {
        Stepper { cfg, limits, cache: RefCell::new(HashMap::new()) }
    }

    pub fn steps(&self, c: &Command) -> Rc<Vec<Step>> {
        if let Some(s) = self.cache.borrow().get(c) {
            return s.clone();
        }
        let s = Rc::new(self.compute(c));
        self.cache.borrow_mut().insert(c.clone(), s.clone());
        s
    }

    fn compute(&self, c: &Command) -> Vec<Step> {
        let cfg = self.cfg;
        let mut out = Vec::new();
        match c {
            Command::Nil => {}
            Command::Stmt(s) => out = stmt_steps(cfg, s),
            Command::Pseq(m, c1, c2) => {
                if c1.is_nil() {
                    out.push(silent((**c2).clone()));
                    return out;
                }
                for st in self.steps(c1).iter() {
                    let next = Command::seq(*m, (*st.next).clone(), (**c2).clone());
                    out.push(Step { label: st.label.clone(), origin: st.origin.clone(), next: Arc::new(next) });
                }
                let node_cfg = cfg.for_node(*m);
                for st in self.steps(c2).iter() {
                    for b2 in reorder_triple(&node_cfg, c1, &st.label) {
                        let next = Command::seq(*m, (**c1).clone(), (*st.next).clone());
                        out.push(Step { label: b2, origin: st.origin.clone(), next: Arc::new(next) });
                    }
                }
                out.extend(transform_steps(cfg, c));
            }
            Command::Choice(a, b) => {
                out.push(silent((**a).clone()));
                out.push(silent((**b).clone()));
                out.extend(transform_steps(cfg, c));
            }
            Command::Iterate(m, body) => {
                for n in 0..=self.limits.max_unroll {
                    out.push(silent(Command::unroll(*m, body, n)));
                }
            }
        }
        out
    }
}

/// The variable a placeholder load reads, found in the original label.
fn loaded_var(origin: &Action) -> Option<VarId> {
    let hole = VarId::hole();
    origin.instrs().iter().find_map(|i| match i {
        Instr::Guard(Expr::Binary(BinOp::Eq, a, b)) if b.mentions(&hole) => match &**a {
            Expr::Var(r) => Some(r.var.clone()),
            _ => None,
        },
        _ => None,
    })
}

/// Instantiate a step's placeholder with every candidate domain value.
pub(crate) fn instantiate_domain(st: &Step, dom: &Domain) -> Vec<Step> {
    if !st.label.has_hole() && !st.origin.has_hole() {
        return vec![st.clone()];
    }
    let vals = match loaded_var(&st.origin) {
        Some(v) => dom.values_for(&v),
        None => dom.values().to_vec(),
    };
    vals.into_iter()
        .map(|v| Step { label: st.label.fill_hole(v), origin: st.origin.fill_hole(v), next: Arc::new(st.next.fill_hole(v)) })
        .collect()
}

/// Solve the placeholder from the emitted label `<L == ?>` against `state`.
pub(crate) fn instantiate_state(st: &Step, state: &State, dom: &Domain) -> Vec<Step> {
    if !st.label.has_hole() && !st.origin.has_hole() {
        return vec![st.clone()];
    }
    let hole = VarId::hole();
    let solved = st.label.instrs().iter().find_map(|i| match i {
        Instr::Guard(Expr::Binary(BinOp::Eq, l, r)) if matches!(&**r, Expr::Var(h) if h.var.is_hole()) && !l.mentions(&hole) => {
            state.eval(l).ok()
        }
        _ => None,
    });
    match solved {
        Some(v) => vec![Step {
            label: st.label.fill_hole(v),
            origin: st.origin.fill_hole(v),
            next: Arc::new(st.next.fill_hole(v)),
        }],
        None => instantiate_domain(st, dom),
    }
}

/// Public form of the expression step relation, loads instantiated over `dom`.
pub fn step_expr(cfg: &ModelConfig, e: &Expr, dom: &Domain) -> Vec<(Action, Expr)> {
    let mut out = Vec::new();
    let mut raw: Vec<(Instr, Expr)> = expr_steps(cfg, e);
    if cfg.optimize {
        raw.extend(optimize_expr(cfg, e).into_iter().map(|(g, e2)| (Instr::guard(g), e2)));
    }
    for (l, e2) in raw {
        let st = Step { label: Action::single(l.clone()), origin: Action::single(l), next: Arc::new(Command::guard(e2)) };
        for inst in instantiate_domain(&st, dom) {
            let e3 = inst.next.instrs()[0].expr().cloned().expect("guard");
            out.push((inst.label, e3));
        }
    }
    out
}

/// Steps of a statement, loads instantiated over `dom`. `None` residual means
/// the statement finished.
pub fn step_instr(cfg: &ModelConfig, s: &[SpecInstr], dom: &Domain) -> Vec<(Action, Option<Vec<SpecInstr>>)> {
    stmt_steps(cfg, s)
        .iter()
        .flat_map(|st| instantiate_domain(st, dom))
        .map(|st| {
            let rest = match &*st.next {
                Command::Stmt(r) => Some(r.clone()),
                _ => None,
            };
            (st.label, rest)
        })
        .collect()
}

/// One-step successors of a command, loads instantiated over `dom`.
pub fn step_command(cfg: &ModelConfig, c: &Command, limits: &ExplorationLimits, dom: &Domain) -> Vec<Step> {
    let stepper = Stepper::new(cfg, limits);
    let steps = stepper.steps(c);
    steps.iter().flat_map(|st| instantiate_domain(st, dom)).collect()
}
