//! Derived constructs and their encodings into core commands.

use super::command::{Command, Model};
use super::expr::{Expr, Oc, OcSet, VarId, VarRef};
use super::instr::{Action, Instr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sugar {
    If { model: Model, cond: Expr, then: Command, els: Option<Command> },
    While { model: Model, cond: Expr, body: Command },
    Repeat { model: Model, body: Command, until: Expr },
    Cas { x: VarId, expected: Expr, new: Expr, acq_rel: bool },
    CasResult { result: VarId, x: VarId, expected: Expr, new: Expr, acq_rel: bool },
    Faa { result: VarId, x: VarId, add: Expr, acq_rel: bool },
    GetAndSet { result: VarId, x: VarId, value: Expr, acq_rel: bool },
    Core(Command),
}

pub fn desugar(s: &Sugar) -> Command {
    match s {
        Sugar::If { model, cond, then, els } => {
            if_then_else(*model, cond.clone(), then.clone(), els.clone().unwrap_or(Command::Nil))
        }
        Sugar::While { model, cond, body } => while_do(*model, cond.clone(), body.clone()),
        Sugar::Repeat { model, body, until } => repeat_until(*model, body.clone(), until.clone()),
        Sugar::Cas { x, expected, new, acq_rel } => cas(x, expected.clone(), new.clone(), *acq_rel),
        Sugar::CasResult { result, x, expected, new, acq_rel } => {
            cas_result(result, x, expected.clone(), new.clone(), *acq_rel)
        }
        Sugar::Faa { result, x, add, acq_rel } => faa(result, x, add.clone(), *acq_rel),
        Sugar::GetAndSet { result, x, value, acq_rel } => get_and_set(result, x, value.clone(), *acq_rel),
        Sugar::Core(c) => c.clone(),
    }
}

/// `(<b> ;m c1) [] (<!b> ;m c2)`
pub fn if_then_else(m: Model, b: Expr, c1: Command, c2: Command) -> Command {
    Command::choice(
        Command::seq(m, Command::guard(b.clone()), c1),
        Command::seq(m, Command::guard(Expr::not(b)), c2),
    )
}

pub fn if_then(m: Model, b: Expr, c: Command) -> Command {
    if_then_else(m, b, c, Command::Nil)
}

/// `(<b> ;m c)*m ;m <!b>`
pub fn while_do(m: Model, b: Expr, c: Command) -> Command {
    Command::seq(
        m,
        Command::iterate(m, Command::seq(m, Command::guard(b.clone()), c)),
        Command::guard(Expr::not(b)),
    )
}

/// `c ;m (<!b> ;m c)*m ;m <b>`
pub fn repeat_until(m: Model, c: Command, b: Expr) -> Command {
    let again = Command::iterate(m, Command::seq(m, Command::guard(Expr::not(b.clone())), c.clone()));
    Command::seq(m, c, Command::seq(m, again, Command::guard(b)))
}

fn rmw_refs(x: &VarId, acq_rel: bool) -> (VarRef, VarRef) {
    if acq_rel {
        (VarRef::new(x.clone(), OcSet::single(Oc::Acquire)), VarRef::new(x.clone(), OcSet::single(Oc::Release)))
    } else {
        (VarRef::plain(x.clone()), VarRef::plain(x.clone()))
    }
}

fn cas_legs(x: &VarId, e: Expr, e2: Expr, acq_rel: bool) -> (Command, Command) {
    let (rd, wr) = rmw_refs(x, acq_rel);
    let ok = Action::new(vec![
        Instr::guard(Expr::eq(Expr::Var(rd.clone()), e.clone())),
        Instr::assign(wr, e2),
    ])
    .expect("non-empty");
    let fail = Instr::guard(Expr::ne(Expr::Var(rd), e));
    (Command::action(ok), Command::instr(fail))
}

/// `[<x = e>; x := e'] [] <x != e>`
pub fn cas(x: &VarId, e: Expr, e2: Expr, acq_rel: bool) -> Command {
    let (ok, fail) = cas_legs(x, e, e2, acq_rel);
    Command::choice(ok, fail)
}

/// `([<x = e>; x := e'] ;sc r := true) [] (<x != e> ;sc r := false)`
pub fn cas_result(r: &VarId, x: &VarId, e: Expr, e2: Expr, acq_rel: bool) -> Command {
    let (ok, fail) = cas_legs(x, e, e2, acq_rel);
    let set = |b: bool| Command::instr(Instr::assign(VarRef::plain(r.clone()), Expr::bool(b)));
    Command::choice(Command::sc(ok, set(true)), Command::sc(fail, set(false)))
}

/// `[r := x; x := x + e]`
pub fn faa(r: &VarId, x: &VarId, e: Expr, acq_rel: bool) -> Command {
    let (rd, wr) = rmw_refs(x, acq_rel);
    Command::action(
        Action::new(vec![
            Instr::assign(VarRef::plain(r.clone()), Expr::Var(rd.clone())),
            Instr::assign(wr, Expr::add(Expr::Var(rd), e)),
        ])
        .expect("non-empty"),
    )
}

/// `[r := x.acq; x.rel := v]` (relaxed on both sides without `acq_rel`).
pub fn get_and_set(r: &VarId, x: &VarId, v: Expr, acq_rel: bool) -> Command {
    let (rd, wr) = rmw_refs(x, acq_rel);
    Command::action(
        Action::new(vec![Instr::assign(VarRef::plain(r.clone()), Expr::Var(rd)), Instr::assign(wr, v)])
            .expect("non-empty"),
    )
}

/// Test-and-set lock: `repeat (taken := l.getAndSet(true)) until !taken`.
pub fn lock(l: &VarId, taken: &VarId) -> Command {
    repeat_until(
        Model::C11,
        get_and_set(taken, l, Expr::bool(true), true),
        Expr::not(Expr::Var(VarRef::plain(taken.clone()))),
    )
}

/// `l.rel := false`
pub fn unlock(l: &VarId) -> Command {
    Command::instr(Instr::assign(VarRef::new(l.clone(), OcSet::single(Oc::Release)), Expr::bool(false)))
}
