//! Reduction laws checked on concrete instantiations by trace comparison.

use serde::Serialize;

use crate::ast::{
    datadep, get_and_set, if_then, if_then_else, repeat_until, while_do, Action, Command, Expr, Instr, Model, Syntax,
    VarId, VarRef,
};
use crate::reorder::{forward_action, reorder_triple, ro_action, FoldOrder, ModelConfig};
use crate::semantics::{Domain, ExplorationLimits};

use super::{block_all_check_in, refines_in, trace_equiv_in, AnalysisError, Judgment, Status};

/// Law operands by sort; each law documents which slots it reads.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawArgs {
    pub cmds: Vec<Command>,
    pub acts: Vec<Action>,
    pub exprs: Vec<Expr>,
    pub vars: Vec<VarId>,
}

type Check = fn(&ModelConfig, &LawArgs, &ExplorationLimits) -> Result<Judgment, AnalysisError>;

struct Law {
    id: &'static str,
    check: Check,
}

fn bad(law: &str, reason: impl Into<String>) -> AnalysisError {
    AnalysisError::BadArgs { law: law.into(), reason: reason.into() }
}

fn side(law: &str, reason: impl Into<String>) -> AnalysisError {
    AnalysisError::SideCondition { law: law.into(), reason: reason.into() }
}

fn cmd<'a>(law: &str, a: &'a LawArgs, i: usize) -> Result<&'a Command, AnalysisError> {
    a.cmds.get(i).ok_or_else(|| bad(law, format!("needs command #{}", i + 1)))
}

fn act<'a>(law: &str, a: &'a LawArgs, i: usize) -> Result<&'a Action, AnalysisError> {
    a.acts.get(i).ok_or_else(|| bad(law, format!("needs action #{}", i + 1)))
}

fn expr<'a>(law: &str, a: &'a LawArgs, i: usize) -> Result<&'a Expr, AnalysisError> {
    a.exprs.get(i).ok_or_else(|| bad(law, format!("needs expression #{}", i + 1)))
}

fn var<'a>(law: &str, a: &'a LawArgs, i: usize) -> Result<&'a VarId, AnalysisError> {
    a.vars.get(i).ok_or_else(|| bad(law, format!("needs variable #{}", i + 1)))
}

fn ac(a: &Action) -> Command {
    Command::action(a.clone())
}

/// `lhs ⊑ rhs`
fn refine(cfg: &ModelConfig, lhs: Command, rhs: Command, l: &ExplorationLimits) -> Judgment {
    let dom = Domain::for_commands([&lhs, &rhs]);
    refines_in(cfg, &lhs, &rhs, &dom, l)
}

/// `lhs ≈ rhs`
fn equiv(cfg: &ModelConfig, lhs: Command, rhs: Command, l: &ExplorationLimits) -> Judgment {
    let dom = Domain::for_commands([&lhs, &rhs]);
    trace_equiv_in(cfg, &lhs, &rhs, &dom, l)
}

/// The first judgment that does not hold, else the last.
fn all(js: Vec<Judgment>) -> Judgment {
    let mut last = None;
    for j in js {
        if !j.holds() {
            return j;
        }
        last = Some(j);
    }
    last.expect("at least one judgment")
}

/// `b` with every assignment of `a` forwarded into it, nearest first.
fn fwd(a: &Action, b: &Action) -> Action {
    a.instrs().iter().rev().fold(b.clone(), |acc, i| forward_action(i, &acc))
}

const LAWS: &[Law] = &[
    Law { id: "keep-order", check: |cfg, a, l| {
        let (c1, c2) = (cmd("keep-order", a, 0)?, cmd("keep-order", a, 1)?);
        Ok(refine(cfg, Command::c11(c1.clone(), c2.clone()), Command::sc(c1.clone(), c2.clone()), l))
    }},
    Law { id: "chooseL", check: |cfg, a, l| {
        let (c, d) = (cmd("chooseL", a, 0)?, cmd("chooseL", a, 1)?);
        Ok(refine(cfg, Command::choice(c.clone(), d.clone()), c.clone(), l))
    }},
    Law { id: "fix-interleaving", check: |cfg, a, l| {
        let id = "fix-interleaving";
        let (x, c, d) = (ac(act(id, a, 0)?), cmd(id, a, 0)?.clone(), cmd(id, a, 1)?.clone());
        let lhs = Command::par(Command::sc(x.clone(), c.clone()), d.clone());
        Ok(refine(cfg, lhs, Command::sc(x, Command::par(c, d)), l))
    }},
    Law { id: "dist-choice-pl", check: |cfg, a, l| {
        let id = "dist-choice-pl";
        let (c1, c2, d) = (cmd(id, a, 0)?.clone(), cmd(id, a, 1)?.clone(), cmd(id, a, 2)?.clone());
        let lhs = Command::par(Command::choice(c1.clone(), c2.clone()), d.clone());
        let rhs = Command::choice(Command::par(c1, d.clone()), Command::par(c2, d));
        Ok(equiv(cfg, lhs, rhs, l))
    }},
    Law { id: "pseqc-assoc", check: |cfg, a, l| {
        let id = "pseqc-assoc";
        let (c1, c2, c3) = (cmd(id, a, 0)?.clone(), cmd(id, a, 1)?.clone(), cmd(id, a, 2)?.clone());
        let lhs = Command::c11(Command::c11(c1.clone(), c2.clone()), c3.clone());
        Ok(equiv(cfg, lhs, Command::c11(c1, Command::c11(c2, c3)), l))
    }},
    Law { id: "2actions-keep-order", check: |cfg, a, l| {
        let id = "2actions-keep-order";
        let (x, y) = (act(id, a, 0)?, act(id, a, 1)?);
        if ro_action(cfg, x, y) {
            return Err(side(id, format!("`{x}` and `{y}` may reorder")));
        }
        Ok(equiv(cfg, Command::c11(ac(x), ac(y)), Command::sc(ac(x), ac(y)), l))
    }},
    Law { id: "2actions-reduce", check: |cfg, a, l| {
        let id = "2actions-reduce";
        let (x, y) = (act(id, a, 0)?, act(id, a, 1)?);
        if !ro_action(cfg, x, y) {
            return Err(side(id, format!("`{x}` and `{y}` may not reorder")));
        }
        Ok(equiv(cfg, Command::c11(ac(x), ac(y)), Command::par(ac(x), ac(y)), l))
    }},
    Law { id: "reorder-action", check: |cfg, a, l| {
        let id = "reorder-action";
        let (x, y, c) = (act(id, a, 0)?, act(id, a, 1)?, cmd(id, a, 0)?.clone());
        if !ro_action(cfg, x, y) {
            return Err(side(id, format!("`{x}` and `{y}` may not reorder")));
        }
        let lhs = Command::c11(ac(x), Command::sc(ac(y), c.clone()));
        Ok(refine(cfg, lhs, Command::sc(ac(y), Command::c11(ac(x), c)), l))
    }},
    Law { id: "reduce-scfence", check: |cfg, a, l| {
        let id = "reduce-scfence";
        let (c1, c2) = (cmd(id, a, 0)?.clone(), cmd(id, a, 1)?.clone());
        let f = Command::instr(Instr::sc_fence());
        let lhs = Command::c11(c1.clone(), Command::c11(f.clone(), c2.clone()));
        Ok(equiv(cfg, lhs, Command::sc(c1, Command::sc(f, c2)), l))
    }},
    Law { id: "reduce-if-sc", check: |cfg, a, l| {
        let id = "reduce-if-sc";
        let (b, c) = (expr(id, a, 0)?, cmd(id, a, 0)?);
        let sv = b.var_sets().sv;
        for i in c.instrs() {
            if i.var_sets().rsv.is_disjoint(&sv) {
                return Err(side(id, format!("`{i}` reads no shared variable of the condition")));
            }
        }
        let lhs = if_then(Model::C11, b.clone(), c.clone());
        Ok(equiv(cfg, lhs, if_then(Model::Sc, b.clone(), c.clone()), l))
    }},
    Law { id: "reduce-if-C-pl", check: |cfg, a, l| {
        let id = "reduce-if-C-pl";
        let b = expr(id, a, 0)?;
        let (x, e, y, f) = (var(id, a, 0)?, expr(id, a, 1)?, var(id, a, 1)?, expr(id, a, 2)?);
        let mut others = e.vars();
        others.extend(f.vars());
        others.insert(x.clone());
        others.insert(y.clone());
        if !b.vars().is_disjoint(&others) {
            return Err(side(id, "the condition shares variables with the branches"));
        }
        let sx = Command::instr(Instr::assign(VarRef::plain(x.clone()), e.clone()));
        let sy = Command::instr(Instr::assign(VarRef::plain(y.clone()), f.clone()));
        let lhs = if_then_else(Model::C11, b.clone(), sx.clone(), sy.clone());
        let rhs = Command::choice(
            Command::par(Command::guard(b.clone()), sx),
            Command::par(Command::guard(Expr::not(b.clone())), sy),
        );
        Ok(equiv(cfg, lhs, rhs, l))
    }},
    Law { id: "iterate-one-action", check: |cfg, a, l| {
        let x = ac(act("iterate-one-action", a, 0)?);
        Ok(equiv(cfg, Command::iterate(Model::C11, x.clone()), Command::iterate(Model::Sc, x), l))
    }},
    Law { id: "reduce-empty-while", check: |cfg, a, l| {
        let id = "reduce-empty-while";
        let b = expr(id, a, 0)?;
        if b.var_sets().sv.is_empty() {
            return Err(side(id, "the loop condition mentions no shared variable"));
        }
        let lhs = while_do(Model::C11, b.clone(), Command::Nil);
        Ok(equiv(cfg, lhs, while_do(Model::Sc, b.clone(), Command::Nil), l))
    }},
    Law { id: "blockall-cd", check: |cfg, a, l| {
        let id = "blockall-cd";
        let (c, d) = (cmd(id, a, 0)?.clone(), cmd(id, a, 1)?.clone());
        let dom = Domain::for_commands([&c, &d]);
        let ba = block_all_check_in(cfg, &c, &d, &dom, l);
        if !ba.holds() {
            return Err(side(id, ba.detail));
        }
        Ok(equiv(cfg, Command::c11(c.clone(), d.clone()), Command::sc(c, d), l))
    }},
    Law { id: "blockall-iterate", check: |cfg, a, l| {
        let id = "blockall-iterate";
        let c = cmd(id, a, 0)?.clone();
        let dom = Domain::for_commands([&c]);
        let ba = block_all_check_in(cfg, &c, &c, &dom, l);
        if !ba.holds() {
            return Err(side(id, ba.detail));
        }
        Ok(equiv(cfg, Command::iterate(Model::C11, c.clone()), Command::iterate(Model::Sc, c), l))
    }},
    Law { id: "repeat-sc", check: |cfg, a, l| {
        let id = "repeat-sc";
        let (x, b) = (act(id, a, 0)?, expr(id, a, 0)?);
        if !datadep(x, &Instr::guard(b.clone())) {
            return Err(side(id, format!("no data dependence from `{x}` to `<{b}>`")));
        }
        let lhs = repeat_until(Model::C11, ac(x), b.clone());
        Ok(equiv(cfg, lhs, repeat_until(Model::Sc, ac(x), b.clone()), l))
    }},
    Law { id: "2actions-swap-order-fwd", check: |cfg, a, l| {
        let id = "2actions-swap-order-fwd";
        let (x, y) = (act(id, a, 0)?, act(id, a, 1)?);
        let bs = reorder_triple(cfg, &ac(x), y);
        if bs.is_empty() {
            return Err(side(id, format!("`{y}` cannot overtake `{x}`")));
        }
        let lhs = Command::c11(ac(x), ac(y));
        Ok(all(bs.iter().map(|b2| refine(cfg, lhs.clone(), Command::sc(ac(b2), ac(x)), l)).collect()))
    }},
    Law { id: "2actions-reduce-fwd", check: |cfg, a, l| {
        let id = "2actions-reduce-fwd";
        let (x, y) = (act(id, a, 0)?, act(id, a, 1)?);
        let bs = reorder_triple(cfg, &ac(x), y);
        let [b2] = bs.iter().collect::<Vec<_>>()[..] else {
            return Err(side(id, format!("`{y}` does not overtake `{x}` in exactly one form")));
        };
        let rhs = Command::choice(Command::sc(ac(x), ac(y)), Command::sc(ac(b2), ac(x)));
        Ok(equiv(cfg, Command::c11(ac(x), ac(y)), rhs, l))
    }},
    Law { id: "bcb", check: |cfg, a, l| {
        let (c, y) = (cmd("bcb", a, 0)?.clone(), act("bcb", a, 0)?);
        let bs = reorder_triple(cfg, &c, y);
        if bs.is_empty() {
            return Err(side("bcb", format!("`{y}` cannot overtake `{c}`")));
        }
        let lhs = Command::c11(c.clone(), ac(y));
        Ok(all(bs.iter().map(|b2| refine(cfg, lhs.clone(), Command::sc(ac(b2), c.clone()), l)).collect()))
    }},
    Law { id: "2actions-reduce-nofwd", check: |cfg, a, l| {
        let id = "2actions-reduce-nofwd";
        let (x, y) = (act(id, a, 0)?, act(id, a, 1)?);
        let y2 = fwd(x, y);
        if ro_action(cfg, x, &y2) {
            return Err(side(id, format!("`{x}` and `{y2}` may reorder")));
        }
        Ok(equiv(cfg, Command::c11(ac(x), ac(y)), Command::sc(ac(x), ac(y)), l))
    }},
];

pub fn law_ids() -> Vec<&'static str> {
    LAWS.iter().map(|l| l.id).collect()
}

/// Check one law instantiation. Side-condition violations are errors,
/// distinct from the law failing.
pub fn law_check(id: &str, args: &LawArgs, cfg: &ModelConfig, limits: &ExplorationLimits) -> Result<Judgment, AnalysisError> {
    let law = LAWS.iter().find(|l| l.id == id).ok_or_else(|| AnalysisError::UnknownLaw(id.to_string()))?;
    (law.check)(cfg, args, limits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Holds,
    Fails,
    /// The side condition is not met under this configuration.
    NotApplicable,
}

#[derive(Clone, Debug)]
pub struct LawFixture {
    pub law: &'static str,
    pub name: &'static str,
    pub args: LawArgs,
    pub cfg: ModelConfig,
    pub expect: Expect,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub fixture: String,
    pub fold_order: FoldOrder,
    pub forwarding: bool,
    pub expect: Expect,
    pub status: Option<Status>,
    pub error: Option<String>,
    pub detail: String,
    pub passed: bool,
}

fn sh(n: &str) -> Expr {
    Expr::shared(n)
}

fn lc(n: &str) -> Expr {
    Expr::local(n)
}

fn int(i: i64) -> Expr {
    Expr::int(i)
}

fn st(x: &str, e: Expr) -> Action {
    Action::single(Instr::assign_shared(x, e))
}

fn ld(r: &str, e: Expr) -> Action {
    Action::single(Instr::assign_local(r, e))
}

fn cm(a: Action) -> Command {
    Command::action(a)
}

fn acq(x: &str) -> Expr {
    Expr::shared_with(x, crate::ast::OcSet::single(crate::ast::Oc::Acquire))
}

fn args(cmds: Vec<Command>, acts: Vec<Action>, exprs: Vec<Expr>, vars: Vec<VarId>) -> LawArgs {
    LawArgs { cmds, acts, exprs, vars }
}

fn nofwd() -> ModelConfig {
    ModelConfig { forwarding: false, ..ModelConfig::c11() }
}

fn earliest(mut cfg: ModelConfig) -> ModelConfig {
    cfg.fold_order = FoldOrder::EarliestFirst;
    cfg
}

fn fx(law: &'static str, name: &'static str, args: LawArgs, cfg: ModelConfig, expect: Expect) -> LawFixture {
    LawFixture { law, name, args, cfg, expect }
}

/// The shipped instantiations. Laws stated without forwarding run with
/// forwarding off; the forwarding laws run with it on.
pub fn law_fixtures() -> Vec<LawFixture> {
    use Expect::*;
    let x1 = st("x", int(1));
    let y1 = st("y", int(1));
    let z1 = st("z", int(1));
    let rx = ld("r", sh("x"));
    let taken = VarId::local("taken");
    let lock_gas = get_and_set(&taken, &VarId::shared("l"), Expr::bool(true), true);
    let Command::Stmt(gas) = &lock_gas else { unreachable!() };
    let gas = Action::new(gas.iter().map(|si| si.instr.clone()).collect()).expect("non-empty");
    let not_taken = Expr::not(Expr::local("taken"));
    let if42 = if_then(Model::C11, Expr::eq(lc("r"), int(42)), cm(st("y", lc("r"))));
    let (n, f) = (nofwd(), ModelConfig::c11());
    let mut out = vec![
        fx("keep-order", "stores", args(vec![cm(x1.clone()), cm(y1.clone())], vec![], vec![], vec![]), n.clone(), Holds),
        fx("keep-order", "load-store", args(vec![cm(rx.clone()), Command::c11(cm(y1.clone()), cm(z1.clone()))], vec![], vec![], vec![]), n.clone(), Holds),
        fx("chooseL", "stores", args(vec![cm(x1.clone()), Command::c11(cm(y1.clone()), cm(z1.clone()))], vec![], vec![], vec![]), n.clone(), Holds),
        fx("fix-interleaving", "mp-shape", args(vec![cm(ld("r", sh("y"))), cm(y1.clone())], vec![x1.clone()], vec![], vec![]), n.clone(), Holds),
        fx("dist-choice-pl", "store-choice", args(vec![cm(x1.clone()), cm(st("x", int(2))), cm(rx.clone())], vec![], vec![], vec![]), n.clone(), Holds),
        fx("pseqc-assoc", "store-loads", args(vec![cm(x1.clone()), cm(ld("r1", sh("x"))), cm(ld("r2", sh("x")))], vec![], vec![], vec![]), n.clone(), Holds),
        fx("pseqc-assoc", "independent", args(vec![cm(x1.clone()), cm(y1.clone()), cm(z1.clone())], vec![], vec![], vec![]), n.clone(), Holds),
        // associativity is lost once forwarding is on
        fx("pseqc-assoc", "store-loads-fwd", args(vec![cm(x1.clone()), cm(ld("r1", sh("x"))), cm(ld("r2", sh("x")))], vec![], vec![], vec![]), earliest(f.clone()), Fails),
        fx("2actions-keep-order", "store-load-same", args(vec![], vec![x1.clone(), rx.clone()], vec![], vec![]), n.clone(), Holds),
        fx("2actions-keep-order", "acquire", args(vec![], vec![ld("r", acq("x")), y1.clone()], vec![], vec![]), n.clone(), Holds),
        fx("2actions-reduce", "stores", args(vec![], vec![x1.clone(), y1.clone()], vec![], vec![]), n.clone(), Holds),
        fx("2actions-reduce", "load-store", args(vec![], vec![rx.clone(), y1.clone()], vec![], vec![]), n.clone(), Holds),
        fx("reorder-action", "stores", args(vec![cm(z1.clone())], vec![x1.clone(), y1.clone()], vec![], vec![]), n.clone(), Holds),
        fx("reduce-scfence", "stores", args(vec![cm(x1.clone()), cm(y1.clone())], vec![], vec![], vec![]), n.clone(), Holds),
        fx("reduce-scfence", "load-store", args(vec![cm(rx.clone()), Command::c11(cm(y1.clone()), cm(z1.clone()))], vec![], vec![], vec![]), n.clone(), Holds),
        fx("reduce-if-sc", "y-nonneg", args(vec![cm(st("x", sh("y")))], vec![], vec![Expr::bin(crate::ast::BinOp::Ge, sh("y"), int(0))], vec![]), n.clone(), Holds),
        fx("reduce-if-C-pl", "local-cond", args(vec![], vec![], vec![Expr::eq(lc("b"), int(1)), int(1), int(2)], vec![VarId::shared("x"), VarId::shared("y")]), n.clone(), Holds),
        fx("iterate-one-action", "store", args(vec![], vec![x1.clone()], vec![], vec![]), n.clone(), Holds),
        fx("iterate-one-action", "load", args(vec![], vec![rx.clone()], vec![], vec![]), n.clone(), Holds),
        fx("reduce-empty-while", "spin", args(vec![], vec![], vec![Expr::eq(sh("x"), int(0))], vec![]), n.clone(), Holds),
        fx("reduce-empty-while", "spin-acq", args(vec![], vec![], vec![Expr::ne(acq("flag"), int(1))], vec![]), n.clone(), Holds),
        fx("blockall-cd", "fence", args(vec![Command::instr(Instr::sc_fence()), Command::c11(cm(x1.clone()), cm(y1.clone()))], vec![], vec![], vec![]), n.clone(), Holds),
        fx("blockall-cd", "load-if", args(vec![cm(rx.clone()), if42.clone()], vec![], vec![], vec![]), n.clone(), Holds),
        fx("blockall-iterate", "lock-body", args(vec![Command::sc(Command::guard(not_taken.clone()), cm(gas.clone()))], vec![], vec![], vec![]), n.clone(), Holds),
        fx("repeat-sc", "lock", args(vec![], vec![gas.clone()], vec![not_taken.clone()], vec![]), n.clone(), Holds),
        fx("repeat-sc", "lock-fwd", args(vec![], vec![gas.clone()], vec![not_taken.clone()], vec![]), f.clone(), Holds),
        fx("repeat-sc", "load-until", args(vec![], vec![rx.clone()], vec![Expr::eq(lc("r"), int(1))], vec![]), n.clone(), Holds),
        fx("2actions-swap-order-fwd", "store-load", args(vec![], vec![x1.clone(), rx.clone()], vec![], vec![]), f.clone(), Holds),
        fx("2actions-swap-order-fwd", "stores", args(vec![], vec![x1.clone(), y1.clone()], vec![], vec![]), f.clone(), Holds),
        fx("2actions-reduce-fwd", "store-load", args(vec![], vec![x1.clone(), rx.clone()], vec![], vec![]), f.clone(), Holds),
        fx("2actions-reduce-fwd", "stores", args(vec![], vec![x1.clone(), y1.clone()], vec![], vec![]), f.clone(), Holds),
        fx("2actions-reduce-nofwd", "acquire", args(vec![], vec![ld("r", acq("x")), y1.clone()], vec![], vec![]), f.clone(), Holds),
        fx("2actions-reduce-nofwd", "same-store", args(vec![], vec![x1.clone(), st("x", int(2))], vec![], vec![]), f.clone(), Holds),
    ];
    // bcb under both fold orders
    let bcb = [
        ("store-then-load", Command::c11(cm(x1.clone()), cm(z1.clone())), rx.clone(), Holds, Holds),
        ("coherence", Command::c11(cm(rx.clone()), cm(x1.clone())), st("y", sh("x")), Holds, NotApplicable),
        ("store-load-load", Command::c11(cm(x1.clone()), cm(ld("r1", sh("x")))), st("y", sh("x")), NotApplicable, Holds),
    ];
    for (name, c, b, near, early) in bcb {
        let a = args(vec![c], vec![b], vec![], vec![]);
        out.push(fx("bcb", name, a.clone(), f.clone(), near));
        out.push(fx("bcb", name, a, earliest(f.clone()), early));
    }
    out
}

fn run_fixture(fx: &LawFixture, limits: &ExplorationLimits) -> LawOutcome {
    let r = law_check(fx.law, &fx.args, &fx.cfg, limits);
    let (status, error, detail) = match &r {
        Ok(j) => (Some(j.status), None, j.detail.clone()),
        Err(e) => (None, Some(e.to_string()), String::new()),
    };
    let passed = match (fx.expect, &r) {
        (Expect::Holds, Ok(j)) => j.status == Status::Holds,
        (Expect::Fails, Ok(j)) => j.status == Status::Fails,
        (Expect::NotApplicable, Err(AnalysisError::SideCondition { .. })) => true,
        _ => false,
    };
    LawOutcome {
        law: fx.law.to_string(),
        fixture: fx.name.to_string(),
        fold_order: fx.cfg.fold_order,
        forwarding: fx.cfg.forwarding,
        expect: fx.expect,
        status,
        error,
        detail,
        passed,
    }
}

/// Run the fixture suite, optionally restricted to one law.
pub fn run_law_suite(only: Option<&str>, limits: &ExplorationLimits) -> Result<Vec<LawOutcome>, AnalysisError> {
    if let Some(id) = only {
        if !LAWS.iter().any(|l| l.id == id) {
            return Err(AnalysisError::UnknownLaw(id.to_string()));
        }
    }
    Ok(law_fixtures().iter().filter(|f| only.is_none_or(|id| f.law == id)).map(|f| run_fixture(f, limits)).collect())
}
