use std::collections::BTreeSet;
use std::sync::Arc;

use memmod_core::ast::*;
use memmod_core::reorder::{EvalOrder, ModelConfig};
use memmod_core::semantics::*;

fn int(i: i64) -> Expr {
    Expr::int(i)
}

fn st(x: &str, e: Expr) -> Instr {
    Instr::assign_shared(x, e)
}

fn ld(r: &str, e: Expr) -> Instr {
    Instr::assign_local(r, e)
}

fn act(i: Instr) -> Action {
    Action::single(i)
}

fn c(i: Instr) -> Command {
    Command::instr(i)
}

fn acq(x: &str) -> Expr {
    Expr::shared_with(x, OcSet::single(Oc::Acquire))
}

fn dom() -> Domain {
    Domain::new([0, 1, 2, 3].map(Value::Int))
}

fn incr() -> ModelConfig {
    ModelConfig { incremental: true, ..ModelConfig::c11() }
}

fn traces(cfg: &ModelConfig, cmd: &Command) -> BTreeSet<Vec<Action>> {
    let ts = enumerate_traces(cfg, cmd, &Domain::for_commands([cmd]), &ExplorationLimits::default());
    assert!(!ts.bounded);
    ts.traces
}

fn guard_eq(e: Expr, v: i64) -> Action {
    act(Instr::guard(Expr::eq(e, int(v))))
}

#[test]
fn expression_steps_load_then_fold() {
    let e = Expr::add(acq("x"), Expr::shared("y"));
    let steps = step_expr(&incr(), &e, &dom());
    assert!(steps.contains(&(guard_eq(acq("x"), 3), Expr::add(int(3), Expr::shared("y")))));
    assert!(steps.contains(&(guard_eq(Expr::shared("y"), 2), Expr::add(acq("x"), int(2)))));
    let e2 = Expr::add(int(3), Expr::shared("y"));
    let steps = step_expr(&incr(), &e2, &dom());
    assert!(steps.contains(&(guard_eq(Expr::shared("y"), 2), Expr::add(int(3), int(2)))));
    let last = step_expr(&incr(), &Expr::add(int(3), int(2)), &dom());
    assert_eq!(last, vec![(Action::tau(), int(5))]);
}

#[test]
fn constants_are_terminal() {
    assert!(step_expr(&incr(), &int(7), &dom()).is_empty());
}

#[test]
fn left_to_right_order() {
    let ltr = ModelConfig { eval_order: EvalOrder::LeftToRight, ..incr() };
    let e = Expr::add(Expr::shared("x"), Expr::shared("y"));
    for (label, _) in step_expr(&ltr, &e, &dom()) {
        assert!(label.var_sets().rv.contains(&VarId::shared("x")), "{label}");
    }
}

#[test]
fn optimised_multiplication_by_zero() {
    let cfg = ModelConfig { optimize: true, ..incr() };
    let steps = step_expr(&cfg, &Expr::mul(Expr::shared("x"), int(0)), &dom());
    assert!(steps.contains(&(Action::tau(), int(0))), "{steps:?}");
}

#[test]
fn release_write_evaluates_incrementally() {
    let z = Instr::assign(VarRef::shared_with("z", OcSet::single(Oc::Release)), Expr::add(acq("x"), Expr::shared("y")));
    let cmd = Command::stmt(vec![SpecInstr::divisible(z)]);
    let ts = enumerate_traces(&incr(), &cmd, &dom(), &ExplorationLimits::default()).traces;
    let want = vec![
        guard_eq(acq("x"), 3),
        guard_eq(Expr::shared("y"), 2),
        act(Instr::assign(VarRef::shared_with("z", OcSet::single(Oc::Release)), int(5))),
    ];
    assert!(ts.contains(&want));
}

#[test]
fn locals_may_remain_in_the_final_step() {
    let i = SpecInstr::divisible(st("z", Expr::add(Expr::shared("x"), Expr::local("r"))));
    let steps = step_instr(&incr(), &[i], &dom());
    let want_rest = vec![SpecInstr::divisible(st("z", Expr::add(int(3), Expr::local("r"))))];
    assert!(steps.contains(&(guard_eq(Expr::shared("x"), 3), Some(want_rest.clone()))));
    let fin = step_instr(&incr(), &want_rest, &dom());
    assert_eq!(fin, vec![(act(st("z", Expr::add(int(3), Expr::local("r")))), None)]);
}

#[test]
fn fences_emit_immediately() {
    let steps = step_instr(&incr(), &[SpecInstr::divisible(Instr::sc_fence())], &dom());
    assert_eq!(steps, vec![(act(Instr::sc_fence()), None)]);
}

#[test]
fn two_stores_two_orders() {
    let cmd = Command::c11(c(st("x", int(1))), c(st("y", int(1))));
    let want = BTreeSet::from([
        vec![act(st("x", int(1))), act(st("y", int(1)))],
        vec![act(st("y", int(1))), act(st("x", int(1)))],
    ]);
    assert_eq!(traces(&ModelConfig::c11(), &cmd), want);
}

#[test]
fn sc_fence_restores_order() {
    let cmd = Command::c11(c(st("x", int(1))), Command::c11(c(Instr::sc_fence()), c(st("y", int(1)))));
    let want = BTreeSet::from([vec![act(st("x", int(1))), act(Instr::sc_fence()), act(st("y", int(1)))]]);
    assert_eq!(traces(&ModelConfig::c11(), &cmd), want);
}

#[test]
fn store_overtakes_a_conditional() {
    let cond = if_then_else(Model::C11, Expr::bin(BinOp::Gt, Expr::local("r"), int(0)), c(st("x", int(1))), c(st("y", int(1))));
    let cmd = Command::c11(cond, c(st("z", int(1))));
    let steps = step_command(&ModelConfig::c11(), &cmd, &ExplorationLimits::default(), &dom());
    assert!(steps.iter().any(|s| s.label == act(st("z", int(1)))));
}

#[test]
fn parallel_without_forwarding() {
    let cmd = Command::par(c(st("x", int(1))), c(ld("r", Expr::shared("x"))));
    let ts = traces(&ModelConfig::c11(), &cmd);
    assert_eq!(ts.len(), 2, "{ts:?}");
}

#[test]
fn nil_and_infeasible() {
    assert_eq!(traces(&ModelConfig::c11(), &Command::Nil), BTreeSet::from([vec![]]));
    let dead = Command::sc(Command::guard(Expr::bool(false)), c(st("x", int(1))));
    assert!(traces(&ModelConfig::c11(), &dead).is_empty());
}

#[test]
fn silent_visible_infeasible() {
    let d = dom();
    let x = || Expr::shared("x");
    assert_eq!(classify(&guard_eq(int(0), 0), &d), LabelKind::Silent);
    assert_eq!(classify(&act(Instr::guard(Expr::eq(x(), x()))), &d), LabelKind::Visible);
    assert_eq!(classify(&act(Instr::guard(Expr::ne(x(), x()))), &d), LabelKind::Infeasible);
    let r2 = || Expr::local("r2");
    assert_eq!(classify(&act(Instr::guard(Expr::eq(r2(), r2()))), &d), LabelKind::Silent);
}

#[test]
fn applying_actions() {
    let x = VarId::shared("x");
    let s0 = State::from_pairs([(x.clone(), Value::Int(0))]);
    let ok = Action::new(vec![Instr::guard(Expr::eq(Expr::shared("x"), int(0))), st("x", int(1))]).unwrap();
    assert_eq!(apply_action(&s0, &ok), Some(State::from_pairs([(x.clone(), Value::Int(1))])));
    assert_eq!(apply_action(&s0, &guard_eq(Expr::shared("x"), 1)), None);
    assert_eq!(apply_action(&s0, &act(Instr::sc_fence())), Some(s0.clone()));
}

#[test]
fn iterate_unrolls_to_the_bound() {
    let body = c(st("x", int(1)));
    let cmd = Command::iterate(Model::Sc, body);
    let ts = enumerate_traces(&ModelConfig::c11(), &cmd, &dom(), &ExplorationLimits::default().with_unroll(2));
    assert!(ts.unrolled);
    let lens: BTreeSet<usize> = ts.traces.iter().map(Vec::len).collect();
    assert_eq!(lens, BTreeSet::from([0, 1, 2]));
}

#[test]
fn while_false_only_skips() {
    let w = while_do(Model::Sc, Expr::bool(false), c(st("x", int(1))));
    assert_eq!(traces(&ModelConfig::c11(), &w), BTreeSet::from([vec![]]));
}

fn program(threads: Vec<Command>, shared: &[&str], locals: &[&[&str]]) -> Program {
    Program {
        shared: shared.iter().map(|n| Decl { var: VarId::shared(n), ty: ValueType::Int, init: Some(Value::Int(0)) }).collect(),
        threads: threads
            .into_iter()
            .zip(locals)
            .enumerate()
            .map(|(k, (body, ls))| Thread {
                name: format!("t{k}"),
                locals: ls.iter().map(|n| Decl { var: VarId::local(n), ty: ValueType::Int, init: Some(Value::Int(0)) }).collect(),
                body: Arc::new(body),
            })
            .collect(),
        domain: None,
    }
}

fn mp(flag_w: VarRef, flag_r: Expr) -> Program {
    program(
        vec![
            Command::c11(c(st("x", int(1))), c(Instr::assign(flag_w, int(1)))),
            Command::c11(c(ld("f", flag_r)), c(ld("r", Expr::shared("x")))),
        ],
        &["x", "flag"],
        &[&[], &["f", "r"]],
    )
}

fn weak(s: &State) -> bool {
    s.get_named("f") == Some(Value::Int(1)) && s.get_named("r") == Some(Value::Int(0))
}

#[test]
fn relaxed_message_passing_is_weak() {
    let p = mp(VarRef::shared("flag"), Expr::shared("flag"));
    let ex = explore_finals(&p, &ModelConfig::c11(), &ExplorationLimits::default());
    assert!(ex.is_conclusive());
    assert!(ex.finals.keys().any(weak));
}

#[test]
fn release_acquire_message_passing() {
    let p = mp(VarRef::shared_with("flag", OcSet::single(Oc::Release)), acq("flag"));
    let ex = explore_finals(&p, &ModelConfig::c11(), &ExplorationLimits::default());
    assert!(!ex.finals.keys().any(weak));
}

#[test]
fn single_store_has_one_final() {
    let p = program(vec![c(st("x", int(1)))], &["x"], &[&[]]);
    let ex = explore_finals(&p, &ModelConfig::c11(), &ExplorationLimits::default());
    let finals: Vec<&State> = ex.finals.keys().collect();
    assert_eq!(finals, vec![&State::from_pairs([(VarId::shared("x"), Value::Int(1))])]);
}

#[test]
fn witnesses_are_replayable() {
    let p = mp(VarRef::shared("flag"), Expr::shared("flag"));
    let ex = explore_finals(&p, &ModelConfig::c11(), &ExplorationLimits::default());
    let init = initial_states(&p, &Domain::for_program(&p)).remove(0);
    for (fin, w) in &ex.finals {
        let mut s = init.clone();
        for step in w {
            s = apply_action(&s, &step.label).expect("witness step is feasible");
        }
        assert_eq!(&s, fin);
    }
}

#[test]
fn config_cap_truncates() {
    let p = mp(VarRef::shared("flag"), Expr::shared("flag"));
    let tiny = ExplorationLimits { max_configs: 3, ..ExplorationLimits::default() };
    assert!(explore_finals(&p, &ModelConfig::c11(), &tiny).truncated);
}
