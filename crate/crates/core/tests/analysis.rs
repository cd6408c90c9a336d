use memmod_core::analysis::*;
use memmod_core::ast::*;
use memmod_core::litmus::parse_litmus;
use memmod_core::reorder::ModelConfig;
use memmod_core::semantics::{ExplorationLimits, State};

fn int(i: i64) -> Expr {
    Expr::int(i)
}

fn st(x: &str, e: Expr) -> Command {
    Command::instr(Instr::assign_shared(x, e))
}

fn ld(r: &str, e: Expr) -> Command {
    Command::instr(Instr::assign_local(r, e))
}

fn lim() -> ExplorationLimits {
    ExplorationLimits::default()
}

fn corpus(name: &str) -> Program {
    let path = format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_litmus(&std::fs::read_to_string(path).unwrap()).unwrap().program
}

fn cond(p: &Program, src: &str) -> Expr {
    memmod_core::litmus::parse_condition(p, src).unwrap()
}

#[test]
fn naive_mp_fails_with_the_expected_interleaving() {
    let p = corpus("mp_relaxed.lit");
    let post = cond(&p, "f == 1 -> r == 1");
    let j = hoare_check(&ModelConfig::c11(), &p, &Expr::bool(true), &post, HoareMode::Always, &lim()).unwrap();
    assert_eq!(j.status, Status::Fails);
    let ce = j.counterexample.expect("counterexample");
    let labels: Vec<String> = ce.steps.iter().map(|s| s.label.to_string()).collect();
    assert_eq!(labels, ["flag := 1", "f := flag", "r := x", "x := 1"]);
}

#[test]
fn oota_d_always_zero() {
    let p = corpus("oota_d.lit");
    let post = cond(&p, "x == 0 && y == 0");
    let j = hoare_check(&ModelConfig::c11(), &p, &Expr::bool(true), &post, HoareMode::Always, &lim()).unwrap();
    assert_eq!(j.status, Status::Holds);
}

#[test]
fn oota_reaches_42() {
    let p = corpus("oota.lit");
    let post = cond(&p, "x == 42 && y == 42");
    let j = hoare_check(&ModelConfig::c11(), &p, &Expr::bool(true), &post, HoareMode::Reach, &lim()).unwrap();
    assert_eq!(j.status, Status::Holds);
    assert!(j.witness.is_some());
}

#[test]
fn precondition_filters_initial_states() {
    let p = parse_litmus("litmus \"t\"\nshared x : int\nthread t { local r = 0; r = x; }\nvalues 0, 1\nallowed (true)\n").unwrap().program;
    let post = cond(&p, "r == 1");
    let pre = cond(&p, "x == 1");
    let j = hoare_check(&ModelConfig::c11(), &p, &pre, &post, HoareMode::Always, &lim()).unwrap();
    assert_eq!(j.status, Status::Holds);
    let j = hoare_check(&ModelConfig::c11(), &p, &Expr::bool(true), &post, HoareMode::Always, &lim()).unwrap();
    assert_eq!(j.status, Status::Fails);
}

#[test]
fn unbound_variables_are_input_errors() {
    let p = corpus("mp_relaxed.lit");
    let post = Expr::eq(Expr::shared("nope"), int(1));
    let e = hoare_check(&ModelConfig::c11(), &p, &Expr::bool(true), &post, HoareMode::Always, &lim());
    assert!(matches!(e, Err(AnalysisError::UnboundVariable(_))), "{e:?}");
}

#[test]
fn fenced_stores_equal_sc_sequence() {
    let f = || Command::instr(Instr::sc_fence());
    let c = Command::c11(st("x", int(1)), Command::c11(f(), st("y", int(1))));
    let d = Command::sc(st("x", int(1)), Command::sc(f(), st("y", int(1))));
    assert!(trace_equiv(&ModelConfig::c11(), &c, &d, &lim()).holds());
}

#[test]
fn independent_stores_equal_parallel() {
    let c = Command::c11(st("x", int(1)), st("y", int(1)));
    let d = Command::par(st("x", int(1)), st("y", int(1)));
    assert!(trace_equiv(&ModelConfig::c11(), &c, &d, &lim()).holds());
}

#[test]
fn sequential_refines_reordered() {
    let c = Command::c11(st("x", int(1)), st("y", int(1)));
    let d = Command::sc(st("x", int(1)), st("y", int(1)));
    assert!(refines(&ModelConfig::c11(), &c, &d, &lim()).holds());
    let j = refines(&ModelConfig::c11(), &d, &c, &lim());
    assert_eq!(j.status, Status::Fails);
    assert!(j.counterexample.is_some());
}

#[test]
fn plain_example() {
    let rel = VarRef::shared_with("x", OcSet::single(Oc::Release));
    let left = Command::sc(
        Command::instr(Instr::assign(rel, int(1))),
        Command::sc(Command::instr(Instr::sc_fence()), st("y", int(1))),
    );
    let c = Command::par(left, ld("r", Expr::shared_with("z", OcSet::single(Oc::Acquire))));
    let want = Command::par(Command::sc(st("x", int(1)), st("y", int(1))), ld("r", Expr::shared("z")));
    assert_eq!(strip_constraints(&plain_interpretation(&c)).canonical(), want);
    assert!(plain_interpretation(&Command::Nil).is_nil());
}

#[test]
fn plain_keeps_parallel_and_drops_fences() {
    let c = Command::c11(Command::instr(Instr::sc_fence()), Command::par(st("x", int(1)), st("y", int(1))));
    let p = plain_interpretation(&c);
    assert!(p.constraint_sets().fences.is_empty());
    assert_eq!(plain_interpretation(&p), p);
}

#[test]
fn plain_lock_is_equivalent_under_plain_reading() {
    let lk = lock(&VarId::shared("l"), &VarId::local("taken"));
    let j = trace_equiv(&ModelConfig::c11(), &plain_interpretation(&lk), &plain_interpretation(&plain_interpretation(&lk)), &lim());
    assert!(j.holds());
    assert!(trace_equiv(&ModelConfig::c11(), &lk, &repeat_sc_lock(), &lim()).holds());
}

fn repeat_sc_lock() -> Command {
    let Command::Stmt(s) = get_and_set(&VarId::local("taken"), &VarId::shared("l"), Expr::bool(true), true) else {
        unreachable!()
    };
    repeat_until(Model::Sc, Command::Stmt(s), Expr::not(Expr::local("taken")))
}

#[test]
fn blockall_examples() {
    let fence = Command::instr(Instr::sc_fence());
    assert!(block_all_check(&ModelConfig::c11(), &fence, &st("x", int(1)), &lim()).holds());
    let load = ld("r", Expr::shared("x"));
    let branch = if_then(Model::C11, Expr::eq(Expr::local("r"), int(42)), st("y", Expr::local("r")));
    assert!(block_all_check(&ModelConfig::c11(), &load, &branch, &lim()).holds());
    let j = block_all_check(&ModelConfig::c11(), &st("x", int(1)), &st("y", int(1)), &lim());
    assert_eq!(j.status, Status::Fails);
}

#[test]
fn law_side_conditions_are_errors() {
    let args = LawArgs {
        acts: vec![Action::single(Instr::assign_shared("x", int(1))), Action::single(Instr::assign_shared("y", int(1)))],
        ..Default::default()
    };
    let e = law_check("2actions-keep-order", &args, &ModelConfig::c11(), &lim());
    assert!(matches!(e, Err(AnalysisError::SideCondition { .. })), "{e:?}");
    assert!(matches!(law_check("no-such-law", &args, &ModelConfig::c11(), &lim()), Err(AnalysisError::UnknownLaw(_))));
    let j = law_check("2actions-reduce", &args, &ModelConfig::c11(), &lim()).unwrap();
    assert!(j.holds());
}

#[test]
fn associativity_breaks_with_forwarding() {
    let out = run_law_suite(Some("pseqc-assoc"), &lim()).unwrap();
    let fwd = out.iter().find(|o| o.fixture == "store-loads-fwd").unwrap();
    assert_eq!(fwd.status, Some(Status::Fails));
    assert!(fwd.passed);
}

#[test]
fn oracle_examples() {
    let p = corpus("mp_relaxed.lit");
    for s in sc_oracle(&p, 3) {
        let f = s.get_named("f").unwrap();
        let r = s.get_named("r").unwrap();
        assert!(f != Value::Int(1) || r == Value::Int(1), "{s}");
    }
    let single = parse_litmus("litmus \"s\"\nshared x = 0\nthread t { x = 1; x = 2; }\nmodel sc\nalways (x == 2)\n").unwrap();
    let finals: Vec<State> = sc_oracle(&single.program, 3).into_iter().collect();
    assert_eq!(finals, vec![State::from_pairs([(VarId::shared("x"), Value::Int(2))])]);
}

#[test]
fn judgment_statuses_serialise() {
    assert_eq!(serde_json::to_string(&Status::InconclusiveAtBound).unwrap(), "\"inconclusive_at_bound\"");
    assert_eq!(Status::Holds.name(), "holds");
}
