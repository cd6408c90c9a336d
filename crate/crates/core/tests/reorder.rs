use std::collections::BTreeSet;

use memmod_core::ast::*;
use memmod_core::reorder::*;

fn st(x: &str, e: Expr) -> Instr {
    Instr::assign_shared(x, e)
}

fn ld(r: &str, e: Expr) -> Instr {
    Instr::assign_local(r, e)
}

fn int(i: i64) -> Expr {
    Expr::int(i)
}

fn sh(x: &str) -> Expr {
    Expr::shared(x)
}

fn lc(r: &str) -> Expr {
    Expr::local(r)
}

fn with(x: &str, oc: Oc) -> Expr {
    Expr::shared_with(x, OcSet::single(oc))
}

fn rel_store(x: &str, e: Expr) -> Instr {
    Instr::assign(VarRef::shared_with(x, OcSet::single(Oc::Release)), e)
}

fn cmd(is: &[Instr]) -> Command {
    Command::seq_all(Model::C11, is.iter().cloned().map(Command::instr).collect(), Nesting::Right)
}

#[test]
fn oc_relation_is_exactly_four_pairs() {
    use Oc::*;
    for a in Oc::ALL {
        for b in Oc::ALL {
            let norm = |o: Oc| if o == Consume { Relaxed } else { o };
            let listed = OC_RELATION.contains(&(norm(a), norm(b)));
            assert_eq!(oc_allows(a, b), listed, "{a:?} {b:?}");
        }
    }
    assert_eq!(OC_RELATION.len(), 4);
}

#[test]
fn negative_form_of_oc_relation() {
    for oc in Oc::ALL {
        assert!(!oc_allows(oc, Oc::SeqCst));
        assert!(!oc_allows(Oc::SeqCst, oc));
        assert!(!oc_allows(oc, Oc::Release));
        assert!(!oc_allows(Oc::Acquire, oc));
    }
}

#[test]
fn ro_g_examples() {
    assert!(ro_g(&st("x", int(1)), &st("y", int(2)), true));
    assert!(!ro_g(&st("x", int(1)), &st("x", int(2)), true));
    let g = Instr::guard(Expr::eq(lc("r"), int(1)));
    assert!(ro_g(&g, &st("x", int(2)), true));
    assert!(!ro_g(&g, &st("x", int(2)), false));
    assert!(ro_g(&st("x", lc("r")), &st("y", lc("r")), true));
}

#[test]
fn ro_fence_examples() {
    let store_fence = Instr::fence(FenceKind::Store, OcSet::EMPTY);
    let load_fence = Instr::fence(FenceKind::Load, OcSet::EMPTY);
    assert!(!ro_fence(&st("x", int(1)), &store_fence));
    assert!(!ro_fence(&load_fence, &ld("r2", sh("y"))));
    assert!(ro_fence(&ld("r", Expr::add(lc("r"), int(1))), &store_fence));
    assert!(ro_fence(&load_fence, &st("x", int(1))));
}

#[test]
fn ro_ocs_examples() {
    let a = rel_store("x", with("y", Oc::Acquire));
    assert!(!ro_ocs(&a, &st("x", int(1))));
    let local = ld("r1", Expr::mul(lc("r2"), int(2)));
    assert!(ro_ocs(&local, &Instr::sc_fence()));
    assert!(ro_ocs(&Instr::sc_fence(), &local));
}

#[test]
fn ro_instr_release_and_acquire() {
    let c = ModelConfig::c11();
    assert!(!ro_instr(&c, &st("y", int(1)), &rel_store("x", int(1))));
    assert!(ro_instr(&c, &rel_store("x", int(1)), &ld("r", sh("y"))));
    assert!(!ro_instr(&c, &ld("r1", with("x", Oc::Acquire)), &ld("r2", sh("y"))));
    assert!(ro_instr(&c, &ld("r1", sh("y")), &ld("r2", with("x", Oc::Acquire))));
}

#[test]
fn sc_and_par_extremes() {
    let (a, b) = (st("x", int(1)), st("y", int(1)));
    assert!(!ro_instr(&ModelConfig::sc(), &a, &b));
    assert!(ro_instr(&ModelConfig::par(), &a, &st("x", int(2))));
}

#[test]
fn forwarding_examples() {
    assert_eq!(forward(&st("x", int(1)), &ld("r", sh("x"))), ld("r", int(1)));
    let g = forward(&ld("r1", lc("r2")), &Instr::guard(Expr::eq(lc("r1"), lc("r2"))));
    assert_eq!(g, Instr::guard(Expr::eq(lc("r2"), lc("r2"))));
    assert_eq!(forward(&st("x", int(1)), &st("y", int(2))), st("y", int(2)));
}

#[test]
fn forwarding_replaces_every_constraint_variant() {
    let b = ld("r", with("x", Oc::Acquire));
    assert_eq!(forward(&st("x", int(1)), &b), ld("r", int(1)));
}

#[test]
fn guard_forwarding_examples() {
    let g42 = Instr::guard(Expr::eq(lc("r"), int(42)));
    assert!(guard_forward(&g42, &st("x", lc("r"))).contains(&st("x", int(42))));
    assert_eq!(guard_forward(&st("x", int(1)), &ld("r", sh("x"))), BTreeSet::from([ld("r", int(1))]));
    let gne = Instr::guard(Expr::ne(lc("r"), int(42)));
    assert_eq!(guard_forward(&gne, &st("y", int(5))), BTreeSet::from([st("y", int(5))]));
}

#[test]
fn triple_through_the_forwarding_example() {
    // r := x ; x := 1, then y := x overtakes both as y := 1
    let c = cmd(&[ld("r", sh("x")), st("x", int(1))]);
    let out = reorder_triple_instr(&ModelConfig::c11(), &c, &st("y", sh("x")));
    assert_eq!(out, BTreeSet::from([st("y", int(1))]));
}

#[test]
fn triple_fold_orders_differ() {
    let c = cmd(&[st("x", int(1)), ld("r1", sh("x"))]);
    let b = st("y", sh("x"));
    assert!(reorder_triple_instr(&ModelConfig::c11(), &c, &b).is_empty());
    let early = ModelConfig { fold_order: FoldOrder::EarliestFirst, ..ModelConfig::c11() };
    assert!(reorder_triple_instr(&early, &c, &b).contains(&st("y", int(1))));
}

#[test]
fn nearest_assignment_wins() {
    let c = cmd(&[st("x", int(1)), st("x", int(2))]);
    let out = reorder_triple_instr(&ModelConfig::c11(), &c, &ld("r", sh("x")));
    assert_eq!(out, BTreeSet::from([ld("r", int(2))]));
}

#[test]
fn full_fence_blocks_everything() {
    let f = Command::instr(Instr::sc_fence());
    for b in [st("x", int(1)), ld("r", sh("y")), Instr::guard(Expr::bool(true)), ld("r", int(1))] {
        assert!(reorder_triple_instr(&ModelConfig::c11(), &f, &b).is_empty(), "{b}");
    }
}

#[test]
fn sfp_triple_through_rfub_branch() {
    let branch = Command::c11(
        Command::guard(Expr::ne(lc("r"), int(42))),
        Command::c11(Command::instr(Instr::assign_shared("b", Expr::bool(true))), Command::instr(ld("r", int(42)))),
    );
    let sfp = ModelConfig { sfp: true, ..ModelConfig::c11() };
    let out = reorder_triple_instr(&sfp, &branch, &st("x", lc("r")));
    assert!(out.contains(&st("x", int(42))), "{out:?}");
    // without sfp x := r forwards to x := 42 as well, via the assignment
    let plain = reorder_triple_instr(&ModelConfig::c11(), &branch, &st("x", lc("r")));
    assert!(plain.contains(&st("x", int(42))));
}

#[test]
fn choice_intersects_branches() {
    let c = Command::choice(Command::instr(st("x", int(1))), Command::instr(st("x", int(2))));
    assert!(reorder_triple_instr(&ModelConfig::c11(), &c, &ld("r", sh("x"))).is_empty());
    let d = Command::choice(Command::instr(st("x", int(1))), Command::instr(st("z", int(2))));
    let out = reorder_triple_instr(&ModelConfig::c11(), &d, &st("y", int(3)));
    assert_eq!(out, BTreeSet::from([st("y", int(3))]));
}

#[test]
fn iterate_requires_an_unchanged_pass() {
    let body = Command::instr(st("z", int(1)));
    let loop_ = Command::iterate(Model::C11, body);
    assert_eq!(reorder_triple_instr(&ModelConfig::c11(), &loop_, &st("y", int(1))), BTreeSet::from([st("y", int(1))]));
    let writes_x = Command::iterate(Model::C11, Command::instr(st("x", int(1))));
    assert!(reorder_triple_instr(&ModelConfig::c11(), &writes_x, &ld("r", sh("x"))).is_empty());
}

#[test]
fn ocmore_examples() {
    let rlx0 = Expr::mul(sh("x"), int(0));
    // (a) compares the sets exactly; (b) lets a relaxed access disappear
    assert!(!ocmore_allows(OcMore::A, &rlx0, &int(0)));
    assert!(ocmore_allows(OcMore::B, &rlx0, &int(0)));
    assert!(ocmore_allows(OcMore::C, &rlx0, &int(0)));
    assert!(ocmore_allows(OcMore::D, &rlx0, &int(0)));
    let sc0 = Expr::mul(with("x", Oc::SeqCst), int(0));
    for o in [OcMore::A, OcMore::B, OcMore::C, OcMore::D] {
        assert!(!ocmore_allows(o, &sc0, &int(0)), "{o:?}");
    }
    assert!(ocmore_allows(OcMore::E, &sc0, &int(0)));
    assert!(ocmore_allows(OcMore::A, &Expr::mul(int(5), int(4)), &int(20)));
}

#[test]
fn optimisations() {
    let cfg = ModelConfig { optimize: true, ..ModelConfig::c11() };
    let rr = Expr::sub(lc("r"), lc("r"));
    assert!(optimize_expr(&cfg, &rr).contains(&(Expr::bool(true), int(0))));
    let r12 = Expr::sub(lc("r1"), lc("r2"));
    assert!(optimize_expr(&cfg, &r12).contains(&(Expr::eq(lc("r1"), lc("r2")), int(0))));
    assert!(optimize_expr(&cfg, &Expr::mul(with("x", Oc::SeqCst), int(0))).is_empty());
}

#[test]
fn strict_optimisation_keeps_shared_contexts_out() {
    let strict = ModelConfig { optimize: true, optimize_strict: true, ..ModelConfig::c11() };
    assert!(optimize_expr(&strict, &Expr::sub(sh("x"), sh("y"))).is_empty());
    assert!(!optimize_expr(&strict, &Expr::sub(lc("a"), lc("b"))).is_empty());
}

#[test]
fn simpler_is_strict() {
    let e = Expr::add(lc("r"), int(0));
    assert!(simpler(&e, &lc("r")));
    assert!(!simpler(&lc("r"), &lc("r")));
}

#[test]
fn hardware_preset_keeps_stores_behind_guards() {
    let g = Command::guard(Expr::eq(lc("r"), int(1)));
    assert!(reorder_triple_instr(&ModelConfig::hardware(), &g, &st("y", int(1))).is_empty());
    assert!(!reorder_triple_instr(&ModelConfig::c11(), &g, &st("y", int(1))).is_empty());
}
