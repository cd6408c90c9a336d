use memmod_core::analysis::{run_law_suite, law_ids};
use memmod_core::semantics::ExplorationLimits;

#[test]
fn every_fixture_meets_its_expectation() {
    let out = run_law_suite(None, &ExplorationLimits::default()).unwrap();
    let bad: Vec<_> = out.iter().filter(|o| !o.passed).collect();
    for o in &bad {
        eprintln!("{} / {} ({:?}): {:?} {:?} {}", o.law, o.fixture, o.fold_order, o.status, o.error, o.detail);
    }
    assert!(bad.is_empty(), "{} fixture(s) failed", bad.len());
}

#[test]
fn every_law_has_a_fixture() {
    let out = run_law_suite(None, &ExplorationLimits::default()).unwrap();
    for id in law_ids() {
        assert!(out.iter().any(|o| o.law == id), "{id}");
    }
    assert_eq!(law_ids().len(), 20);
}
