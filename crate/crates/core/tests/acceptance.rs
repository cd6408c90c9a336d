//! Acceptance suite: one pass/fail line per criterion.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use memmod_core::analysis::{block_all_check, run_law_suite, sc_oracle, Status};
use memmod_core::ast::{datadep, get_and_set, Action, Command, Expr, Instr, Model, Oc, OcSet, VarId};
use memmod_core::litmus::{parse_litmus, run_litmus, ExpectKind, Litmus, Report};
use memmod_core::reorder::{oc_allows, ocmore_allows, ModelConfig, OcMore};
use memmod_core::semantics::{enumerate_traces, explore_finals, Domain, ExplorationLimits, State};

type Check = Result<String, String>;

fn corpus(name: &str) -> Litmus {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "corpus", name].iter().collect();
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_litmus(&src).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn run(lit: &Litmus, tweak: impl FnOnce(&mut ModelConfig)) -> Report {
    let mut cfg = lit.config();
    tweak(&mut cfg);
    run_litmus(lit, &cfg, &ExplorationLimits::default())
}

fn status(r: &Report, kind: ExpectKind, cond: &str) -> Result<Status, String> {
    r.expectation(kind, cond)
        .map(|e| e.status)
        .ok_or_else(|| format!("{}: no `{} ({cond})` expectation", r.name, kind.name()))
}

fn want(r: &Report, kind: ExpectKind, cond: &str, expect: Status) -> Result<(), String> {
    let got = status(r, kind, cond)?;
    if got == expect {
        Ok(())
    } else {
        Err(format!("{} ({}): {} ({cond}) is {}, wanted {}", r.name, describe(r), kind.name(), got.name(), expect.name()))
    }
}

fn describe(r: &Report) -> String {
    memmod_core::litmus::describe_config(&r.config)
}

fn c1_mp_relaxed() -> Check {
    let lit = corpus("mp_relaxed.lit");
    let cond = "f == 1 && r == 0";
    let r = run(&lit, |_| {});
    want(&r, ExpectKind::Allowed, cond, Status::Holds)?;
    let e = r.expectation(ExpectKind::Allowed, cond).unwrap();
    let w = e.trace.as_ref().filter(|t| !t.is_empty()).ok_or("no witness printed")?;
    let sc = run(&lit, |c| c.base = Model::Sc);
    want(&sc, ExpectKind::Allowed, cond, Status::Fails)?;
    Ok(format!("witness {}", w.join("; ")))
}

fn c2_mp_variants() -> Check {
    for f in ["mp_rel_acq.lit", "mp_fences.lit", "mp_sc_fence.lit"] {
        let t = Instant::now();
        let r = run(&corpus(f), |_| {});
        want(&r, ExpectKind::Always, "f == 1 -> r == 1", Status::Holds)?;
        if t.elapsed() > Duration::from_secs(1) {
            return Err(format!("{f} took {:?}", t.elapsed()));
        }
    }
    Ok("3 files".into())
}

fn c3_oota() -> Check {
    let lit = corpus("oota.lit");
    let cond = "x == 42 && y == 42";
    want(&run(&lit, |_| {}), ExpectKind::Allowed, cond, Status::Holds)?;
    want(&run(&lit, |c| c.guard_store_reorder = false), ExpectKind::Allowed, cond, Status::Fails)?;
    let hw = run_litmus(&lit, &ModelConfig::hardware(), &ExplorationLimits::default());
    want(&hw, ExpectKind::Allowed, cond, Status::Fails)?;
    want(&run(&lit, |c| c.base = Model::Sc), ExpectKind::Allowed, cond, Status::Fails)?;
    Ok("allowed under c11, forbidden under hardware and sc".into())
}

fn c4_oota_d() -> Check {
    let r = run(&corpus("oota_d.lit"), |_| {});
    want(&r, ExpectKind::Always, "x == 0 && y == 0", Status::Holds)?;
    Ok(String::new())
}

fn c5_rfub() -> Check {
    let cond = "x == 42 && y == 42 && r == 42 && !b";
    let rfub = corpus("rfub.lit");
    want(&run(&rfub, |_| {}), ExpectKind::Forbidden, cond, Status::Holds)?;
    // the same program with sfp switched on from the command line
    let on = run(&rfub, |c| c.sfp = true);
    want(&on, ExpectKind::Forbidden, cond, Status::Fails)?;
    let first = on
        .expectation(ExpectKind::Forbidden, cond)
        .and_then(|e| e.trace.as_ref())
        .and_then(|t| t.first().cloned())
        .unwrap_or_default();
    if !first.contains("x := 42") {
        return Err(format!("sfp witness starts with `{first}`, not x := 42"));
    }
    want(&run(&corpus("rfub_sfp.lit"), |_| {}), ExpectKind::Allowed, cond, Status::Holds)?;
    want(&run(&corpus("rfub_prime.lit"), |_| {}), ExpectKind::Allowed, cond, Status::Holds)?;
    Ok(format!("sfp witness starts {first}"))
}

fn c6_oota_d_sfp() -> Check {
    let cond = "x == 42 && y == 42";
    want(&run(&corpus("oota_d_sfp.lit"), |_| {}), ExpectKind::Allowed, cond, Status::Holds)?;
    want(&run(&corpus("oota_d.lit"), |c| c.sfp = true), ExpectKind::Forbidden, cond, Status::Fails)?;
    Ok(String::new())
}

fn c7_lock() -> Check {
    let r = run(&corpus("lock.lit"), |_| {});
    if r.limits.max_unroll != 3 {
        return Err("expected the default unroll bound 3".into());
    }
    want(&r, ExpectKind::Always, "!(c1 && c2)", Status::Holds)?;
    let taken = VarId::local("taken");
    let Command::Stmt(gas) = get_and_set(&taken, &VarId::shared("l"), Expr::bool(true), true) else {
        return Err("getAndSet is not a single statement".into());
    };
    let gas = Action::new(gas.into_iter().map(|s| s.instr).collect()).unwrap();
    let guard = Instr::guard(Expr::local("taken"));
    if !datadep(&gas, &guard) {
        return Err("no data dependence from getAndSet to the guard".into());
    }
    let j = block_all_check(&ModelConfig::c11(), &Command::action(gas), &Command::instr(guard), &ExplorationLimits::default());
    if !j.holds() {
        return Err(format!("blockall fails: {}", j.detail));
    }
    Ok(format!("{} configurations", r.stats.configs))
}

const SC_PROGRAMS: usize = 24;

fn random_program(rng: &mut StdRng, idx: usize) -> String {
    let shared = ["x", "y"];
    let sfx = ["", "", ".rel", ".acq", ".sc"];
    let mut out = format!("litmus \"random{idx}\"\nvalues 0, 1\nshared x = 0, y = 0\n");
    let threads = rng.gen_range(2..=3);
    for t in 0..threads {
        out.push_str(&format!("thread t{t} {{\n    local r{t} = 0, s{t} = 0;\n"));
        for _ in 0..rng.gen_range(1..=4) {
            let v = shared[rng.gen_range(0..2)];
            let stmt = match rng.gen_range(0..7) {
                0 | 1 => format!("{v}{} = {};", store_sfx(rng, &sfx), rng.gen_range(0..2)),
                2 => format!("{v}{} = r{t};", store_sfx(rng, &sfx)),
                3 | 4 => format!("r{t} = {v}{};", load_sfx(rng, &sfx)),
                5 => format!("s{t} = {v}{} + r{t};", load_sfx(rng, &sfx)),
                _ => ["fence.sc;", "fence.rel;", "fence.acq;"][rng.gen_range(0..3)].to_string(),
            };
            out.push_str(&format!("    {stmt}\n"));
        }
        out.push_str("}\n");
    }
    out.push_str("allowed (true)\n");
    out
}

fn store_sfx(rng: &mut StdRng, sfx: &[&str]) -> String {
    let s = sfx[rng.gen_range(0..sfx.len())];
    if s == ".acq" { String::new() } else { s.to_string() }
}

fn load_sfx(rng: &mut StdRng, sfx: &[&str]) -> String {
    let s = sfx[rng.gen_range(0..sfx.len())];
    if s == ".rel" { String::new() } else { s.to_string() }
}

fn c8_sc_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let limits = ExplorationLimits::default();
    for i in 0..SC_PROGRAMS {
        let src = random_program(&mut rng, i);
        let lit = parse_litmus(&src).map_err(|e| format!("generated program {i}: {e}\n{src}"))?;
        let ex = explore_finals(&lit.program, &ModelConfig::sc(), &limits);
        let got: BTreeSet<State> = ex.finals.keys().cloned().collect();
        let want = sc_oracle(&lit.program, limits.max_unroll);
        if got != want {
            return Err(format!("program {i} differs: {} vs {} final states\n{src}", got.len(), want.len()));
        }
    }
    Ok(format!("{SC_PROGRAMS} programs"))
}

fn c9_laws() -> Check {
    let out = run_law_suite(None, &ExplorationLimits::default()).map_err(|e| e.to_string())?;
    if let Some(o) = out.iter().find(|o| !o.passed) {
        return Err(format!("{} / {}: {:?} {:?} {}", o.law, o.fixture, o.status, o.error, o.detail));
    }
    let fwd = out
        .iter()
        .find(|o| o.law == "pseqc-assoc" && o.fixture == "store-loads-fwd")
        .ok_or("no pseqc-assoc fixture with forwarding")?;
    if fwd.status != Some(Status::Fails) {
        return Err(format!("pseqc-assoc with forwarding gave {:?}", fwd.status));
    }
    let laws: BTreeSet<&str> = out.iter().map(|o| o.law.as_str()).collect();
    Ok(format!("{} fixtures over {} laws, associativity fails with forwarding", out.len(), laws.len()))
}

fn c10_tables() -> Check {
    use Oc::*;
    let order = [Relaxed, Release, Acquire, SeqCst];
    // rows: first instruction's constraint, columns: the second's
    let grid = [
        [true, false, true, false],
        [true, false, true, false],
        [false, false, false, false],
        [false, false, false, false],
    ];
    let mut bad = Vec::new();
    for (i, a) in order.iter().enumerate() {
        for (j, b) in order.iter().enumerate() {
            if oc_allows(*a, *b) != grid[i][j] {
                bad.push(format!("grid {}/{}", a.short(), b.short()));
            }
        }
    }
    let x = |ocs: OcSet| Expr::shared_with("x", ocs);
    let rlx = OcSet::relaxed();
    let sc = OcSet::single(SeqCst);
    let rows: [(&str, Expr, Expr, [bool; 5]); 5] = [
        ("5*4 >= 20", Expr::mul(Expr::int(5), Expr::int(4)), Expr::int(20), [true; 5]),
        ("x*0 >= 0", Expr::mul(x(rlx), Expr::int(0)), Expr::int(0), [true, false, true, true, true]),
        ("x.sc*0 >= 0", Expr::mul(x(sc), Expr::int(0)), Expr::int(0), [false, false, false, false, true]),
        ("x.sc >= x", x(sc), x(rlx), [false, false, false, false, true]),
        ("x >= x.sc", x(rlx), x(sc), [false, false, true, false, true]),
    ];
    for (name, e, e2, expect) in &rows {
        for (k, opt) in OcMore::ALL.iter().enumerate() {
            if ocmore_allows(*opt, e, e2) != expect[k] {
                bad.push(format!("{name} ({})", opt.letter()));
            }
        }
    }
    if bad.is_empty() {
        Ok("16 grid cells, 25 table cells".into())
    } else {
        Err(format!("cells differ from the published tables: {}", bad.join(", ")))
    }
}

fn c11_forwarding() -> Check {
    want(&run(&corpus("fwd_coherence.lit"), |_| {}), ExpectKind::Allowed, "r == 1", Status::Holds)?;
    let plus = run(&corpus("fwd_coherence_plus.lit"), |_| {});
    want(&plus, ExpectKind::Allowed, "r == 2", Status::Holds)?;
    want(&plus, ExpectKind::Forbidden, "r == 1", Status::Holds)?;
    Ok(String::new())
}

fn guard_eq(x: Expr, v: i64) -> Action {
    Action::single(Instr::guard(Expr::eq(x, Expr::int(v))))
}

fn c12_incremental() -> Check {
    let lit = corpus("incr_release_write.lit");
    let cfg = lit.config();
    let limits = ExplorationLimits::default();
    let ts = enumerate_traces(&cfg, &lit.program.composed(), &Domain::for_program(&lit.program), &limits);
    let expected = vec![
        guard_eq(Expr::shared_with("x", OcSet::single(Oc::Acquire)), 3),
        guard_eq(Expr::shared("y"), 2),
        Action::single(Instr::assign(
            memmod_core::ast::VarRef::shared_with("z", OcSet::single(Oc::Release)),
            Expr::int(5),
        )),
    ];
    if !ts.traces.contains(&expected) {
        return Err(format!("trace {expected:?} not enumerated ({} traces)", ts.traces.len()));
    }
    let hoist = corpus("incr_hoist.lit");
    want(&run(&hoist, |_| {}), ExpectKind::Allowed, "z == 4", Status::Holds)?;
    let ts = enumerate_traces(&hoist.config(), &hoist.program.composed(), &Domain::for_program(&hoist.program), &limits);
    let hoisted = vec![
        guard_eq(Expr::shared("y"), 3),
        Action::single(Instr::assign_shared("x", Expr::int(1))),
        guard_eq(Expr::shared("x"), 1),
        Action::single(Instr::assign_shared("z", Expr::int(4))),
    ];
    if !ts.traces.contains(&hoisted) {
        return Err("the y-load-first trace reaching z = 4 is missing".into());
    }
    Ok(String::new())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Check); 12] = [
        (1, "MP relaxed allowed under C11, forbidden under SC", 1, c1_mp_relaxed),
        (2, "MP rel/acq, fences, sc fences keep f==1 -> r==1", 3, c2_mp_variants),
        (3, "oota allowed, forbidden on hardware and SC", 5, c3_oota),
        (4, "oota_D always x==0 && y==0", 5, c4_oota_d),
        (5, "rfub forbidden, allowed with sfp, rfub' allowed", 30, c5_rfub),
        (6, "oota_D allowed under sfp", 10, c6_oota_d_sfp),
        (7, "test-and-set lock mutual exclusion", 30, c7_lock),
        (8, "SC exploration equals the interleaving oracle", 30, c8_sc_oracle),
        (9, "law suite", 60, c9_laws),
        (10, "ordering-constraint grid and allowed-change table", 1, c10_tables),
        (11, "forwarding coherence example", 5, c11_forwarding),
        (12, "incremental evaluation traces", 5, c12_incremental),
    ];
    let mut failed = 0;
    for (n, what, budget, check) in criteria {
        let t = Instant::now();
        let res = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = t.elapsed();
        let res = res.and_then(|note| {
            if took > Duration::from_secs(budget) {
                Err(format!("took {took:.2?}, budget {budget} s"))
            } else {
                Ok(note)
            }
        });
        match res {
            Ok(note) => {
                let note = if note.is_empty() { String::new() } else { format!(" [{note}]") };
                println!("PASS  criterion {n:>2}: {what} ({:.1} ms){note}", took.as_secs_f64() * 1e3);
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  criterion {n:>2}: {what} ({:.1} ms): {e}", took.as_secs_f64() * 1e3);
            }
        }
    }
    println!("{} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
