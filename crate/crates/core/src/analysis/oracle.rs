//! Brute-force sequentially consistent interleaver. Shares no code with the
//! step relation: it walks each thread in program order and updates a map
//! directly, with its own expression evaluator.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use crate::ast::{BinOp, Command, Expr, Instr, Program, UnOp, Value, ValueType, VarId};
use crate::semantics::State;

type Env = BTreeMap<VarId, Value>;

fn ev(e: &Expr, env: &Env) -> Option<Value> {
    use Value::{Bool, Int};
    Some(match e {
        Expr::Const(v) => *v,
        Expr::Var(r) => *env.get(&r.var)?,
        Expr::Unary(UnOp::Neg, a) => Int(ev(a, env)?.as_int()?.checked_neg()?),
        Expr::Unary(UnOp::Not, a) => Bool(!ev(a, env)?.as_bool()?),
        Expr::Binary(op, a, b) => {
            let (x, y) = (ev(a, env)?, ev(b, env)?);
            match (op, x, y) {
                (BinOp::Add, Int(p), Int(q)) => Int(p.checked_add(q)?),
                (BinOp::Sub, Int(p), Int(q)) => Int(p.checked_sub(q)?),
                (BinOp::Mul, Int(p), Int(q)) => Int(p.checked_mul(q)?),
                (BinOp::Eq, Int(p), Int(q)) => Bool(p == q),
                (BinOp::Eq, Bool(p), Bool(q)) => Bool(p == q),
                (BinOp::Ne, Int(p), Int(q)) => Bool(p != q),
                (BinOp::Ne, Bool(p), Bool(q)) => Bool(p != q),
                (BinOp::Lt, Int(p), Int(q)) => Bool(p < q),
                (BinOp::Le, Int(p), Int(q)) => Bool(p <= q),
                (BinOp::Gt, Int(p), Int(q)) => Bool(p > q),
                (BinOp::Ge, Int(p), Int(q)) => Bool(p >= q),
                (BinOp::And, Bool(p), Bool(q)) => Bool(p && q),
                (BinOp::Or, Bool(p), Bool(q)) => Bool(p || q),
                _ => return None,
            }
        }
    })
}

/// Run a statement atomically; `None` if a guard fails.
fn exec(instrs: &[&Instr], env: &Env) -> Option<Env> {
    let mut env = env.clone();
    for i in instrs {
        match i {
            Instr::Assign { target, rhs } => {
                let v = ev(rhs, &env)?;
                env.insert(target.var.clone(), v);
            }
            Instr::Guard(g) => {
                if ev(g, &env)? != Value::Bool(true) {
                    return None;
                }
            }
            Instr::Fence { .. } => {}
        }
    }
    Some(env)
}

/// Each thread is a stack of pending commands, top = next in program order.
type Conf = (Vec<Vec<Arc<Command>>>, Env);

fn successors(conf: &Conf, t: usize, max_unroll: usize) -> Vec<Conf> {
    let mut stack = conf.0[t].clone();
    let Some(top) = stack.pop() else { return vec![] };
    let with = |stack: Vec<Arc<Command>>, env: Env| {
        let mut ts = conf.0.clone();
        ts[t] = stack;
        (ts, env)
    };
    match &*top {
        Command::Nil => vec![with(stack, conf.1.clone())],
        Command::Stmt(s) => {
            let instrs: Vec<&Instr> = s.iter().map(|si| &si.instr).collect();
            exec(&instrs, &conf.1).map(|env| with(stack, env)).into_iter().collect()
        }
        Command::Pseq(_, a, b) => {
            stack.push(b.clone());
            stack.push(a.clone());
            vec![with(stack, conf.1.clone())]
        }
        Command::Choice(a, b) => [a, b]
            .into_iter()
            .map(|branch| {
                let mut s = stack.clone();
                s.push(branch.clone());
                with(s, conf.1.clone())
            })
            .collect(),
        Command::Iterate(_, body) => (0..=max_unroll)
            .map(|n| {
                let mut s = stack.clone();
                for _ in 0..n {
                    s.push(body.clone());
                }
                with(s, conf.1.clone())
            })
            .collect(),
    }
}

fn initial(p: &Program) -> Vec<Env> {
    let ints: Vec<Value> = p.value_domain();
    let mut out = vec![Env::new()];
    for d in p.decls() {
        let vals = match (d.init, d.ty) {
            (Some(v), _) => vec![v],
            (None, ValueType::Bool) => vec![Value::Bool(false), Value::Bool(true)],
            (None, ValueType::Int) => ints.clone(),
        };
        out = out
            .into_iter()
            .flat_map(|env| {
                vals.iter().map(move |v| {
                    let mut e = env.clone();
                    e.insert(d.var.clone(), *v);
                    e
                })
            })
            .collect();
    }
    out
}

/// Final states of `p` under plain interleaving of program-order threads.
/// Nested parallel composition inside a thread is run sequentially.
pub fn sc_oracle(p: &Program, max_unroll: usize) -> BTreeSet<State> {
    let mut finals = BTreeSet::new();
    let mut seen: HashSet<Conf> = HashSet::new();
    let mut todo: Vec<Conf> = Vec::new();
    for env in initial(p) {
        let conf: Conf = (p.threads.iter().map(|t| vec![t.body.clone()]).collect(), env);
        if seen.insert(conf.clone()) {
            todo.push(conf);
        }
    }
    while let Some(conf) = todo.pop() {
        if conf.0.iter().all(|s| s.is_empty()) {
            finals.insert(State::from_pairs(conf.1.clone()));
            continue;
        }
        for t in 0..conf.0.len() {
            for next in successors(&conf, t, max_unroll) {
                if seen.insert(next.clone()) {
                    todo.push(next);
                }
            }
        }
    }
    finals
}
