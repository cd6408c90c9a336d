use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ast::{
    cas, cas_result, faa, get_and_set, if_then_else, repeat_until, while_do, BinOp, Command, Decl, Expr, FenceKind,
    Instr, Model, Nesting, Oc, OcSet, Program, SpecInstr, Thread, UnOp, Value, ValueType, VarId, VarRef,
};

use super::syntax::{FenceSpec, LitmusFile, Rmw, SDecl, SExpr, SOp, Stmt};
use super::{Expectation, LitmusError};

fn sem<T>(msg: impl Into<String>) -> Result<T, LitmusError> {
    Err(LitmusError::Semantic(msg.into()))
}

fn ty_name(t: ValueType) -> &'static str {
    match t {
        ValueType::Int => "int",
        ValueType::Bool => "bool",
    }
}

fn decl_ty(d: &SDecl) -> ValueType {
    match d.init {
        Some(v) => v.ty(),
        None if d.bool_ty => ValueType::Bool,
        None => ValueType::Int,
    }
}

pub(crate) fn suffix_ocs(sfx: &[String]) -> OcSet {
    sfx.iter().fold(OcSet::EMPTY, |acc, s| match s.as_str() {
        "rlx" => acc.with(Oc::Relaxed),
        "rel" => acc.with(Oc::Release),
        "acq" => acc.with(Oc::Acquire),
        "con" => acc.with(Oc::Consume),
        "sc" => acc.with(Oc::SeqCst),
        "ar" => acc.union(OcSet::acq_rel()),
        _ => acc,
    })
}

/// Names visible in one thread, or in the conditions when `thread` is `None`.
struct Scope<'a> {
    shared: &'a BTreeMap<String, (VarId, ValueType)>,
    locals: BTreeMap<String, (VarId, ValueType)>,
    thread: Option<&'a str>,
}

impl Scope<'_> {
    fn lookup(&self, name: &str) -> Result<&(VarId, ValueType), LitmusError> {
        if let Some(v) = self.locals.get(name).or_else(|| self.shared.get(name)) {
            return Ok(v);
        }
        match self.thread {
            Some(t) => sem(format!("thread {t}: undeclared variable `{name}`")),
            None => sem(format!("undeclared or ambiguous variable `{name}` (qualify locals as `thread:name`)")),
        }
    }

    fn var_ref(&self, name: &str, sfx: &[String]) -> Result<(VarRef, ValueType), LitmusError> {
        let (v, t) = self.lookup(name)?.clone();
        if !v.is_shared() && !sfx.is_empty() {
            return sem(format!("local `{name}` cannot carry an ordering annotation"));
        }
        let r = if sfx.is_empty() { VarRef::plain(v) } else { VarRef::new(v, suffix_ocs(sfx)) };
        Ok((r, t))
    }

    fn expr(&self, e: &SExpr) -> Result<(Expr, ValueType), LitmusError> {
        use ValueType::{Bool, Int};
        let want = |e: &SExpr, got: ValueType, t: ValueType| {
            if got == t {
                Ok(())
            } else {
                sem(format!("`{e}` has type {}, expected {}", ty_name(got), ty_name(t)))
            }
        };
        Ok(match e {
            SExpr::Int(i) => (Expr::int(*i), Int),
            SExpr::Bool(b) => (Expr::bool(*b), Bool),
            SExpr::Var(n, sfx) => {
                let (r, t) = self.var_ref(n, sfx)?;
                (Expr::Var(r), t)
            }
            SExpr::Not(a) => {
                let (x, t) = self.expr(a)?;
                want(a, t, Bool)?;
                (Expr::Unary(UnOp::Not, Box::new(x)), Bool)
            }
            SExpr::Neg(a) => {
                let (x, t) = self.expr(a)?;
                want(a, t, Int)?;
                (Expr::neg(x), Int)
            }
            SExpr::Bin(op, a, b) => {
                let (x, ta) = self.expr(a)?;
                let (y, tb) = self.expr(b)?;
                match op {
                    SOp::Implies => {
                        want(a, ta, Bool)?;
                        want(b, tb, Bool)?;
                        (Expr::or(Expr::not(x), y), Bool)
                    }
                    SOp::Bin(op @ (BinOp::Eq | BinOp::Ne)) => {
                        want(b, tb, ta)?;
                        (Expr::bin(*op, x, y), Bool)
                    }
                    SOp::Bin(op @ (BinOp::And | BinOp::Or)) => {
                        want(a, ta, Bool)?;
                        want(b, tb, Bool)?;
                        (Expr::bin(*op, x, y), Bool)
                    }
                    SOp::Bin(op @ (BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)) => {
                        want(a, ta, Int)?;
                        want(b, tb, Int)?;
                        (Expr::bin(*op, x, y), Bool)
                    }
                    SOp::Bin(op) => {
                        want(a, ta, Int)?;
                        want(b, tb, Int)?;
                        (Expr::bin(*op, x, y), Int)
                    }
                }
            }
        })
    }

    fn typed(&self, e: &SExpr, t: ValueType) -> Result<Expr, LitmusError> {
        let (x, got) = self.expr(e)?;
        if got != t {
            return sem(format!("`{e}` has type {}, expected {}", ty_name(got), ty_name(t)));
        }
        Ok(x)
    }

    fn cond(&self, e: &SExpr) -> Result<Expr, LitmusError> {
        self.typed(e, ValueType::Bool)
    }
}

struct Ctx<'a> {
    scope: Scope<'a>,
    nesting: Nesting,
}

impl Ctx<'_> {
    fn seq(&self, stmts: &[Stmt]) -> Result<Command, LitmusError> {
        let cmds = stmts.iter().map(|s| self.stmt(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Command::seq_all(Model::C11, cmds, self.nesting))
    }

    fn spec(&self, s: &Stmt) -> Result<SpecInstr, LitmusError> {
        let tag = |d: bool, i: Instr| if d { SpecInstr::divisible(i) } else { SpecInstr::indivisible(i) };
        match s {
            Stmt::Assign { divis, target, sfx, rhs } => {
                let (r, t) = self.scope.var_ref(target, sfx)?;
                let e = self.scope.typed(rhs, t)?;
                Ok(tag(*divis, Instr::assign(r, e)))
            }
            Stmt::Guard { divis, cond } => Ok(tag(*divis, Instr::guard(self.scope.cond(cond)?))),
            Stmt::Fence(k) => Ok(SpecInstr::indivisible(match k {
                FenceSpec::Sc => Instr::sc_fence(),
                FenceSpec::Rel => Instr::rel_fence(),
                FenceSpec::Acq => Instr::acq_fence(),
                FenceSpec::Store => Instr::fence(FenceKind::Store, OcSet::EMPTY),
                FenceSpec::Load => Instr::fence(FenceKind::Load, OcSet::EMPTY),
                FenceSpec::Full => Instr::fence(FenceKind::Full, OcSet::EMPTY),
            })),
            _ => unreachable!("compound statement"),
        }
    }

    fn rmw(&self, op: Rmw, result: &Option<String>, ar: bool, x: &str, args: &[SExpr]) -> Result<Command, LitmusError> {
        let (xv, xt) = self.scope.lookup(x)?.clone();
        if !xv.is_shared() {
            return sem(format!("`{}` needs a shared variable, `{x}` is local", op.name()));
        }
        let result = match result {
            Some(r) => {
                let (rv, rt) = self.scope.lookup(r)?.clone();
                let want = if op == Rmw::Cas { ValueType::Bool } else { xt };
                if rt != want {
                    return sem(format!("result `{r}` of `{}` must have type {}", op.name(), ty_name(want)));
                }
                Some(rv)
            }
            None => None,
        };
        Ok(match op {
            Rmw::Cas => {
                let (e1, e2) = (self.scope.typed(&args[0], xt)?, self.scope.typed(&args[1], xt)?);
                match result {
                    Some(r) => cas_result(&r, &xv, e1, e2, ar),
                    None => cas(&xv, e1, e2, ar),
                }
            }
            Rmw::Faa => {
                if xt != ValueType::Int {
                    return sem(format!("`faa` needs an int variable, `{x}` is bool"));
                }
                let r = result.expect("parser requires a result");
                faa(&r, &xv, self.scope.typed(&args[0], ValueType::Int)?, ar)
            }
            Rmw::GetSet => {
                let r = result.expect("parser requires a result");
                get_and_set(&r, &xv, self.scope.typed(&args[0], xt)?, ar)
            }
        })
    }

    fn stmt(&self, s: &Stmt) -> Result<Command, LitmusError> {
        Ok(match s {
            Stmt::Assign { .. } | Stmt::Guard { .. } | Stmt::Fence(_) => Command::stmt(vec![self.spec(s)?]),
            Stmt::If { cond, then, els } => {
                let els = match els {
                    Some(e) => self.seq(e)?,
                    None => Command::Nil,
                };
                if_then_else(Model::C11, self.scope.cond(cond)?, self.seq(then)?, els)
            }
            Stmt::While { cond, body } => while_do(Model::C11, self.scope.cond(cond)?, self.seq(body)?),
            Stmt::Repeat { body, until } => repeat_until(Model::C11, self.seq(body)?, self.scope.cond(until)?),
            Stmt::Rmw { op, result, ar, x, args } => self.rmw(*op, result, *ar, x, args)?,
            Stmt::Atomic(body) => Command::stmt(body.iter().map(|s| self.spec(s)).collect::<Result<_, _>>()?),
        })
    }
}

/// Resolve names, check types and build the program and its expectations.
pub(crate) fn resolve(f: &LitmusFile) -> Result<(Program, Vec<Expectation>), LitmusError> {
    if f.expectations.is_empty() {
        return sem("a litmus file needs at least one expectation");
    }
    let mut shared = BTreeMap::new();
    let mut shared_decls = Vec::new();
    for d in &f.shared {
        let v = VarId::shared(&d.name);
        if shared.insert(d.name.clone(), (v.clone(), decl_ty(d))).is_some() {
            return sem(format!("`{}` declared twice", d.name));
        }
        shared_decls.push(Decl { var: v, ty: decl_ty(d), init: d.init });
    }
    let mut thread_names = BTreeSet::new();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &f.threads {
        if !thread_names.insert(t.name.as_str()) {
            return sem(format!("thread `{}` declared twice", t.name));
        }
        let mut own = BTreeSet::new();
        for d in &t.locals {
            if shared.contains_key(&d.name) {
                return sem(format!("thread {}: local `{}` shadows a shared variable", t.name, d.name));
            }
            if !own.insert(d.name.as_str()) {
                return sem(format!("thread {}: `{}` declared twice", t.name, d.name));
            }
            *seen.entry(d.name.as_str()).or_default() += 1;
        }
    }
    let nesting = f.settings.nesting.unwrap_or_default();
    let mut threads = Vec::new();
    let mut global_locals = BTreeMap::new();
    for t in &f.threads {
        let mut locals = BTreeMap::new();
        let mut decls = Vec::new();
        for d in &t.locals {
            let id = if seen[d.name.as_str()] > 1 { format!("{}:{}", t.name, d.name) } else { d.name.clone() };
            let v = VarId::local(&id);
            locals.insert(d.name.clone(), (v.clone(), decl_ty(d)));
            global_locals.insert(format!("{}:{}", t.name, d.name), (v.clone(), decl_ty(d)));
            if seen[d.name.as_str()] == 1 {
                global_locals.insert(d.name.clone(), (v.clone(), decl_ty(d)));
            }
            decls.push(Decl { var: v, ty: decl_ty(d), init: d.init });
        }
        let ctx = Ctx { scope: Scope { shared: &shared, locals, thread: Some(&t.name) }, nesting };
        let body = ctx.seq(&t.body)?;
        threads.push(Thread { name: t.name.clone(), locals: decls, body: Arc::new(body) });
    }
    let domain = f.values.as_ref().map(|v| {
        let set: BTreeSet<i64> = v.iter().copied().collect();
        set.into_iter().map(Value::Int).collect()
    });
    let program = Program { shared: shared_decls, threads, domain };
    let scope = Scope { shared: &shared, locals: global_locals, thread: None };
    let mut exps = Vec::new();
    for (k, e) in &f.expectations {
        exps.push(Expectation { kind: *k, cond: scope.cond(e)?, text: e.to_string() });
    }
    Ok((program, exps))
}

/// Resolve a condition against a program's declarations, as in expectations.
pub(crate) fn resolve_condition(p: &Program, e: &SExpr) -> Result<Expr, LitmusError> {
    let shared: BTreeMap<String, (VarId, ValueType)> =
        p.shared.iter().map(|d| (d.var.name().to_string(), (d.var.clone(), d.ty))).collect();
    let mut locals = BTreeMap::new();
    for t in &p.threads {
        for d in &t.locals {
            locals.insert(d.var.name().to_string(), (d.var.clone(), d.ty));
            let base = d.var.name().rsplit(':').next().unwrap_or(d.var.name());
            locals.insert(format!("{}:{base}", t.name), (d.var.clone(), d.ty));
        }
    }
    Scope { shared: &shared, locals, thread: None }.cond(e)
}
