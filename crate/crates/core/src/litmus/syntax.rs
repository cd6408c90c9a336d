//! Surface syntax of litmus files, kept for pretty-printing.

use std::fmt::{self, Write};

use crate::ast::{BinOp, Model, Nesting, Value};
use crate::reorder::{EvalOrder, FoldOrder, OcMore};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SOp {
    Bin(BinOp),
    Implies,
}

impl SOp {
    fn prec(self) -> u8 {
        match self {
            SOp::Implies => 1,
            SOp::Bin(BinOp::Or) => 2,
            SOp::Bin(BinOp::And) => 3,
            SOp::Bin(BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge) => 4,
            SOp::Bin(BinOp::Add | BinOp::Sub) => 5,
            SOp::Bin(BinOp::Mul) => 6,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            SOp::Implies => "->",
            SOp::Bin(b) => b.symbol(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExpr {
    Int(i64),
    Bool(bool),
    /// A name with its annotation suffixes as written.
    Var(String, Vec<String>),
    Not(Box<SExpr>),
    Neg(Box<SExpr>),
    Bin(SOp, Box<SExpr>, Box<SExpr>),
}

impl SExpr {
    fn prec(&self) -> u8 {
        match self {
            SExpr::Bin(op, ..) => op.prec(),
            SExpr::Int(i) if *i < 0 => 7,
            _ => 8,
        }
    }
}

fn write_var(f: &mut impl Write, name: &str, sfx: &[String]) -> fmt::Result {
    f.write_str(name)?;
    for s in sfx {
        write!(f, ".{s}")?;
    }
    Ok(())
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Int(i) => write!(f, "{i}"),
            SExpr::Bool(b) => write!(f, "{b}"),
            SExpr::Var(n, sfx) => write_var(f, n, sfx),
            SExpr::Not(a) | SExpr::Neg(a) => {
                f.write_str(if matches!(self, SExpr::Not(_)) { "!" } else { "-" })?;
                if a.prec() < 8 {
                    write!(f, "({a})")
                } else {
                    write!(f, "{a}")
                }
            }
            SExpr::Bin(op, a, b) => {
                let p = op.prec();
                let right_assoc = *op == SOp::Implies;
                let non_assoc = p == 4;
                let lp = a.prec() < p || (a.prec() == p && (right_assoc || non_assoc));
                let rp = b.prec() < p || (b.prec() == p && !right_assoc);
                let wrap = |f: &mut fmt::Formatter<'_>, e: &SExpr, par: bool| {
                    if par {
                        write!(f, "({e})")
                    } else {
                        write!(f, "{e}")
                    }
                };
                wrap(f, a, lp)?;
                write!(f, " {} ", op.symbol())?;
                wrap(f, b, rp)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FenceSpec {
    Sc,
    Rel,
    Acq,
    Store,
    Load,
    Full,
}

impl FenceSpec {
    pub const ALL: [FenceSpec; 6] =
        [FenceSpec::Sc, FenceSpec::Rel, FenceSpec::Acq, FenceSpec::Store, FenceSpec::Load, FenceSpec::Full];

    pub fn name(self) -> &'static str {
        match self {
            FenceSpec::Sc => "sc",
            FenceSpec::Rel => "rel",
            FenceSpec::Acq => "acq",
            FenceSpec::Store => "store",
            FenceSpec::Load => "load",
            FenceSpec::Full => "full",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rmw {
    Cas,
    Faa,
    GetSet,
}

impl Rmw {
    pub fn name(self) -> &'static str {
        match self {
            Rmw::Cas => "cas",
            Rmw::Faa => "faa",
            Rmw::GetSet => "getset",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Assign { divis: bool, target: String, sfx: Vec<String>, rhs: SExpr },
    Guard { divis: bool, cond: SExpr },
    Fence(FenceSpec),
    If { cond: SExpr, then: Vec<Stmt>, els: Option<Vec<Stmt>> },
    While { cond: SExpr, body: Vec<Stmt> },
    Repeat { body: Vec<Stmt>, until: SExpr },
    /// `r = op(x, ...)`, `.ar` when `ar`; only `cas` may omit the result.
    Rmw { op: Rmw, result: Option<String>, ar: bool, x: String, args: Vec<SExpr> },
    Atomic(Vec<Stmt>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDecl {
    pub name: String,
    pub init: Option<Value>,
    /// Explicit `: bool` on an uninitialised declaration.
    pub bool_ty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SThread {
    pub name: String,
    pub locals: Vec<SDecl>,
    pub body: Vec<Stmt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectKind {
    Allowed,
    Forbidden,
    Always,
}

impl ExpectKind {
    pub fn name(self) -> &'static str {
        match self {
            ExpectKind::Allowed => "allowed",
            ExpectKind::Forbidden => "forbidden",
            ExpectKind::Always => "always",
        }
    }
}

/// Configuration directives; `None` leaves the default or the caller's value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub model: Option<Model>,
    pub sfp: Option<bool>,
    pub ocmore: Option<OcMore>,
    pub forwarding: Option<bool>,
    pub optimize: Option<bool>,
    pub incremental: Option<bool>,
    pub eval_order: Option<EvalOrder>,
    pub fold_order: Option<FoldOrder>,
    pub guard_store: Option<bool>,
    pub load_coalesce: Option<bool>,
    pub write_coalesce: Option<bool>,
    pub elim_cond: Option<bool>,
    pub nesting: Option<Nesting>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LitmusFile {
    pub name: String,
    pub values: Option<Vec<i64>>,
    pub shared: Vec<SDecl>,
    pub threads: Vec<SThread>,
    pub settings: Settings,
    pub expectations: Vec<(ExpectKind, SExpr)>,
}

fn on_off(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

fn decl(d: &SDecl) -> String {
    match (d.init, d.bool_ty) {
        (Some(v), _) => format!("{} = {v}", d.name),
        (None, true) => format!("{}: bool", d.name),
        (None, false) => d.name.clone(),
    }
}

fn block(out: &mut String, stmts: &[Stmt], depth: usize) {
    for s in stmts {
        stmt(out, s, depth);
    }
}

fn stmt(out: &mut String, s: &Stmt, depth: usize) {
    let pad = "    ".repeat(depth);
    out.push_str(&pad);
    let _ = match s {
        Stmt::Assign { .. } | Stmt::Guard { .. } | Stmt::Fence(_) | Stmt::Rmw { .. } => {
            writeln!(out, "{};", simple(s))
        }
        Stmt::If { cond, then, els } => {
            let _ = writeln!(out, "if ({cond}) {{");
            block(out, then, depth + 1);
            match els {
                Some(e) => {
                    let _ = writeln!(out, "{pad}}} else {{");
                    block(out, e, depth + 1);
                    writeln!(out, "{pad}}}")
                }
                None => writeln!(out, "{pad}}}"),
            }
        }
        Stmt::While { cond, body } => {
            let _ = writeln!(out, "while ({cond}) {{");
            block(out, body, depth + 1);
            writeln!(out, "{pad}}}")
        }
        Stmt::Repeat { body, until } => {
            let _ = writeln!(out, "repeat {{");
            block(out, body, depth + 1);
            writeln!(out, "{pad}}} until ({until});")
        }
        Stmt::Atomic(body) => {
            let inner: Vec<String> = body.iter().map(|s| format!("{};", simple(s))).collect();
            writeln!(out, "atomic {{ {} }}", inner.join(" "))
        }
    };
}

fn simple(s: &Stmt) -> String {
    let divis = |d: bool| if d { "[divis] " } else { "" };
    match s {
        Stmt::Assign { divis: d, target, sfx, rhs } => {
            let mut t = String::new();
            let _ = write_var(&mut t, target, sfx);
            format!("{}{t} = {rhs}", divis(*d))
        }
        Stmt::Guard { divis: d, cond } => format!("{}guard({cond})", divis(*d)),
        Stmt::Fence(k) => format!("fence.{}", k.name()),
        Stmt::Rmw { op, result, ar, x, args } => {
            let mut s = String::new();
            if let Some(r) = result {
                s.push_str(r);
                s.push_str(" = ");
            }
            s.push_str(op.name());
            if *ar {
                s.push_str(".ar");
            }
            let args: Vec<String> = std::iter::once(x.clone()).chain(args.iter().map(|a| a.to_string())).collect();
            format!("{s}({})", args.join(", "))
        }
        _ => unreachable!("compound statement in simple position"),
    }
}

impl fmt::Display for LitmusFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "litmus \"{}\"", self.name)?;
        if let Some(v) = &self.values {
            let vs: Vec<String> = v.iter().map(|i| i.to_string()).collect();
            writeln!(f, "values {}", vs.join(", "))?;
        }
        if !self.shared.is_empty() {
            let ds: Vec<String> = self.shared.iter().map(decl).collect();
            writeln!(f, "shared {}", ds.join(", "))?;
        }
        for t in &self.threads {
            writeln!(f)?;
            writeln!(f, "thread {} {{", t.name)?;
            if !t.locals.is_empty() {
                let ds: Vec<String> = t.locals.iter().map(decl).collect();
                writeln!(f, "    local {};", ds.join(", "))?;
            }
            let mut body = String::new();
            block(&mut body, &t.body, 1);
            f.write_str(&body)?;
            writeln!(f, "}}")?;
        }
        let s = &self.settings;
        let mut lines: Vec<String> = Vec::new();
        if let Some(m) = s.model {
            lines.push(format!("model {}", m.name()));
        }
        let flags = [
            ("sfp", s.sfp),
            ("forwarding", s.forwarding),
            ("optimize", s.optimize),
            ("incremental", s.incremental),
            ("guardstore", s.guard_store),
            ("loadcoalesce", s.load_coalesce),
            ("writecoalesce", s.write_coalesce),
            ("elimcond", s.elim_cond),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                lines.push(format!("{k} {}", on_off(v)));
            }
        }
        if let Some(o) = s.ocmore {
            lines.push(format!("ocmore {}", o.letter()));
        }
        if let Some(e) = s.eval_order {
            lines.push(format!("evalorder {}", if e == EvalOrder::Nondet { "nondet" } else { "ltr" }));
        }
        if let Some(o) = s.fold_order {
            lines.push(format!("foldorder {}", if o == FoldOrder::NearestFirst { "nearest" } else { "earliest" }));
        }
        if let Some(n) = s.nesting {
            lines.push(format!("nesting {}", if n == Nesting::Right { "right" } else { "left" }));
        }
        if !lines.is_empty() {
            writeln!(f)?;
            for l in lines {
                writeln!(f, "{l}")?;
            }
        }
        if !self.expectations.is_empty() {
            writeln!(f)?;
            for (k, e) in &self.expectations {
                writeln!(f, "{} ({e})", k.name())?;
            }
        }
        Ok(())
    }
}
