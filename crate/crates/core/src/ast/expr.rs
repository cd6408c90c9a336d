use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Which namespace a variable lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Local,
    Shared,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    name: Arc<str>,
    kind: VarKind,
}

const HOLE_NAME: &str = "?";

impl VarId {
    pub fn new(name: impl AsRef<str>, kind: VarKind) -> Self {
        VarId { name: Arc::from(name.as_ref()), kind }
    }

    pub fn local(name: impl AsRef<str>) -> Self {
        Self::new(name, VarKind::Local)
    }

    pub fn shared(name: impl AsRef<str>) -> Self {
        Self::new(name, VarKind::Shared)
    }

    /// Placeholder for a value that is being loaded but not yet chosen.
    pub(crate) fn hole() -> Self {
        Self::local(HOLE_NAME)
    }

    pub(crate) fn is_hole(&self) -> bool {
        self.kind == VarKind::Local && &*self.name == HOLE_NAME
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn is_shared(&self) -> bool {
        self.kind == VarKind::Shared
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Local => write!(f, "{}", self.name),
            VarKind::Shared => write!(f, "{}@shared", self.name),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for VarId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(i),
            Value::Bool(_) => None,
        }
    }

    pub fn ty(self) -> ValueType {
        match self {
            Value::Int(_) => ValueType::Int,
            Value::Bool(_) => ValueType::Bool,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(i) => s.serialize_i64(*i),
            Value::Bool(b) => s.serialize_bool(*b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueType {
    Int,
    Bool,
}

/// C11 ordering constraint on a single access.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oc {
    Relaxed,
    Release,
    Acquire,
    Consume,
    SeqCst,
}

impl Oc {
    pub const ALL: [Oc; 5] = [Oc::Relaxed, Oc::Release, Oc::Acquire, Oc::Consume, Oc::SeqCst];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn short(self) -> &'static str {
        match self {
            Oc::Relaxed => "rlx",
            Oc::Release => "rel",
            Oc::Acquire => "acq",
            Oc::Consume => "con",
            Oc::SeqCst => "sc",
        }
    }
}

/// A small set of ordering constraints.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OcSet(u8);

impl OcSet {
    pub const EMPTY: OcSet = OcSet(0);

    pub fn of(ocs: &[Oc]) -> Self {
        ocs.iter().fold(OcSet::EMPTY, |s, &o| s.with(o))
    }

    pub fn single(oc: Oc) -> Self {
        OcSet(oc.bit())
    }

    pub fn relaxed() -> Self {
        Self::single(Oc::Relaxed)
    }

    /// The `acq_rel` abbreviation.
    pub fn acq_rel() -> Self {
        Self::of(&[Oc::Acquire, Oc::Release])
    }

    pub fn with(self, oc: Oc) -> Self {
        OcSet(self.0 | oc.bit())
    }

    pub fn union(self, other: OcSet) -> Self {
        OcSet(self.0 | other.0)
    }

    pub fn intersect(self, other: OcSet) -> Self {
        OcSet(self.0 & other.0)
    }

    pub fn contains(self, oc: Oc) -> bool {
        self.0 & oc.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: OcSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Oc> {
        Oc::ALL.into_iter().filter(move |o| self.contains(*o))
    }

    /// Suffix form used by the printers, `None` for the empty set.
    pub fn suffix(self) -> Option<String> {
        if self.is_empty() {
            return None;
        }
        if self == OcSet::acq_rel() {
            return Some("ar".into());
        }
        Some(self.iter().map(Oc::short).collect::<Vec<_>>().join("."))
    }
}

impl fmt::Debug for OcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for OcSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// A variable occurrence together with its constraint annotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarRef {
    pub var: VarId,
    pub ocs: OcSet,
}

impl VarRef {
    pub fn new(var: VarId, ocs: OcSet) -> Self {
        VarRef { var, ocs }
    }

    /// Locals carry no constraints, shared variables default to relaxed.
    pub fn plain(var: VarId) -> Self {
        let ocs = if var.is_shared() { OcSet::relaxed() } else { OcSet::EMPTY };
        VarRef { var, ocs }
    }

    pub fn local(name: &str) -> Self {
        Self::plain(VarId::local(name))
    }

    pub fn shared(name: &str) -> Self {
        Self::plain(VarId::shared(name))
    }

    pub fn shared_with(name: &str, ocs: OcSet) -> Self {
        VarRef { var: VarId::shared(name), ocs }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.var)?;
        if self.var.is_shared() && self.ocs != OcSet::relaxed() {
            if let Some(s) = self.ocs.suffix() {
                write!(f, ".{s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul => 6,
        }
    }

    /// The relational operator describing the negated comparison.
    fn negated(self) -> Option<BinOp> {
        Some(match self {
            BinOp::Eq => BinOp::Ne,
            BinOp::Ne => BinOp::Eq,
            BinOp::Lt => BinOp::Ge,
            BinOp::Le => BinOp::Gt,
            BinOp::Gt => BinOp::Le,
            BinOp::Ge => BinOp::Lt,
            _ => return None,
        })
    }

    pub fn is_boolean_result(self) -> bool {
        !matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(VarId),
    #[error("type mismatch in `{0}`")]
    Type(String),
    #[error("integer overflow")]
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Const(Value),
    Var(VarRef),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(i: i64) -> Self {
        Expr::Const(Value::Int(i))
    }

    pub fn bool(b: bool) -> Self {
        Expr::Const(Value::Bool(b))
    }

    pub fn var(r: VarRef) -> Self {
        Expr::Var(r)
    }

    pub fn local(name: &str) -> Self {
        Expr::Var(VarRef::local(name))
    }

    pub fn shared(name: &str) -> Self {
        Expr::Var(VarRef::shared(name))
    }

    pub fn shared_with(name: &str, ocs: OcSet) -> Self {
        Expr::Var(VarRef::shared_with(name, ocs))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn eq(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::Eq, a, b)
    }

    pub fn ne(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::Ne, a, b)
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::And, a, b)
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::Or, a, b)
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::Add, a, b)
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::Sub, a, b)
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Self::bin(BinOp::Mul, a, b)
    }

    pub fn neg(a: Expr) -> Self {
        Expr::Unary(UnOp::Neg, Box::new(a))
    }

    /// Logical negation that pushes through comparisons and double negation,
    /// so `!(r != 42)` comes out as `r == 42`.
    pub fn not(e: Expr) -> Self {
        match e {
            Expr::Const(Value::Bool(b)) => Expr::bool(!b),
            Expr::Unary(UnOp::Not, inner) => *inner,
            Expr::Binary(op, a, b) if op.negated().is_some() => {
                Expr::Binary(op.negated().unwrap(), a, b)
            }
            other => Expr::Unary(UnOp::Not, Box::new(other)),
        }
    }

    pub fn as_const(&self) -> Option<Value> {
        match self {
            Expr::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Expr::Const(_))
    }

    /// Every variable occurrence, left to right.
    pub fn refs(&self) -> Vec<&VarRef> {
        let mut out = Vec::new();
        self.visit_refs(&mut |r| out.push(r));
        out
    }

    pub(crate) fn visit_refs<'a>(&'a self, f: &mut impl FnMut(&'a VarRef)) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(r) => f(r),
            Expr::Unary(_, a) => a.visit_refs(f),
            Expr::Binary(_, a, b) => {
                a.visit_refs(f);
                b.visit_refs(f);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.refs().into_iter().map(|r| r.var.clone()).collect()
    }

    pub fn mentions(&self, v: &VarId) -> bool {
        self.refs().iter().any(|r| &r.var == v)
    }

    pub fn has_shared(&self) -> bool {
        self.refs().iter().any(|r| r.var.is_shared())
    }

    pub fn ocs(&self) -> OcSet {
        self.refs().iter().fold(OcSet::EMPTY, |s, r| s.union(r.ocs))
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    pub fn var_occurrences(&self) -> usize {
        self.refs().len()
    }

    /// Replace every reference to `v`, whatever its annotation, by `with`.
    pub fn substitute(&self, v: &VarId, with: &Expr) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(r) if &r.var == v => with.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.substitute(v, with))),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.substitute(v, with)), Box::new(b.substitute(v, with)))
            }
        }
    }

    /// Rewrite every variable reference.
    pub fn map_refs(&self, f: &impl Fn(&VarRef) -> VarRef) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(r) => Expr::Var(f(r)),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.map_refs(f))),
            Expr::Binary(op, a, b) => Expr::Binary(*op, Box::new(a.map_refs(f)), Box::new(b.map_refs(f))),
        }
    }

    /// Evaluate every closed subterm. Subterms whose evaluation errors are kept.
    pub fn fold_constants(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Unary(op, a) => {
                let a = a.fold_constants();
                if let Some(v) = a.as_const() {
                    if let Ok(r) = apply_unop(*op, v) {
                        return Expr::Const(r);
                    }
                }
                Expr::Unary(*op, Box::new(a))
            }
            Expr::Binary(op, a, b) => {
                let a = a.fold_constants();
                let b = b.fold_constants();
                if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
                    if let Ok(r) = apply_binop(*op, x, y) {
                        return Expr::Const(r);
                    }
                }
                Expr::Binary(*op, Box::new(a), Box::new(b))
            }
        }
    }

    pub fn eval(&self, env: &impl Fn(&VarId) -> Option<Value>) -> Result<Value, EvalError> {
        match self {
            Expr::Const(v) => Ok(*v),
            Expr::Var(r) => env(&r.var).ok_or_else(|| EvalError::Unbound(r.var.clone())),
            Expr::Unary(op, a) => apply_unop(*op, a.eval(env)?),
            Expr::Binary(op, a, b) => apply_binop(*op, a.eval(env)?, b.eval(env)?),
        }
    }

    /// Replace every occurrence of the load placeholder.
    pub(crate) fn fill_hole(&self, v: Value) -> Expr {
        self.substitute(&VarId::hole(), &Expr::Const(v))
    }
}

pub fn apply_unop(op: UnOp, v: Value) -> Result<Value, EvalError> {
    match (op, v) {
        (UnOp::Neg, Value::Int(i)) => i.checked_neg().map(Value::Int).ok_or(EvalError::Overflow),
        (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
        _ => Err(EvalError::Type(format!("{op:?} {v}"))),
    }
}

pub fn apply_binop(op: BinOp, x: Value, y: Value) -> Result<Value, EvalError> {
    use Value::{Bool, Int};
    let mismatch = || EvalError::Type(format!("{x} {} {y}", op.symbol()));
    Ok(match (op, x, y) {
        (BinOp::Add, Int(a), Int(b)) => Int(a.checked_add(b).ok_or(EvalError::Overflow)?),
        (BinOp::Sub, Int(a), Int(b)) => Int(a.checked_sub(b).ok_or(EvalError::Overflow)?),
        (BinOp::Mul, Int(a), Int(b)) => Int(a.checked_mul(b).ok_or(EvalError::Overflow)?),
        (BinOp::Eq, a, b) if a.ty() == b.ty() => Bool(a == b),
        (BinOp::Ne, a, b) if a.ty() == b.ty() => Bool(a != b),
        (BinOp::Lt, Int(a), Int(b)) => Bool(a < b),
        (BinOp::Le, Int(a), Int(b)) => Bool(a <= b),
        (BinOp::Gt, Int(a), Int(b)) => Bool(a > b),
        (BinOp::Ge, Int(a), Int(b)) => Bool(a >= b),
        (BinOp::And, Bool(a), Bool(b)) => Bool(a && b),
        (BinOp::Or, Bool(a), Bool(b)) => Bool(a || b),
        _ => return Err(mismatch()),
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, 0, f)
    }
}

fn fmt_expr(e: &Expr, outer: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(v) => write!(f, "{v}"),
        Expr::Var(r) => write!(f, "{r}"),
        Expr::Unary(op, a) => {
            f.write_str(match op {
                UnOp::Neg => "-",
                UnOp::Not => "!",
            })?;
            fmt_expr(a, 7, f)
        }
        Expr::Binary(op, a, b) => {
            let p = op.precedence();
            let paren = p <= outer;
            if paren {
                f.write_str("(")?;
            }
            // left-associative: the left child may share our precedence
            fmt_expr(a, p - 1, f)?;
            write!(f, " {} ", op.symbol())?;
            fmt_expr(b, p, f)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}
