use std::fmt;

use serde::Serialize;

use super::expr::{Expr, OcSet, Oc, Value, VarId, VarRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FenceKind {
    Store,
    Load,
    Full,
}

impl FenceKind {
    pub fn name(self) -> &'static str {
        match self {
            FenceKind::Store => "store",
            FenceKind::Load => "load",
            FenceKind::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    Assign { target: VarRef, rhs: Expr },
    Guard(Expr),
    Fence { kind: FenceKind, ocs: OcSet },
}

impl Instr {
    /// `target := rhs`; a local target drops any constraints.
    pub fn assign(target: VarRef, rhs: Expr) -> Self {
        let target = if target.var.is_shared() { target } else { VarRef::plain(target.var) };
        Instr::Assign { target, rhs }
    }

    pub fn assign_local(name: &str, rhs: Expr) -> Self {
        Self::assign(VarRef::local(name), rhs)
    }

    pub fn assign_shared(name: &str, rhs: Expr) -> Self {
        Self::assign(VarRef::shared(name), rhs)
    }

    pub fn guard(cond: Expr) -> Self {
        Instr::Guard(cond)
    }

    pub fn tau() -> Self {
        Instr::Guard(Expr::bool(true))
    }

    pub fn magic() -> Self {
        Instr::Guard(Expr::bool(false))
    }

    pub fn fence(kind: FenceKind, ocs: OcSet) -> Self {
        Instr::Fence { kind, ocs }
    }

    pub fn rel_fence() -> Self {
        Self::fence(FenceKind::Store, OcSet::single(Oc::Release))
    }

    pub fn acq_fence() -> Self {
        Self::fence(FenceKind::Load, OcSet::single(Oc::Acquire))
    }

    pub fn sc_fence() -> Self {
        Self::fence(FenceKind::Full, OcSet::single(Oc::SeqCst))
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Instr::Guard(_))
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Instr::Guard(Expr::Const(Value::Bool(true))))
    }

    /// The expression an instruction evaluates, if any.
    pub fn expr(&self) -> Option<&Expr> {
        match self {
            Instr::Assign { rhs, .. } => Some(rhs),
            Instr::Guard(e) => Some(e),
            Instr::Fence { .. } => None,
        }
    }

    pub fn with_expr(&self, e: Expr) -> Instr {
        match self {
            Instr::Assign { target, .. } => Instr::Assign { target: target.clone(), rhs: e },
            Instr::Guard(_) => Instr::Guard(e),
            Instr::Fence { .. } => self.clone(),
        }
    }

    pub fn target(&self) -> Option<&VarId> {
        match self {
            Instr::Assign { target, .. } => Some(&target.var),
            _ => None,
        }
    }

    pub(crate) fn map_expr(&self, f: impl FnOnce(&Expr) -> Expr) -> Instr {
        match self.expr() {
            Some(e) => self.with_expr(f(e)),
            None => self.clone(),
        }
    }

    pub(crate) fn fill_hole(&self, v: Value) -> Instr {
        self.map_expr(|e| e.fill_hole(v))
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Assign { target, rhs } => write!(f, "{target} := {rhs}"),
            Instr::Guard(e) => write!(f, "<{e}>"),
            Instr::Fence { kind, ocs } => {
                let named = match (kind, ocs.suffix().as_deref()) {
                    (FenceKind::Full, Some("sc")) => Some("sc"),
                    (FenceKind::Store, Some("rel")) => Some("rel"),
                    (FenceKind::Load, Some("acq")) => Some("acq"),
                    (_, None) => Some(kind.name()),
                    _ => None,
                };
                match named {
                    Some(n) => write!(f, "fence.{n}"),
                    None => write!(f, "fence.{}.{}", kind.name(), ocs.suffix().unwrap_or_default()),
                }
            }
        }
    }
}

/// A non-empty list of instructions executed as one indivisible step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action(Vec<Instr>);

impl Action {
    pub fn new(instrs: Vec<Instr>) -> Option<Self> {
        if instrs.is_empty() {
            None
        } else {
            Some(Action(instrs))
        }
    }

    pub fn single(i: Instr) -> Self {
        Action(vec![i])
    }

    pub fn tau() -> Self {
        Self::single(Instr::tau())
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.0
    }

    pub fn into_instrs(self) -> Vec<Instr> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_all_guards(&self) -> bool {
        self.0.iter().all(Instr::is_guard)
    }

    pub(crate) fn map(&self, f: impl FnMut(&Instr) -> Instr) -> Action {
        Action(self.0.iter().map(f).collect())
    }

    pub(crate) fn has_hole(&self) -> bool {
        let hole = VarId::hole();
        self.0.iter().any(|i| i.expr().is_some_and(|e| e.mentions(&hole)))
    }

    pub(crate) fn fill_hole(&self, v: Value) -> Action {
        self.map(|i| i.fill_hole(v))
    }
}

impl From<Instr> for Action {
    fn from(i: Instr) -> Self {
        Action::single(i)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        f.write_str("[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for Action {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Divisibility {
    Divisible,
    Indivisible,
}

/// An instruction tagged for incremental or whole evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpecInstr {
    pub instr: Instr,
    pub divisibility: Divisibility,
}

impl SpecInstr {
    pub fn indivisible(instr: Instr) -> Self {
        SpecInstr { instr, divisibility: Divisibility::Indivisible }
    }

    pub fn divisible(instr: Instr) -> Self {
        SpecInstr { instr, divisibility: Divisibility::Divisible }
    }

    pub fn tagged_divisible(&self) -> bool {
        self.divisibility == Divisibility::Divisible
    }
}
