use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::ast::{Action, Instr, Program, Syntax, Value, ValueType, VarId};

/// Total mapping from the declared variables to values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(BTreeMap<VarId, Value>);

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, Value)>) -> Self {
        State(pairs.into_iter().collect())
    }

    pub fn get(&self, v: &VarId) -> Option<Value> {
        self.0.get(v).copied()
    }

    pub fn get_named(&self, name: &str) -> Option<Value> {
        self.0.iter().find(|(k, _)| k.name() == name).map(|(_, v)| *v)
    }

    pub fn set(&mut self, v: VarId, val: Value) {
        self.0.insert(v, val);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Value)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, e: &crate::ast::Expr) -> Result<Value, crate::ast::EvalError> {
        e.eval(&|v| self.get(v))
    }

    /// Restrict to the given variables.
    pub fn project(&self, vars: &BTreeSet<VarId>) -> State {
        State(self.0.iter().filter(|(k, _)| vars.contains(k)).map(|(k, v)| (k.clone(), *v)).collect())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (var, val)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{var}={val}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k.name(), v)))
    }
}

/// Apply an action's effects in order; `None` when a guard fails.
pub fn apply_action(state: &State, a: &Action) -> Option<State> {
    let mut s = state.clone();
    for i in a.instrs() {
        match i {
            Instr::Assign { target, rhs } => {
                let v = s.eval(rhs).ok()?;
                s.set(target.var.clone(), v);
            }
            Instr::Guard(e) => {
                if s.eval(e).ok()? != Value::Bool(true) {
                    return None;
                }
            }
            Instr::Fence { .. } => {}
        }
    }
    Some(s)
}

/// Finite value domain used for symbolic loads and label classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    values: Vec<Value>,
    types: BTreeMap<VarId, ValueType>,
}

impl Domain {
    pub fn new(values: impl IntoIterator<Item = Value>) -> Self {
        let set: BTreeSet<Value> = values.into_iter().collect();
        Domain { values: set.into_iter().collect(), types: BTreeMap::new() }
    }

    pub fn with_type(mut self, v: VarId, ty: ValueType) -> Self {
        self.types.insert(v, ty);
        self
    }

    pub fn for_program(p: &Program) -> Self {
        let mut d = Domain::new(p.value_domain());
        for decl in p.decls() {
            d.types.insert(decl.var.clone(), decl.ty);
        }
        d
    }

    /// `{0, 1}`, every integer literal, and both booleans.
    pub fn for_commands<'a>(cs: impl IntoIterator<Item = &'a crate::ast::Command>) -> Self {
        let mut ints = BTreeSet::from([0, 1]);
        for c in cs {
            c.visit_instrs(&mut |i| {
                if let Some(e) = i.expr() {
                    crate::ast::collect_ints(e, &mut ints);
                }
            });
        }
        let vals = ints.into_iter().map(Value::Int).chain([Value::Bool(false), Value::Bool(true)]);
        Domain::new(vals)
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn type_of(&self, v: &VarId) -> Option<ValueType> {
        self.types.get(v).copied()
    }

    pub fn values_for(&self, v: &VarId) -> Vec<Value> {
        match self.types.get(v) {
            Some(ValueType::Bool) => vec![Value::Bool(false), Value::Bool(true)],
            Some(ValueType::Int) => self.values.iter().copied().filter(|x| x.ty() == ValueType::Int).collect(),
            None => self.values.clone(),
        }
    }

    /// Every assignment of domain values to `vars`, or `None` past `cap`.
    pub fn assignments(&self, vars: &[VarId], cap: usize) -> Option<Vec<State>> {
        let mut out = vec![State::new()];
        for v in vars {
            let vals = self.values_for(v);
            if out.len().saturating_mul(vals.len()) > cap {
                return None;
            }
            out = out
                .into_iter()
                .flat_map(|s| {
                    vals.iter().map(move |x| {
                        let mut s2 = s.clone();
                        s2.set(v.clone(), *x);
                        s2
                    })
                })
                .collect();
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Visible,
    Silent,
    Infeasible,
}

const CLASSIFY_CAP: usize = 4096;

/// Silent: guards only, no shared variable, true in every state over the
/// domain. Infeasible: no state over the domain lets the action through.
pub fn classify(a: &Action, dom: &Domain) -> LabelKind {
    let vs = a.var_sets();
    let reads: Vec<VarId> = vs.rv.iter().cloned().collect();
    let Some(states) = dom.assignments(&reads, CLASSIFY_CAP) else {
        return LabelKind::Visible;
    };
    let mut passed = 0usize;
    let mut well_typed = 0usize;
    for s in &states {
        match run_checked(s, a) {
            Outcome::Pass => {
                passed += 1;
                well_typed += 1;
            }
            Outcome::Blocked => well_typed += 1,
            Outcome::Ill => {}
        }
    }
    if passed == 0 {
        return LabelKind::Infeasible;
    }
    if a.is_all_guards() && vs.sv.is_empty() && passed == well_typed {
        LabelKind::Silent
    } else {
        LabelKind::Visible
    }
}

enum Outcome {
    Pass,
    Blocked,
    Ill,
}

fn run_checked(state: &State, a: &Action) -> Outcome {
    let mut s = state.clone();
    for i in a.instrs() {
        match i {
            Instr::Assign { target, rhs } => match s.eval(rhs) {
                Ok(v) => s.set(target.var.clone(), v),
                Err(_) => return Outcome::Ill,
            },
            Instr::Guard(e) => match s.eval(e) {
                Ok(Value::Bool(true)) => {}
                Ok(Value::Bool(false)) => return Outcome::Blocked,
                _ => return Outcome::Ill,
            },
            Instr::Fence { .. } => {}
        }
    }
    Outcome::Pass
}
