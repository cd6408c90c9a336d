use std::collections::BTreeSet;
use std::sync::Arc;

use super::command::Command;
use super::expr::{Expr, Value, ValueType, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub var: VarId,
    pub ty: ValueType,
    /// `None` means the variable ranges over the value domain initially.
    pub init: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thread {
    pub name: String,
    pub locals: Vec<Decl>,
    pub body: Arc<Command>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub shared: Vec<Decl>,
    pub threads: Vec<Thread>,
    pub domain: Option<Vec<Value>>,
}

impl Program {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.shared.iter().chain(self.threads.iter().flat_map(|t| t.locals.iter()))
    }

    pub fn decl(&self, v: &VarId) -> Option<&Decl> {
        self.decls().find(|d| &d.var == v)
    }

    pub fn lookup(&self, name: &str) -> Option<&Decl> {
        self.decls().find(|d| d.var.name() == name)
    }

    /// Threads composed in parallel, right-nested.
    pub fn composed(&self) -> Command {
        let mut it = self.threads.iter().rev();
        let Some(last) = it.next() else { return Command::Nil };
        it.fold((*last.body).clone(), |acc, t| Command::par((*t.body).clone(), acc))
    }

    /// Integer literals anywhere in the program bodies or initialisers.
    pub fn int_literals(&self) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for t in &self.threads {
            t.body.visit_instrs(&mut |i| {
                if let Some(e) = i.expr() {
                    collect_ints(e, &mut out);
                }
            });
        }
        for d in self.decls() {
            if let Some(Value::Int(i)) = d.init {
                out.insert(i);
            }
        }
        out
    }

    /// The declared value domain, or `{0, 1}` plus every integer literal.
    pub fn value_domain(&self) -> Vec<Value> {
        if let Some(d) = &self.domain {
            return d.clone();
        }
        let mut ints = self.int_literals();
        ints.insert(0);
        ints.insert(1);
        ints.into_iter().map(Value::Int).collect()
    }
}

pub(crate) fn collect_ints(e: &Expr, out: &mut BTreeSet<i64>) {
    match e {
        Expr::Const(Value::Int(i)) => {
            out.insert(*i);
        }
        Expr::Const(_) | Expr::Var(_) => {}
        Expr::Unary(_, a) => collect_ints(a, out),
        Expr::Binary(_, a, b) => {
            collect_ints(a, out);
            collect_ints(b, out);
        }
    }
}
