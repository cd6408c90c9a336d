use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::instr::{Action, Instr, SpecInstr};

/// Which reordering relation a composition uses. `C11` nodes take the
/// configured base model, so a file written for C11 can be re-run under SC.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Model {
    #[serde(rename = "sc")]
    Sc,
    #[serde(rename = "par")]
    Par,
    #[serde(rename = "c11")]
    C11,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Sc => "sc",
            Model::Par => "par",
            Model::C11 => "c11",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Nesting {
    #[default]
    Right,
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Nil,
    Stmt(Vec<SpecInstr>),
    Pseq(Model, Arc<Command>, Arc<Command>),
    Choice(Arc<Command>, Arc<Command>),
    Iterate(Model, Arc<Command>),
}

impl Command {
    pub fn nil() -> Self {
        Command::Nil
    }

    pub fn stmt(instrs: Vec<SpecInstr>) -> Self {
        if instrs.is_empty() {
            Command::Nil
        } else {
            Command::Stmt(instrs)
        }
    }

    pub fn action(a: Action) -> Self {
        Command::Stmt(a.into_instrs().into_iter().map(SpecInstr::indivisible).collect())
    }

    pub fn instr(i: Instr) -> Self {
        Command::Stmt(vec![SpecInstr::indivisible(i)])
    }

    pub fn guard(cond: super::Expr) -> Self {
        Self::instr(Instr::guard(cond))
    }

    /// Sequential composition dropping `Nil` units.
    pub fn seq(m: Model, a: Command, b: Command) -> Self {
        match (a, b) {
            (Command::Nil, b) => b,
            (a, Command::Nil) => a,
            (a, b) => Command::Pseq(m, Arc::new(a), Arc::new(b)),
        }
    }

    pub fn c11(a: Command, b: Command) -> Self {
        Self::seq(Model::C11, a, b)
    }

    pub fn sc(a: Command, b: Command) -> Self {
        Self::seq(Model::Sc, a, b)
    }

    pub fn par(a: Command, b: Command) -> Self {
        Self::seq(Model::Par, a, b)
    }

    pub fn choice(a: Command, b: Command) -> Self {
        Command::Choice(Arc::new(a), Arc::new(b))
    }

    pub fn iterate(m: Model, body: Command) -> Self {
        Command::Iterate(m, Arc::new(body))
    }

    /// Chain commands under one model, right-nested by default.
    pub fn seq_all(m: Model, cmds: Vec<Command>, nesting: Nesting) -> Self {
        match nesting {
            Nesting::Right => cmds.into_iter().rev().fold(Command::Nil, |acc, c| Self::seq(m, c, acc)),
            Nesting::Left => cmds.into_iter().fold(Command::Nil, |acc, c| Self::seq(m, acc, c)),
        }
    }

    /// `c^0 = Nil`, `c^(n+1) = c ;m c^n`.
    pub fn unroll(m: Model, body: &Arc<Command>, n: usize) -> Self {
        let mut acc = Command::Nil;
        for _ in 0..n {
            acc = match acc {
                Command::Nil => (**body).clone(),
                rest => Command::Pseq(m, body.clone(), Arc::new(rest)),
            };
        }
        acc
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Command::Nil)
    }

    /// Erase `Nil` units everywhere.
    pub fn canonical(&self) -> Command {
        match self {
            Command::Nil | Command::Stmt(_) => self.clone(),
            Command::Pseq(m, a, b) => Self::seq(*m, a.canonical(), b.canonical()),
            Command::Choice(a, b) => Self::choice(a.canonical(), b.canonical()),
            Command::Iterate(m, b) => Self::iterate(*m, b.canonical()),
        }
    }

    pub fn contains_iterate(&self) -> bool {
        match self {
            Command::Nil | Command::Stmt(_) => false,
            Command::Pseq(_, a, b) | Command::Choice(a, b) => a.contains_iterate() || b.contains_iterate(),
            Command::Iterate(..) => true,
        }
    }

    /// All instructions in the tree, in syntactic order.
    pub fn instrs(&self) -> Vec<&Instr> {
        let mut out = Vec::new();
        self.visit_instrs(&mut |i| out.push(i));
        out
    }

    pub(crate) fn visit_instrs<'a>(&'a self, f: &mut impl FnMut(&'a Instr)) {
        match self {
            Command::Nil => {}
            Command::Stmt(s) => s.iter().for_each(|si| f(&si.instr)),
            Command::Pseq(_, a, b) | Command::Choice(a, b) => {
                a.visit_instrs(f);
                b.visit_instrs(f);
            }
            Command::Iterate(_, b) => b.visit_instrs(f),
        }
    }

    /// Rebuild the tree bottom-up; `stmt` may drop a statement by returning `Nil`.
    pub fn rebuild(
        &self,
        model: &impl Fn(Model) -> Model,
        stmt: &impl Fn(&[SpecInstr]) -> Command,
    ) -> Command {
        match self {
            Command::Nil => Command::Nil,
            Command::Stmt(s) => stmt(s),
            Command::Pseq(m, a, b) => Self::seq(model(*m), a.rebuild(model, stmt), b.rebuild(model, stmt)),
            Command::Choice(a, b) => Self::choice(a.rebuild(model, stmt), b.rebuild(model, stmt)),
            Command::Iterate(m, b) => Self::iterate(model(*m), b.rebuild(model, stmt)),
        }
    }
}

impl Command {
    /// Apply `f` to every instruction, keeping the tree shape.
    pub fn map_instrs(&self, f: &impl Fn(&Instr) -> Instr) -> Command {
        match self {
            Command::Nil => Command::Nil,
            Command::Stmt(s) => Command::Stmt(
                s.iter().map(|si| SpecInstr { instr: f(&si.instr), divisibility: si.divisibility }).collect(),
            ),
            Command::Pseq(m, a, b) => Command::Pseq(*m, Arc::new(a.map_instrs(f)), Arc::new(b.map_instrs(f))),
            Command::Choice(a, b) => Command::Choice(Arc::new(a.map_instrs(f)), Arc::new(b.map_instrs(f))),
            Command::Iterate(m, b) => Command::Iterate(*m, Arc::new(b.map_instrs(f))),
        }
    }

    pub(crate) fn fill_hole(&self, v: super::Value) -> Command {
        self.map_instrs(&|i| i.fill_hole(v))
    }
}

impl From<Action> for Command {
    fn from(a: Action) -> Self {
        Command::action(a)
    }
}

impl From<Instr> for Command {
    fn from(i: Instr) -> Self {
        Command::instr(i)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_cmd(self, false, f)
    }
}

fn fmt_cmd(c: &Command, nested: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let open = |f: &mut fmt::Formatter<'_>| if nested { f.write_str("(") } else { Ok(()) };
    let close = |f: &mut fmt::Formatter<'_>| if nested { f.write_str(")") } else { Ok(()) };
    match c {
        Command::Nil => f.write_str("nil"),
        Command::Stmt(s) => {
            if s.len() == 1 {
                return fmt_spec(&s[0], f);
            }
            f.write_str("[")?;
            for (k, si) in s.iter().enumerate() {
                if k > 0 {
                    f.write_str("; ")?;
                }
                fmt_spec(si, f)?;
            }
            f.write_str("]")
        }
        Command::Pseq(m, a, b) => {
            open(f)?;
            fmt_cmd(a, true, f)?;
            match m {
                Model::C11 => f.write_str(" ; ")?,
                Model::Sc => f.write_str(" ;sc ")?,
                Model::Par => f.write_str(" || ")?,
            }
            fmt_cmd(b, true, f)?;
            close(f)
        }
        Command::Choice(a, b) => {
            open(f)?;
            fmt_cmd(a, true, f)?;
            f.write_str(" [] ")?;
            fmt_cmd(b, true, f)?;
            close(f)
        }
        Command::Iterate(m, b) => {
            f.write_str("(")?;
            fmt_cmd(b, false, f)?;
            match m {
                Model::C11 => f.write_str(")*"),
                Model::Sc => f.write_str(")*sc"),
                Model::Par => f.write_str(")*par"),
            }
        }
    }
}

fn fmt_spec(si: &SpecInstr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if si.tagged_divisible() {
        f.write_str("[divis] ")?;
    }
    write!(f, "{}", si.instr)
}
