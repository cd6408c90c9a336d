//! Program representation: expressions, instructions, actions and commands.

mod command;
mod expr;
mod instr;
mod program;
mod sugar;
mod syntax;

pub use command::{Command, Model, Nesting};
pub use expr::{apply_binop, apply_unop, BinOp, EvalError, Expr, Oc, OcSet, UnOp, Value, ValueType, VarId, VarKind, VarRef};
pub use instr::{Action, Divisibility, FenceKind, Instr, SpecInstr};
pub use program::{Decl, Program, Thread};
pub(crate) use program::collect_ints;
pub use sugar::{
    cas, cas_result, desugar, faa, get_and_set, if_then, if_then_else, lock, repeat_until, unlock, while_do, Sugar,
};
pub use syntax::{datadep, dep_relations, ConstraintSets, DepRelations, Syntax, VarSets};
