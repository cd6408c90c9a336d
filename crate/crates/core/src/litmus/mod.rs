//! Litmus files: parsing, pretty-printing and running expectations.

mod lexer;
mod parser;
mod report;
mod resolve;
mod syntax;

use thiserror::Error;

use crate::ast::{Expr, Program};
use crate::reorder::ModelConfig;

pub use parser::{parse_surface, parse_surface_expr};
pub use report::{describe_config, run_litmus, ExpectationResult, Outcome, Report, ReportStats, TextReport, SCHEMA_VERSION};
pub use syntax::{ExpectKind, FenceSpec, LitmusFile, Rmw, SDecl, SExpr, SOp, SThread, Settings, Stmt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LitmusError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub kind: ExpectKind,
    pub cond: Expr,
    /// The condition as printed from the surface syntax.
    pub text: String,
}

/// A parsed and resolved litmus test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Litmus {
    pub file: LitmusFile,
    pub program: Program,
    pub expectations: Vec<Expectation>,
}

impl Litmus {
    /// The file's directives applied over the default configuration.
    pub fn config(&self) -> ModelConfig {
        self.file.settings.apply(ModelConfig::default())
    }

    /// Resolve an extra condition in the same scope as the expectations.
    pub fn condition(&self, src: &str) -> Result<Expr, LitmusError> {
        parse_condition(&self.program, src)
    }
}

impl Settings {
    pub fn apply(&self, mut cfg: ModelConfig) -> ModelConfig {
        if let Some(m) = self.model {
            cfg.base = m;
        }
        let flags = [
            (self.sfp, &mut cfg.sfp),
            (self.forwarding, &mut cfg.forwarding),
            (self.optimize, &mut cfg.optimize),
            (self.incremental, &mut cfg.incremental),
            (self.guard_store, &mut cfg.guard_store_reorder),
            (self.load_coalesce, &mut cfg.load_coalesce),
            (self.write_coalesce, &mut cfg.write_coalesce),
            (self.elim_cond, &mut cfg.elim_cond),
        ];
        for (v, slot) in flags {
            if let Some(v) = v {
                *slot = v;
            }
        }
        if let Some(o) = self.ocmore {
            cfg.ocmore = o;
        }
        if let Some(e) = self.eval_order {
            cfg.eval_order = e;
        }
        if let Some(o) = self.fold_order {
            cfg.fold_order = o;
        }
        cfg
    }
}

pub fn parse_litmus(src: &str) -> Result<Litmus, LitmusError> {
    let file = parse_surface(src)?;
    let (program, expectations) = resolve::resolve(&file)?;
    Ok(Litmus { file, program, expectations })
}

/// Parse a boolean condition over the declarations of `p`.
pub fn parse_condition(p: &Program, src: &str) -> Result<Expr, LitmusError> {
    resolve::resolve_condition(p, &parse_surface_expr(src)?)
}

/// Canonical text of a litmus file; parsing it gives back the same file.
pub fn print_litmus(f: &LitmusFile) -> String {
    f.to_string()
}

/// Resolve a standalone program from its surface form, with the expectations.
pub fn resolve_file(file: &LitmusFile) -> Result<(Program, Vec<Expectation>), LitmusError> {
    resolve::resolve(file)
}
