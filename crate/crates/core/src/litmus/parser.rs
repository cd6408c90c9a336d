use crate::ast::{BinOp, Model, Nesting, Value};
use crate::reorder::{EvalOrder, FoldOrder, OcMore};

use super::lexer::{lex, Tok, Token};
use super::syntax::{ExpectKind, FenceSpec, LitmusFile, Rmw, SDecl, SExpr, SOp, SThread, Settings, Stmt};
use super::LitmusError;

pub(crate) const SUFFIXES: [&str; 6] = ["rlx", "rel", "acq", "con", "sc", "ar"];

const RESERVED: [&str; 15] = [
    "if", "else", "while", "repeat", "until", "guard", "fence", "cas", "faa", "getset", "atomic", "true", "false",
    "local", "divis",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type R<T> = Result<T, LitmusError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> R<T> {
        let t = &self.toks[self.pos];
        Err(LitmusError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of file".into(),
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> R<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, k: &str) -> R<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> R<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn var_name(&mut self) -> R<String> {
        if let Tok::Ident(s) = self.peek() {
            if RESERVED.contains(&s.as_str()) {
                return self.err(format!("`{s}` is reserved"));
            }
        }
        self.ident()
    }

    fn int(&mut self) -> R<i64> {
        let neg = self.eat("-");
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(if neg { -i } else { i })
            }
            _ => self.err(format!("expected an integer, found {}", self.describe())),
        }
    }

    fn literal(&mut self) -> R<Value> {
        if self.is_kw("true") || self.is_kw("false") {
            let b = self.ident()? == "true";
            return Ok(Value::Bool(b));
        }
        Ok(Value::Int(self.int()?))
    }

    fn decl(&mut self) -> R<SDecl> {
        let name = self.var_name()?;
        if self.eat("=") {
            return Ok(SDecl { name, init: Some(self.literal()?), bool_ty: false });
        }
        if self.eat(":") {
            let ty = self.ident()?;
            return match ty.as_str() {
                "bool" => Ok(SDecl { name, init: None, bool_ty: true }),
                "int" => Ok(SDecl { name, init: None, bool_ty: false }),
                _ => self.err(format!("unknown type `{ty}`")),
            };
        }
        Ok(SDecl { name, init: None, bool_ty: false })
    }

    fn suffixes(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while self.is_punct(".") {
            match self.peek_at(1) {
                Tok::Ident(s) if SUFFIXES.contains(&s.as_str()) => {
                    let s = s.clone();
                    self.bump();
                    self.bump();
                    out.push(s);
                }
                _ => break,
            }
        }
        out
    }

    // expressions, loosest first

    fn expr(&mut self) -> R<SExpr> {
        let a = self.or()?;
        if self.eat("->") {
            let b = self.expr()?;
            return Ok(SExpr::Bin(SOp::Implies, Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn or(&mut self) -> R<SExpr> {
        let mut a = self.and()?;
        while self.eat("||") {
            let b = self.and()?;
            a = SExpr::Bin(SOp::Bin(BinOp::Or), Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn and(&mut self) -> R<SExpr> {
        let mut a = self.cmp()?;
        while self.eat("&&") {
            let b = self.cmp()?;
            a = SExpr::Bin(SOp::Bin(BinOp::And), Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn cmp_op(&self) -> Option<BinOp> {
        let Tok::Punct(p) = self.peek() else { return None };
        Some(match *p {
            "==" => BinOp::Eq,
            "!=" => BinOp::Ne,
            "<" => BinOp::Lt,
            "<=" => BinOp::Le,
            ">" => BinOp::Gt,
            ">=" => BinOp::Ge,
            _ => return None,
        })
    }

    fn cmp(&mut self) -> R<SExpr> {
        let a = self.add()?;
        let Some(op) = self.cmp_op() else { return Ok(a) };
        self.bump();
        let b = self.add()?;
        if self.cmp_op().is_some() {
            return self.err("comparisons do not chain; add parentheses");
        }
        Ok(SExpr::Bin(SOp::Bin(op), Box::new(a), Box::new(b)))
    }

    fn add(&mut self) -> R<SExpr> {
        let mut a = self.mul()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(a);
            };
            let b = self.mul()?;
            a = SExpr::Bin(SOp::Bin(op), Box::new(a), Box::new(b));
        }
    }

    fn mul(&mut self) -> R<SExpr> {
        let mut a = self.unary()?;
        while self.eat("*") {
            let b = self.unary()?;
            a = SExpr::Bin(SOp::Bin(BinOp::Mul), Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn unary(&mut self) -> R<SExpr> {
        if self.eat("!") {
            return Ok(SExpr::Not(Box::new(self.unary()?)));
        }
        if self.eat("-") {
            return Ok(match self.unary()? {
                SExpr::Int(i) if i.checked_neg().is_some() => SExpr::Int(-i),
                e => SExpr::Neg(Box::new(e)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> R<SExpr> {
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(SExpr::Int(i))
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(SExpr::Bool(s == "true"))
            }
            Tok::Ident(_) => {
                let mut name = self.var_name()?;
                // thread-qualified local, `t0:r`
                if self.is_punct(":") && matches!(self.peek_at(1), Tok::Ident(_)) {
                    self.bump();
                    name = format!("{name}:{}", self.var_name()?);
                }
                let sfx = self.suffixes();
                Ok(SExpr::Var(name, sfx))
            }
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn paren_expr(&mut self) -> R<SExpr> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    // statements

    fn block(&mut self) -> R<Vec<Stmt>> {
        self.expect("{")?;
        let mut out = Vec::new();
        while !self.is_punct("}") {
            if matches!(self.peek(), Tok::Eof) {
                return self.err("unclosed `{`");
            }
            out.push(self.stmt()?);
        }
        self.bump();
        Ok(out)
    }

    fn rmw_tail(&mut self, op: Rmw, result: Option<String>) -> R<Stmt> {
        let ar = if self.is_punct(".") {
            self.bump();
            self.expect_kw("ar")?;
            true
        } else {
            false
        };
        self.expect("(")?;
        let x = self.var_name()?;
        let mut args = Vec::new();
        while self.eat(",") {
            args.push(self.expr()?);
        }
        self.expect(")")?;
        let want = if op == Rmw::Cas { 2 } else { 1 };
        if args.len() != want {
            return self.err(format!("`{}` takes {} argument(s) after the variable", op.name(), want));
        }
        Ok(Stmt::Rmw { op, result, ar, x, args })
    }

    fn rmw_op(&self) -> Option<Rmw> {
        let Tok::Ident(s) = self.peek() else { return None };
        let op = match s.as_str() {
            "cas" => Rmw::Cas,
            "faa" => Rmw::Faa,
            "getset" => Rmw::GetSet,
            _ => return None,
        };
        matches!(self.peek_at(1), Tok::Punct("(" | ".")).then_some(op)
    }

    /// Assignment, guard, fence or read-modify-write, without the `;`.
    fn simple(&mut self) -> R<Stmt> {
        let divis = if self.is_punct("[") {
            self.bump();
            self.expect_kw("divis")?;
            self.expect("]")?;
            true
        } else {
            false
        };
        if self.is_kw("guard") {
            self.bump();
            return Ok(Stmt::Guard { divis, cond: self.paren_expr()? });
        }
        if divis {
            let target = self.var_name()?;
            let sfx = self.suffixes();
            self.expect("=")?;
            return Ok(Stmt::Assign { divis, target, sfx, rhs: self.expr()? });
        }
        if self.is_kw("fence") {
            self.bump();
            self.expect(".")?;
            let k = self.ident()?;
            return match FenceSpec::ALL.into_iter().find(|f| f.name() == k) {
                Some(f) => Ok(Stmt::Fence(f)),
                None => self.err(format!("unknown fence `{k}`")),
            };
        }
        if self.rmw_op() == Some(Rmw::Cas) {
            self.bump();
            return self.rmw_tail(Rmw::Cas, None);
        }
        let target = self.var_name()?;
        let sfx = self.suffixes();
        self.expect("=")?;
        if let Some(op) = self.rmw_op() {
            if !sfx.is_empty() {
                return self.err("the result of a read-modify-write takes no annotation");
            }
            self.bump();
            return self.rmw_tail(op, Some(target));
        }
        Ok(Stmt::Assign { divis, target, sfx, rhs: self.expr()? })
    }

    fn stmt(&mut self) -> R<Stmt> {
        if self.is_kw("if") {
            self.bump();
            let cond = self.paren_expr()?;
            let then = self.block()?;
            let els = if self.is_kw("else") {
                self.bump();
                if self.is_kw("if") {
                    Some(vec![self.stmt()?])
                } else {
                    Some(self.block()?)
                }
            } else {
                None
            };
            return Ok(Stmt::If { cond, then, els });
        }
        if self.is_kw("while") {
            self.bump();
            let cond = self.paren_expr()?;
            return Ok(Stmt::While { cond, body: self.block()? });
        }
        if self.is_kw("repeat") {
            self.bump();
            let body = self.block()?;
            self.expect_kw("until")?;
            let until = self.paren_expr()?;
            self.expect(";")?;
            return Ok(Stmt::Repeat { body, until });
        }
        if self.is_kw("atomic") {
            self.bump();
            self.expect("{")?;
            let mut body = Vec::new();
            while !self.eat("}") {
                let s = self.simple()?;
                if matches!(s, Stmt::Rmw { .. }) {
                    return self.err("read-modify-writes cannot nest inside `atomic`");
                }
                self.expect(";")?;
                body.push(s);
            }
            return Ok(Stmt::Atomic(body));
        }
        let s = self.simple()?;
        self.expect(";")?;
        Ok(s)
    }

    fn on_off(&mut self) -> R<bool> {
        match self.ident()?.as_str() {
            "on" => Ok(true),
            "off" => Ok(false),
            other => self.err(format!("expected `on` or `off`, found `{other}`")),
        }
    }

    fn thread(&mut self) -> R<SThread> {
        let name = self.var_name()?;
        self.expect("{")?;
        let mut locals = Vec::new();
        while self.is_kw("local") {
            self.bump();
            locals.push(self.decl()?);
            while self.eat(",") {
                locals.push(self.decl()?);
            }
            self.expect(";")?;
        }
        let mut body = Vec::new();
        while !self.eat("}") {
            if matches!(self.peek(), Tok::Eof) {
                return self.err("unclosed thread body");
            }
            if self.is_kw("local") {
                return self.err("`local` declarations must come first in a thread");
            }
            body.push(self.stmt()?);
        }
        Ok(SThread { name, locals, body })
    }

    fn file(&mut self) -> R<LitmusFile> {
        self.expect_kw("litmus")?;
        let name = match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                s
            }
            _ => return self.err("expected the test name as a string"),
        };
        let mut f = LitmusFile {
            name,
            values: None,
            shared: Vec::new(),
            threads: Vec::new(),
            settings: Settings::default(),
            expectations: Vec::new(),
        };
        loop {
            if matches!(self.peek(), Tok::Eof) {
                return Ok(f);
            }
            let kw = self.ident()?;
            let s = &mut f.settings;
            match kw.as_str() {
                "values" => {
                    let mut v = vec![self.int()?];
                    while self.eat(",") {
                        v.push(self.int()?);
                    }
                    f.values.get_or_insert_with(Vec::new).extend(v);
                }
                "shared" => {
                    f.shared.push(self.decl()?);
                    while self.eat(",") {
                        f.shared.push(self.decl()?);
                    }
                }
                "thread" => f.threads.push(self.thread()?),
                "model" => {
                    s.model = Some(match self.ident()?.as_str() {
                        "c11" => Model::C11,
                        "sc" => Model::Sc,
                        "par" => Model::Par,
                        other => return self.err(format!("unknown model `{other}`")),
                    })
                }
                "sfp" => s.sfp = Some(self.on_off()?),
                "forwarding" => s.forwarding = Some(self.on_off()?),
                "optimize" => s.optimize = Some(self.on_off()?),
                "incremental" => s.incremental = Some(self.on_off()?),
                "guardstore" => s.guard_store = Some(self.on_off()?),
                "loadcoalesce" => s.load_coalesce = Some(self.on_off()?),
                "writecoalesce" => s.write_coalesce = Some(self.on_off()?),
                "elimcond" => s.elim_cond = Some(self.on_off()?),
                "ocmore" => {
                    let l = self.ident()?;
                    match l.chars().next().filter(|_| l.len() == 1).and_then(OcMore::from_letter) {
                        Some(o) => s.ocmore = Some(o),
                        None => return self.err(format!("ocmore takes one of a-e, found `{l}`")),
                    }
                }
                "evalorder" => {
                    s.eval_order = Some(match self.ident()?.as_str() {
                        "nondet" => EvalOrder::Nondet,
                        "ltr" => EvalOrder::LeftToRight,
                        other => return self.err(format!("unknown evaluation order `{other}`")),
                    })
                }
                "foldorder" => {
                    s.fold_order = Some(match self.ident()?.as_str() {
                        "nearest" => FoldOrder::NearestFirst,
                        "earliest" => FoldOrder::EarliestFirst,
                        other => return self.err(format!("unknown fold order `{other}`")),
                    })
                }
                "nesting" => {
                    s.nesting = Some(match self.ident()?.as_str() {
                        "right" => Nesting::Right,
                        "left" => Nesting::Left,
                        other => return self.err(format!("unknown nesting `{other}`")),
                    })
                }
                "allowed" | "forbidden" | "always" => {
                    let k = match kw.as_str() {
                        "allowed" => ExpectKind::Allowed,
                        "forbidden" => ExpectKind::Forbidden,
                        _ => ExpectKind::Always,
                    };
                    let e = self.paren_expr()?;
                    f.expectations.push((k, e));
                }
                other => {
                    self.pos -= 1;
                    return self.err(format!("unknown directive `{other}`"));
                }
            }
        }
    }
}

/// Parse the surface form without resolving names.
pub fn parse_surface(src: &str) -> Result<LitmusFile, LitmusError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    p.file()
}

/// Parse a standalone expression in surface form.
pub fn parse_surface_expr(src: &str) -> Result<SExpr, LitmusError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if !matches!(p.peek(), Tok::Eof) {
        return p.err(format!("unexpected {} after expression", p.describe()));
    }
    Ok(e)
}
