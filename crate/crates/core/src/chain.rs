//! Transvectant-chain expressions.
//!
//! Chains are written in the same notation as the classical tables:
//! `f`, named intermediates such as `c3`, transvectants `(A, B)_r` and
//! powers `A^k`. They serialize to JSON as
//! `{"op":"transvect","left":…,"right":…,"r":…}`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::Covariant;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ChainExpr {
    Form,
    Ref { name: String },
    Transvect { left: Box<ChainExpr>, right: Box<ChainExpr>, r: u32 },
    Power { base: Box<ChainExpr>, k: u32 },
}

/// Degree in the coefficients and order in `x, y` of a chain node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub degree: u32,
    pub order: u32,
}

impl ChainExpr {
    pub fn parse(src: &str) -> Result<ChainExpr> {
        let mut p = Parser { s: src.as_bytes(), i: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.i != p.s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    pub fn shape(&self, form_degree: u32, env: &HashMap<String, Shape>) -> Result<Shape> {
        match self {
            ChainExpr::Form => Ok(Shape { degree: 1, order: form_degree }),
            ChainExpr::Ref { name } => env
                .get(name)
                .copied()
                .ok_or_else(|| Error::MalformedSystem(format!("`{name}` used before definition"))),
            ChainExpr::Transvect { left, right, r } => {
                let a = left.shape(form_degree, env)?;
                let b = right.shape(form_degree, env)?;
                if *r > a.order.min(b.order) {
                    return Err(Error::MalformedSystem(format!(
                        "{self}: r = {r} exceeds orders ({}, {})",
                        a.order, b.order
                    )));
                }
                Ok(Shape { degree: a.degree + b.degree, order: a.order + b.order - 2 * r })
            }
            ChainExpr::Power { base, k } => {
                let s = base.shape(form_degree, env)?;
                Ok(Shape { degree: s.degree * k, order: s.order * k })
            }
        }
    }

    /// Evaluates with memoization of repeated subexpressions.
    pub fn eval(
        &self,
        form: &Covariant,
        env: &HashMap<String, Covariant>,
        memo: &mut HashMap<ChainExpr, Covariant>,
    ) -> Result<Covariant> {
        if let Some(c) = memo.get(self) {
            return Ok(c.clone());
        }
        let out = match self {
            ChainExpr::Form => form.clone(),
            ChainExpr::Ref { name } => env
                .get(name)
                .cloned()
                .ok_or_else(|| Error::MalformedSystem(format!("`{name}` used before definition")))?,
            ChainExpr::Transvect { left, right, r } => {
                let a = left.eval(form, env, memo)?;
                let b = right.eval(form, env, memo)?;
                a.transvect(&b, *r)?
            }
            ChainExpr::Power { base, k } => base.eval(form, env, memo)?.pow(*k),
        };
        memo.insert(self.clone(), out.clone());
        Ok(out)
    }

    pub fn references(&self, out: &mut Vec<String>) {
        match self {
            ChainExpr::Form => {}
            ChainExpr::Ref { name } => out.push(name.clone()),
            ChainExpr::Transvect { left, right, .. } => {
                left.references(out);
                right.references(out);
            }
            ChainExpr::Power { base, .. } => base.references(out),
        }
    }
}

impl fmt::Display for ChainExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainExpr::Form => write!(f, "f"),
            ChainExpr::Ref { name } => write!(f, "{name}"),
            ChainExpr::Transvect { left, right, r } => write!(f, "({left}, {right})_{r}"),
            ChainExpr::Power { base, k } => write!(f, "{base}^{k}"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("chain `{}` at {}: {msg}", String::from_utf8_lossy(self.s), self.i))
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("expected a number"))
    }

    fn expr(&mut self) -> Result<ChainExpr> {
        let mut e = self.atom()?;
        while self.eat(b'^') {
            let k = self.number()?;
            e = ChainExpr::Power { base: Box::new(e), k };
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<ChainExpr> {
        self.skip_ws();
        if self.eat(b'(') {
            let left = self.expr()?;
            if !self.eat(b',') {
                return Err(self.error("expected `,`"));
            }
            let right = self.expr()?;
            if !self.eat(b')') || !self.eat(b'_') {
                return Err(self.error("expected `)_r`"));
            }
            let r = self.number()?;
            return Ok(ChainExpr::Transvect { left: Box::new(left), right: Box::new(right), r });
        }
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_alphanumeric() {
            self.i += 1;
        }
        match std::str::from_utf8(&self.s[start..self.i]).unwrap_or("") {
            "" => Err(self.error("expected an expression")),
            "f" => Ok(ChainExpr::Form),
            name => Ok(ChainExpr::Ref { name: name.to_string() }),
        }
    }
}
