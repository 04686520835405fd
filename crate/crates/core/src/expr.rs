//! Boolean expression grammar shared by transition guards and the risk
//! predicate.
//!
//! Grammar (standard precedence, `!` > `&` > `|`):
//!
//! ```text
//! expr    := or
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | primary
//! primary := "true" | "false" | atom | "(" expr ")"
//! ```
//!
//! Atoms in guards are local variable names; atoms in risk expressions are
//! `Comp@loc` or `Comp.var`.

use std::fmt;

use thiserror::Error;

/// A Boolean expression over atoms of type `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr<A> {
    Const(bool),
    Atom(A),
    Not(Box<BoolExpr<A>>),
    And(Box<BoolExpr<A>>, Box<BoolExpr<A>>),
    Or(Box<BoolExpr<A>>, Box<BoolExpr<A>>),
}

impl<A> BoolExpr<A> {
    /// Evaluates the expression with `lookup` supplying atom values.
    pub fn eval(&self, lookup: &impl Fn(&A) -> bool) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Atom(a) => lookup(a),
            BoolExpr::Not(e) => !e.eval(lookup),
            BoolExpr::And(l, r) => l.eval(lookup) && r.eval(lookup),
            BoolExpr::Or(l, r) => l.eval(lookup) || r.eval(lookup),
        }
    }

    /// Maps every atom through `f`, failing on the first error.
    pub fn try_map_atoms<B, E>(
        &self,
        f: &impl Fn(&A) -> Result<B, E>,
    ) -> Result<BoolExpr<B>, E> {
        Ok(match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Atom(a) => BoolExpr::Atom(f(a)?),
            BoolExpr::Not(e) => BoolExpr::Not(Box::new(e.try_map_atoms(f)?)),
            BoolExpr::And(l, r) => BoolExpr::And(
                Box::new(l.try_map_atoms(f)?),
                Box::new(r.try_map_atoms(f)?),
            ),
            BoolExpr::Or(l, r) => BoolExpr::Or(
                Box::new(l.try_map_atoms(f)?),
                Box::new(r.try_map_atoms(f)?),
            ),
        })
    }

    /// Collects every atom in left-to-right order.
    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a A>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Atom(a) => out.push(a),
            BoolExpr::Not(e) => e.collect_atoms(out),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for BoolExpr<String> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Const(b) => write!(f, "{b}"),
            BoolExpr::Atom(a) => write!(f, "{a}"),
            BoolExpr::Not(e) => write!(f, "!{e}"),
            BoolExpr::And(l, r) => write!(f, "({l} & {r})"),
            BoolExpr::Or(l, r) => write!(f, "({l} | {r})"),
        }
    }
}

/// Expression syntax error.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("expression syntax error at byte {pos}: {message}")]
pub struct ExprError {
    pub pos: usize,
    pub message: String,
}

/// Parses an expression; atoms are returned as raw strings.
///
/// Atom characters are alphanumerics, `_`, and the risk-atom separators
/// `@` and `.`, so `C1@used` and `C1.x` lex as single atoms.
pub fn parse(input: &str) -> Result<BoolExpr<String>, ExprError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let e = p.or_expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> ExprError {
        ExprError {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn or_expr(&mut self) -> Result<BoolExpr<String>, ExprError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let rhs = self.and_expr()?;
            lhs = BoolExpr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<BoolExpr<String>, ExprError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = BoolExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<BoolExpr<String>, ExprError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(BoolExpr::Not(Box::new(self.unary()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.or_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if is_atom_byte(c) => {
                let start = self.pos;
                while self.pos < self.bytes.len() && is_atom_byte(self.bytes[self.pos]) {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.bytes[start..self.pos])
                    .expect("atom bytes are ascii");
                match word {
                    "true" => Ok(BoolExpr::Const(true)),
                    "false" => Ok(BoolExpr::Const(false)),
                    _ => Ok(BoolExpr::Atom(word.to_string())),
                }
            }
            Some(_) => Err(self.err("expected expression")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn is_atom_byte(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'@' || c == b'.'
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> BoolExpr<String> {
        BoolExpr::Atom(s.to_string())
    }

    #[test]
    fn precedence_not_binds_tighter_than_and_than_or() {
        let e = parse("!x & y | z").unwrap();
        let expected = BoolExpr::Or(
            Box::new(BoolExpr::And(
                Box::new(BoolExpr::Not(Box::new(atom("x")))),
                Box::new(atom("y")),
            )),
            Box::new(atom("z")),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn parens_override_precedence() {
        let e = parse("!(x & y)").unwrap();
        assert_eq!(
            e,
            BoolExpr::Not(Box::new(BoolExpr::And(Box::new(atom("x")), Box::new(atom("y")))))
        );
    }

    #[test]
    fn risk_atoms_lex_as_units() {
        let e = parse("C1@used & C2.flag").unwrap();
        assert_eq!(e.atoms(), vec!["C1@used", "C2.flag"]);
    }

    #[test]
    fn constants_and_eval() {
        let e = parse("true & (false | x)").unwrap();
        assert!(e.eval(&|a: &String| a == "x"));
        assert!(!e.eval(&|_| false));
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(parse("x &").is_err());
        assert!(parse("").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("x y").is_err());
    }
}
