//! Tokenizer and parser for the scalar literal grammar.
//!
//! The same expression syntax is used for rational-function literals
//! (`(3*s^2+1)/(2*s)`) and for linear constraint rows
//! (`phi_out_1 - phi_in_1 - 5*I_in_1 = 0`); only the evaluation differs.

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {col}: {msg}")]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

impl ExprError {
    fn new(col: usize, msg: impl Into<String>) -> Self {
        ExprError {
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse::<BigInt>()
                .map_err(|_| ExprError::new(col, "bad integer"))?;
            out.push((Tok::Int(n), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ExprError::new(col, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // sum := term (('+'|'-') term)*
    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.toks.get(self.pos).cloned() {
                Some((Tok::Int(n), _)) => {
                    self.pos += 1;
                    let e = u32::try_from(&n).map_err(|_| ExprError::new(col, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(ExprError::new(col, "expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let col = self.col();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Int(n), _)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some((Tok::Ident(s), _)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some((Tok::Op('('), _)) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(ExprError::new(self.col(), "expected ')'"));
                }
                Ok(e)
            }
            Some((t, _)) => Err(ExprError::new(col, format!("unexpected token {t:?}"))),
            None => Err(ExprError::new(col, "unexpected end of input")),
        }
    }
}

/// Parses a complete expression.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::new(p.col(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_conventional() {
        let e = parse_expr("1/2*s").unwrap();
        match e {
            Expr::Mul(lhs, _) => assert!(matches!(*lhs, Expr::Div(_, _))),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expr("-s^2").unwrap(), Expr::Neg(_)));
    }

    #[test]
    fn errors_carry_columns() {
        let err = parse_expr("(s+1").unwrap_err();
        assert_eq!(err.col, 5);
        assert_eq!(parse_expr("2 $").unwrap_err().col, 3);
        assert!(parse_expr("s^x").is_err());
    }
}
