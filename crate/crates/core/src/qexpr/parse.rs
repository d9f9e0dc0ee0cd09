//! Recursive-descent parser for the textual expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)*
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! atom   := integer | 'q' | 'f' integer | 'phi' integer | 'psi' integer | '(' expr ')'
//! ```
//!
//! `a / b` is read as `a * b^-1`.

use num_bigint::BigInt;
use thiserror::Error;

use super::QExpr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

pub fn parse(src: &str) -> Result<QExpr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QExpr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(negate(self.term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { QExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<QExpr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.unary()?);
            } else if self.eat(b'/') {
                factors.push(self.unary()?.pow(-1));
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { QExpr::Product(factors) })
    }

    fn unary(&mut self) -> Result<QExpr, ParseError> {
        if self.eat(b'-') {
            Ok(negate(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<QExpr, ParseError> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let e = self.exponent()?;
            base = match base {
                // `q^e` is a single atom
                QExpr::QPow(1) if e >= 0 => QExpr::QPow(e as usize),
                b => b.pow(e),
            };
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let start = self.pos;
        let n = self.integer()?;
        let n: i64 = n
            .try_into()
            .map_err(|_| ParseError { pos: start, message: "exponent too large".into() })?;
        if paren && !self.eat(b')') {
            return Err(self.error("expected ')'"));
        }
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let k = self.integer()?;
        match usize::try_from(k) {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(ParseError { pos: start, message: "index must be a positive integer".into() }),
        }
    }

    fn atom(&mut self) -> Result<QExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(QExpr::Int(self.integer()?)),
            Some(_) => {
                if self.eat_word("phi") {
                    Ok(QExpr::Phi(self.index()?))
                } else if self.eat_word("psi") {
                    Ok(QExpr::Psi(self.index()?))
                } else if self.eat_word("f") {
                    Ok(QExpr::F(self.index()?))
                } else if self.eat_word("q") {
                    Ok(QExpr::QPow(1))
                } else {
                    Err(self.error("expected q, f<k>, phi<k>, psi<k>, an integer or '('"))
                }
            }
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn negate(e: QExpr) -> QExpr {
    match e {
        QExpr::Int(c) => QExpr::Int(-c),
        QExpr::Product(mut v) => {
            v.insert(0, QExpr::int(-1));
            QExpr::Product(v)
        }
        e => QExpr::Product(vec![QExpr::int(-1), e]),
    }
}
