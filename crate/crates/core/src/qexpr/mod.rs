//! Expression trees over the generators `f_k`, `phi(q^k)`, `psi(q^k)`,
//! powers of `q` and integer scalars.

mod eval;
mod parse;

use std::fmt;

use num_bigint::BigInt;

pub use eval::{evaluate, EvalError};
pub(crate) use eval::leading_scalar;
pub use parse::{parse, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QExpr {
    /// `f_k = prod (1 - q^{ki})`
    F(usize),
    /// `phi(q^k)`
    Phi(usize),
    /// `psi(q^k)`
    Psi(usize),
    QPow(usize),
    Int(BigInt),
    Sum(Vec<QExpr>),
    Product(Vec<QExpr>),
    /// Integer power; negative exponents need a unit constant term.
    Pow(Box<QExpr>, i64),
}

impl QExpr {
    pub fn f(k: usize) -> QExpr {
        assert!(k >= 1, "generator index must be positive");
        QExpr::F(k)
    }

    pub fn int(c: i64) -> QExpr {
        QExpr::Int(BigInt::from(c))
    }

    pub fn pow(self, e: i64) -> QExpr {
        QExpr::Pow(Box::new(self), e)
    }

    pub fn times(self, other: QExpr) -> QExpr {
        match self {
            QExpr::Product(mut v) => {
                v.push(other);
                QExpr::Product(v)
            }
            s => QExpr::Product(vec![s, other]),
        }
    }

    /// The generating function `f_2 f_l / f_1^2` of `R*_l(n)`.
    pub fn rbar_gf(ell: usize) -> QExpr {
        QExpr::Product(vec![QExpr::f(2), QExpr::f(ell), QExpr::f(1).pow(-2)])
    }

    fn is_atom(&self) -> bool {
        matches!(
            self,
            QExpr::F(_) | QExpr::Phi(_) | QExpr::Psi(_) | QExpr::QPow(_)
        ) || matches!(self, QExpr::Int(c) if c.sign() != num_bigint::Sign::Minus)
    }
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QExpr::F(k) => write!(f, "f{k}"),
            QExpr::Phi(k) => write!(f, "phi{k}"),
            QExpr::Psi(k) => write!(f, "psi{k}"),
            QExpr::QPow(1) => write!(f, "q"),
            QExpr::QPow(e) => write!(f, "q^{e}"),
            QExpr::Int(c) if c.sign() == num_bigint::Sign::Minus => write!(f, "({c})"),
            QExpr::Int(c) => write!(f, "{c}"),
            QExpr::Sum(terms) if terms.is_empty() => write!(f, "0"),
            QExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            QExpr::Product(factors) if factors.is_empty() => write!(f, "1"),
            QExpr::Product(factors) => {
                for (i, t) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    match t {
                        QExpr::Sum(_) => write!(f, "({t})")?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
            QExpr::Pow(base, e) => {
                if base.is_atom() && !matches!(**base, QExpr::QPow(e) if e != 1) {
                    write!(f, "{base}^{e}")
                } else {
                    write!(f, "({base})^{e}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips_through_parser() {
        for src in [
            "f2*f3/f1^2",
            "f8^5/(f2^5*f16^2) + 2*q*f4^2*f16^2/(f2^5*f8)",
            "phi4 + 2*q*psi8",
            "q^0*7",
            "-3*q^2*f1^3 - f2",
            "(1 + q)^-3",
            "q^3^2",
        ] {
            let e = parse(src).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }
}
