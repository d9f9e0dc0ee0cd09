//! Evaluation of expressions to truncated series.
//!
//! Whenever an expression is a finite sum of monomials
//! `c q^e prod f_k^{a_k} prod phi_k^{b_k} prod psi_k^{c_k}` it is expanded
//! into that form first and each monomial is built directly: the `f` part
//! via [`eta_product`], theta factors by sparse multiplication. Anything
//! else (an inverse of a sum, say) falls back to series arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::QExpr;
use crate::series::{eta_product, theta_phi, theta_psi, Ring, Series, SeriesError};

/// Distribution stops (and evaluation falls back to series arithmetic)
/// beyond this many monomials.
const MAX_TERMS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("while evaluating `{expr}`: {source}")]
    Series { expr: String, source: SeriesError },
    #[error("`{expr}` has a negative power of q and is not a power series")]
    NegativeQPower { expr: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    F(usize),
    Phi(usize),
    Psi(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Monomial {
    coeff: BigInt,
    qexp: i64,
    atoms: BTreeMap<Atom, i64>,
}

type Key = (i64, Vec<(Atom, i64)>);

impl Monomial {
    fn scalar(c: BigInt) -> Monomial {
        Monomial { coeff: c, qexp: 0, atoms: BTreeMap::new() }
    }

    fn atom(a: Atom) -> Monomial {
        Monomial { coeff: BigInt::one(), qexp: 0, atoms: BTreeMap::from([(a, 1)]) }
    }

    fn key(&self) -> Key {
        (self.qexp, self.atoms.iter().map(|(a, e)| (*a, *e)).collect())
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut atoms = self.atoms.clone();
        for (a, e) in &other.atoms {
            let slot = atoms.entry(*a).or_insert(0);
            *slot += e;
            if *slot == 0 {
                atoms.remove(a);
            }
        }
        Monomial { coeff: &self.coeff * &other.coeff, qexp: self.qexp + other.qexp, atoms }
    }

    fn pow(&self, e: i64) -> Option<Monomial> {
        if e < 0 && !self.coeff.abs().is_one() {
            return None;
        }
        let coeff = if e < 0 && self.coeff.is_negative() && e % 2 != 0 {
            -BigInt::one()
        } else if e < 0 {
            BigInt::one()
        } else {
            num_traits::pow(self.coeff.clone(), e as usize)
        };
        Some(Monomial {
            coeff,
            qexp: self.qexp * e,
            atoms: self.atoms.iter().map(|(a, x)| (*a, x * e)).collect(),
        })
    }
}

fn combine(terms: Vec<Monomial>) -> Vec<Monomial> {
    let mut acc: BTreeMap<Key, Monomial> = BTreeMap::new();
    for t in terms {
        match acc.get_mut(&t.key()) {
            Some(m) => m.coeff += t.coeff,
            None => {
                acc.insert(t.key(), t);
            }
        }
    }
    acc.into_values().filter(|m| !m.coeff.is_zero()).collect()
}

fn distribute(a: &[Monomial], b: &[Monomial]) -> Option<Vec<Monomial>> {
    if a.len() * b.len() > MAX_TERMS {
        return None;
    }
    Some(combine(
        a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect(),
    ))
}

fn expand(e: &QExpr) -> Option<Vec<Monomial>> {
    match e {
        QExpr::F(k) => Some(vec![Monomial::atom(Atom::F(*k))]),
        QExpr::Phi(k) => Some(vec![Monomial::atom(Atom::Phi(*k))]),
        QExpr::Psi(k) => Some(vec![Monomial::atom(Atom::Psi(*k))]),
        QExpr::QPow(n) => Some(vec![Monomial { qexp: *n as i64, ..Monomial::scalar(BigInt::one()) }]),
        QExpr::Int(c) => Some(combine(vec![Monomial::scalar(c.clone())])),
        QExpr::Sum(terms) => {
            let mut all = Vec::new();
            for t in terms {
                all.extend(expand(t)?);
                if all.len() > MAX_TERMS {
                    return None;
                }
            }
            Some(combine(all))
        }
        QExpr::Product(factors) => {
            let mut acc = vec![Monomial::scalar(BigInt::one())];
            for f in factors {
                acc = distribute(&acc, &expand(f)?)?;
            }
            Some(acc)
        }
        QExpr::Pow(base, n) => {
            let terms = expand(base)?;
            match (terms.len(), *n) {
                (_, 0) => Some(vec![Monomial::scalar(BigInt::one())]),
                (1, n) => Some(vec![terms[0].pow(n)?]),
                (0, n) if n > 0 => Some(Vec::new()),
                (_, n) if n > 0 => {
                    let mut acc = terms.clone();
                    for _ in 1..n {
                        acc = distribute(&acc, &terms)?;
                    }
                    Some(acc)
                }
                _ => None,
            }
        }
    }
}

fn series_err(e: &QExpr) -> impl Fn(SeriesError) -> EvalError + '_ {
    move |source| EvalError::Series { expr: e.to_string(), source }
}

fn eval_monomial(m: &Monomial, trunc: usize, ring: Ring) -> Result<Series, SeriesError> {
    debug_assert!(m.qexp >= 0);
    let qexp = m.qexp as usize;
    if qexp > trunc {
        return Ok(Series::zero(trunc, ring));
    }
    let t = trunc - qexp;
    let etas: Vec<(usize, i64)> = m
        .atoms
        .iter()
        .filter_map(|(a, e)| match a {
            Atom::F(k) => Some((*k, *e)),
            _ => None,
        })
        .collect();
    let mut acc = eta_product(&etas, t, ring);
    for (a, e) in &m.atoms {
        let theta = match a {
            Atom::F(_) => continue,
            Atom::Phi(k) => theta_phi(*k, t, ring),
            Atom::Psi(k) => theta_psi(*k, t, ring),
        };
        for _ in 0..e.unsigned_abs() {
            acc = if *e > 0 { acc.mul(&theta)? } else { acc.div(&theta)? };
        }
    }
    if !m.coeff.is_one() {
        acc = acc.scale(&m.coeff);
    }
    Ok(acc.shift(qexp))
}

/// Evaluate `e` to a series truncated at `trunc` over `ring`.
pub fn evaluate(e: &QExpr, trunc: usize, ring: Ring) -> Result<Series, EvalError> {
    if let Some(monomials) = expand(e) {
        if monomials.iter().any(|m| m.qexp < 0) {
            return Err(EvalError::NegativeQPower { expr: e.to_string() });
        }
        let mut acc = Series::zero(trunc, ring);
        for m in &monomials {
            acc = acc.add(&eval_monomial(m, trunc, ring).map_err(series_err(e))?).map_err(series_err(e))?;
        }
        return Ok(acc);
    }
    match e {
        QExpr::Sum(terms) => {
            let mut acc = Series::zero(trunc, ring);
            for t in terms {
                acc = acc.add(&evaluate(t, trunc, ring)?).map_err(series_err(e))?;
            }
            Ok(acc)
        }
        QExpr::Product(factors) => {
            let mut acc = Series::one(trunc, ring);
            for f in factors {
                acc = acc.mul(&evaluate(f, trunc, ring)?).map_err(series_err(e))?;
            }
            Ok(acc)
        }
        QExpr::Pow(base, n) => {
            let b = evaluate(base, trunc, ring)?;
            if *n < 0 {
                // name the base that failed to invert
                let inv = b.inverse().map_err(series_err(base))?;
                inv.pow(-n).map_err(series_err(e))
            } else {
                b.pow(*n).map_err(series_err(e))
            }
        }
        _ => unreachable!("atoms always expand"),
    }
}

/// The integer scalar of a product expression, if it has a leading one
/// (used by the catalog's divisibility checks).
pub(crate) fn leading_scalar(e: &QExpr) -> Option<BigInt> {
    match e {
        QExpr::Product(f) => match f.first() {
            Some(QExpr::Int(c)) => Some(c.clone()),
            _ => None,
        },
        QExpr::Int(c) => Some(c.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexpr::parse;
    use num_traits::ToPrimitive;

    fn eval(src: &str, trunc: usize) -> Vec<i64> {
        evaluate(&parse(src).unwrap(), trunc, Ring::INTEGERS)
            .unwrap()
            .to_bigints()
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn generating_function_for_l3() {
        assert_eq!(eval("f2*f3/f1^2", 4), vec![1, 2, 4, 7, 12]);
    }

    #[test]
    fn scalar_constant() {
        assert_eq!(eval("q^0*5", 3), vec![5, 0, 0, 0]);
        assert_eq!(eval("q^0*7", 0), vec![7]);
    }

    #[test]
    fn two_colour_partitions() {
        assert_eq!(eval("f1^(-2)", 3), vec![1, 2, 5, 10]);
        assert_eq!(eval("1/f1^2", 6), vec![1, 2, 5, 10, 20, 36, 65]);
    }

    #[test]
    fn non_unit_inverse_names_subexpression() {
        let err = evaluate(&parse("1/(2+q)").unwrap(), 4, Ring::INTEGERS).unwrap_err();
        match err {
            EvalError::Series { expr, source: SeriesError::NonUnitConstant { constant, .. } } => {
                assert_eq!(constant, "2");
                assert!(expr.contains('2') && expr.contains('q'), "{expr}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(evaluate(&parse("1/(2*f1)").unwrap(), 4, Ring::INTEGERS).is_err());
    }

    #[test]
    fn negative_q_power_is_refused() {
        assert!(matches!(
            evaluate(&parse("f1/q").unwrap(), 4, Ring::INTEGERS),
            Err(EvalError::NegativeQPower { .. })
        ));
    }

    #[test]
    fn expansion_and_fallback_agree() {
        // (f1 + q*f2)^-2 is not a monomial sum, so it goes through series arithmetic
        let direct = evaluate(&parse("(f1 + q*f2)^-2").unwrap(), 60, Ring::INTEGERS).unwrap();
        let a = evaluate(&parse("f1 + q*f2").unwrap(), 60, Ring::INTEGERS).unwrap();
        assert_eq!(direct, a.inverse().unwrap().pow(2).unwrap());
        // (phi1 - 2*q*psi8)^3 is expanded into monomials
        let expanded = evaluate(&parse("(phi1 - 2*q*psi8)^3").unwrap(), 80, Ring::INTEGERS).unwrap();
        let b = evaluate(&parse("phi1 - 2*q*psi8").unwrap(), 80, Ring::INTEGERS).unwrap();
        assert_eq!(expanded, b.pow(3).unwrap());
    }

    #[test]
    fn modular_evaluation_matches_reduction() {
        let e = parse("f8^5/(f2^5*f16^2) + 2*q*f4^2*f16^2/(f2^5*f8)").unwrap();
        let exact = evaluate(&e, 300, Ring::INTEGERS).unwrap();
        let m = evaluate(&e, 300, Ring::modular(64).unwrap()).unwrap();
        assert_eq!(exact.reduce_mod(64).unwrap(), m);
    }
}
