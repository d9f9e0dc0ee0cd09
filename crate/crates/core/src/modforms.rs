//! Eta quotients, their quadratic Nebentypus characters, Hecke operators on
//! q-expansions and the discriminant function.
//!
//! Holomorphy at cusps and membership in spaces of cusp forms are taken as
//! given; only their computable consequences (eigenvalue relations, support
//! patterns of coefficients) are checked here.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{is_prime, kronecker, mod_pow};
use crate::report::{CheckReport, Counterexample};
use crate::series::{eta_product, Ring, Series, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModformError {
    #[error("{p} is not an odd prime")]
    NotOddPrime { p: u64 },
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("{delta} does not divide the level {level}")]
    NotADivisor { delta: u64, level: u64 },
    #[error("level must be positive")]
    ZeroLevel,
    #[error("sum of delta*r_delta is {sum}, which is {residue} mod 24; the q-offset is not an integer")]
    FractionalOffset { sum: i64, residue: i64 },
    #[error("sum of delta*r_delta is {sum}; a negative q-offset has no power-series expansion")]
    NegativeOffset { sum: i64 },
    #[error("weight {twice}/2 is not an integer")]
    HalfIntegralWeight { twice: i64 },
    #[error("expansion is not normalized: a(0) = {a0}, a(1) = {a1}")]
    NotNormalized { a0: String, a1: String },
    #[error("expansion truncated at q^{trunc} is too short for p = {p}")]
    TooShort { trunc: usize, p: u64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Legendre symbol `(s/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(s: i64, p: u64) -> Result<i8, ModformError> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(ModformError::NotOddPrime { p });
    }
    let r = s.rem_euclid(p as i64) as u64;
    Ok(match r {
        0 => 0,
        _ if mod_pow(r, (p - 1) / 2, p) == 1 => 1,
        _ => -1,
    })
}

/// `prod_{delta | N} eta(delta z)^{r_delta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    pub fn new(level: u64, exponents: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, ModformError> {
        if level == 0 {
            return Err(ModformError::ZeroLevel);
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exponents {
            if delta == 0 || !level.is_multiple_of(delta) {
                return Err(ModformError::NotADivisor { delta, level });
            }
            *map.entry(delta).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotientSpec { level, exponents: map })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    /// Twice the weight, `sum r_delta`.
    pub fn weight_twice(&self) -> i64 {
        self.exponents.values().sum()
    }

    pub fn weight(&self) -> Result<i64, ModformError> {
        let twice = self.weight_twice();
        if twice % 2 != 0 {
            return Err(ModformError::HalfIntegralWeight { twice });
        }
        Ok(twice / 2)
    }

    /// `(sum delta r_delta) / 24`, when a non-negative integer.
    pub fn q_offset(&self) -> Result<usize, ModformError> {
        let sum: i64 = self.exponents.iter().map(|(d, r)| *d as i64 * r).sum();
        if sum.rem_euclid(24) != 0 {
            return Err(ModformError::FractionalOffset { sum, residue: sum.rem_euclid(24) });
        }
        if sum < 0 {
            return Err(ModformError::NegativeOffset { sum });
        }
        Ok((sum / 24) as usize)
    }

    /// The character `chi(d) = ((-1)^k prod delta^{r_delta} / d)`.
    pub fn character(&self) -> Result<CharacterSpec, ModformError> {
        let k = self.weight()?;
        Ok(CharacterSpec {
            sign: if k % 2 == 0 { 1 } else { -1 },
            factors: self.exponents.iter().map(|(d, r)| (*d, r.unsigned_abs())).collect(),
        })
    }
}

/// Quadratic character `d -> (s/d)` with `s = sign * prod delta^e`.
///
/// A negative exponent `r_delta` contributes `delta^{|r_delta|}`: the symbol
/// of `delta^{-1}` equals that of `delta` wherever it is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSpec {
    sign: i8,
    factors: Vec<(u64, u64)>,
}

impl CharacterSpec {
    pub fn trivial() -> Self {
        CharacterSpec { sign: 1, factors: Vec::new() }
    }

    /// `chi(d)` via the Kronecker symbol, which agrees with the Legendre
    /// symbol at odd primes and extends it multiplicatively.
    pub fn value(&self, d: i64) -> i8 {
        let mut v = kronecker(self.sign as i64, d);
        for &(delta, e) in &self.factors {
            if v == 0 {
                break;
            }
            let k = kronecker(delta as i64, d);
            v *= if e % 2 == 0 { k * k } else { k };
        }
        v
    }

    /// The top entry `s` of the symbol, when it fits in an `i128`.
    pub fn discriminant(&self) -> Option<i128> {
        let mut s: i128 = self.sign as i128;
        for &(delta, e) in &self.factors {
            s = s.checked_mul((delta as i128).checked_pow(e.try_into().ok()?)?)?;
        }
        Some(s)
    }
}

impl fmt::Display for CharacterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.discriminant() {
            Some(s) => write!(f, "({s}/.)"),
            None => write!(f, "(large/.)"),
        }
    }
}

/// q-expansion `q^offset prod f_delta^{r_delta}` truncated at `trunc`.
pub fn eta_expand(spec: &EtaQuotientSpec, trunc: usize, ring: Ring) -> Result<Series, ModformError> {
    let offset = spec.q_offset()?;
    if offset > trunc {
        return Ok(Series::zero(trunc, ring));
    }
    let exps: Vec<(usize, i64)> = spec.exponents.iter().map(|(d, r)| (*d as usize, *r)).collect();
    Ok(eta_product(&exps, trunc - offset, ring).shift(offset))
}

/// `Delta = eta(z)^24 = q f_1^24`.
pub fn delta(trunc: usize) -> Series {
    let spec = EtaQuotientSpec::new(1, [(1, 24)]).expect("valid");
    eta_expand(&spec, trunc, Ring::INTEGERS).expect("integral offset")
}

/// `eta(4z)^6 = q f_4^6`, a weight-3 form of level 16.
pub fn eta4_6_spec() -> EtaQuotientSpec {
    EtaQuotientSpec::new(16, [(4, 6)]).expect("valid")
}

/// `tau(0..=n_max)` with `tau(0) = 0`.
pub fn tau(n_max: usize) -> Vec<BigInt> {
    assert!(n_max >= 1);
    delta(n_max).to_bigints()
}

/// Output of an eigenform check.
#[derive(Clone, Debug)]
pub struct HeckeResult {
    pub transformed: Series,
    pub eigen_ok: bool,
    pub lambda: BigInt,
    pub first_violation: Option<usize>,
}

/// `f | T_p`: coefficients `a(pn) + chi(p) p^{k-1} a(n/p)`, truncated at
/// `floor(trunc / p)`.
pub fn hecke_tp(f: &Series, p: u64, weight: u32, chi: &CharacterSpec) -> Result<Series, ModformError> {
    if !is_prime(p) {
        return Err(ModformError::NotPrime { p });
    }
    let p_us = p as usize;
    if f.trunc() < p_us {
        return Err(ModformError::TooShort { trunc: f.trunc(), p });
    }
    let out_trunc = f.trunc() / p_us;
    let a = f.to_bigints();
    let factor = BigInt::from(chi.value(p as i64)) * num_traits::pow(BigInt::from(p), weight as usize - 1);
    let b: Vec<BigInt> = (0..=out_trunc)
        .map(|n| {
            let mut c = a[p_us * n].clone();
            if n % p_us == 0 && !factor.is_zero() {
                c += &factor * &a[n / p_us];
            }
            c
        })
        .collect();
    Ok(Series::from_bigints(b, f.ring()))
}

/// Check `f | T_p = a(p) f` for a normalized expansion (`a(0) = 0`, `a(1) = 1`).
pub fn eigenform_check(f: &Series, p: u64, weight: u32, chi: &CharacterSpec) -> Result<HeckeResult, ModformError> {
    let a0 = f.coeff(0).unwrap_or_default();
    let a1 = f.coeff(1).unwrap_or_default();
    if !a0.is_zero() || !a1.is_one() {
        return Err(ModformError::NotNormalized { a0: a0.to_string(), a1: a1.to_string() });
    }
    let transformed = hecke_tp(f, p, weight, chi)?;
    let lambda = f.coeff(p as usize).expect("trunc >= p checked by hecke_tp");
    let expected = f.truncate(transformed.trunc()).scale(&lambda);
    let first_violation = transformed.first_difference(&expected)?;
    Ok(HeckeResult { eigen_ok: first_violation.is_none(), transformed, lambda, first_violation })
}

/// Checks that `a(n) ≡ 0 (mod coeff_modulus)` whenever `n ≢ r (mod m)`;
/// `coeff_modulus = 1` asks for exact zeros.
pub fn support_check_mod(f: &Series, r: u64, m: u64, coeff_modulus: u64) -> CheckReport {
    let start = Instant::now();
    let id = if coeff_modulus == 1 {
        format!("support n≡{r} (mod {m}), exact")
    } else {
        format!("support n≡{r} (mod {m}), coefficients mod {coeff_modulus}")
    };
    let big_m = BigInt::from(coeff_modulus.max(1));
    for n in 0..=f.trunc() {
        if n as u64 % m == r % m {
            continue;
        }
        let c = f.coeff(n).expect("in range");
        let vanishes = if coeff_modulus <= 1 { c.is_zero() } else { c.is_multiple_of(&big_m) };
        if !vanishes {
            let cx = Counterexample { n: n as i64, value: c.to_string(), expected: None };
            return CheckReport::fail(id, f.trunc() as u64, cx, start.elapsed());
        }
    }
    CheckReport::pass(id, f.trunc() as u64, start.elapsed())
}

/// The three support statements about `eta(4z)^6 = sum a(n) q^n`: exact
/// support on `n ≡ 1 (mod 4)`, support mod 2 on `n ≡ 1 (mod 8)`, and the
/// stronger exact support on `n ≡ 1 (mod 8)`, which fails already at
/// `a(5) = -6`. Only the mod-2 form is needed for the congruences mod 8,
/// because the relevant series carries a factor 4.
pub fn eta4_6_support_findings(trunc: usize) -> Vec<CheckReport> {
    let f = eta_expand(&eta4_6_spec(), trunc, Ring::INTEGERS).expect("integral offset");
    let exact_mod4 = support_check_mod(&f, 1, 4, 1);
    let mod2_mod8 = support_check_mod(&f, 1, 8, 2)
        .with_note("this is the form used by the mod-8 congruence argument (the series carries a factor 4)");
    let mut exact_mod8 = support_check_mod(&f, 1, 8, 1);
    if let Some(cx) = &exact_mod8.counterexample {
        let note = format!(
            "finding: exact vanishing of a(n) for n ≢ 1 (mod 8) does not hold; a({}) = {}. \
             Also a(p) ≠ 0 for primes p ≡ 5 (mod 8), so only a(p) ≡ 0 (mod 2) holds for p ≢ 1 (mod 8)",
            cx.n, cx.value
        );
        exact_mod8 = exact_mod8.with_note(note);
    }
    vec![exact_mod4, mod2_mod8, exact_mod8]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(17, 3).unwrap(), -1);
        assert_eq!(legendre(9, 3).unwrap(), 0);
        for p in [3, 5, 7, 11, 13, 101] {
            assert_eq!(legendre(1, p).unwrap(), 1);
        }
        assert!(legendre(3, 2).is_err());
        assert!(legendre(3, 9).is_err());
    }

    #[test]
    fn eta4_6_coefficients() {
        let f = eta_expand(&eta4_6_spec(), 17, Ring::INTEGERS).unwrap();
        let a: Vec<i64> = f.to_bigints().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(a[1], 1);
        assert_eq!(a[5], -6);
        assert_eq!(a[9], 9);
        assert_eq!(a[13], 10);
        assert_eq!(a[17], -30);
        assert_eq!(a[0], 0);
    }

    #[test]
    fn delta_is_eta_24() {
        let t = tau(6);
        let want = [0i64, 1, -24, 252, -1472, 4830, -6048];
        assert_eq!(t, want.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        assert_eq!(&t[6], &(&t[2] * &t[3]));
    }

    #[test]
    fn fractional_offset_refused() {
        let spec = EtaQuotientSpec::new(1, [(1, 1)]).unwrap();
        assert_eq!(
            eta_expand(&spec, 10, Ring::INTEGERS).unwrap_err(),
            ModformError::FractionalOffset { sum: 1, residue: 1 }
        );
        assert!(EtaQuotientSpec::new(16, [(3, 1)]).is_err());
        let neg = EtaQuotientSpec::new(1, [(1, -24)]).unwrap();
        assert!(matches!(eta_expand(&neg, 10, Ring::INTEGERS), Err(ModformError::NegativeOffset { .. })));
    }

    #[test]
    fn character_of_eta4_6() {
        let chi = eta4_6_spec().character().unwrap();
        assert_eq!(chi.discriminant(), Some(-4096));
        for d in (0..40).step_by(2) {
            assert_eq!(chi.value(d), 0);
        }
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            assert_eq!(chi.value(p as i64), legendre(-4096, p).unwrap());
        }
        assert_eq!(chi.value(1), 1);
        assert_eq!(CharacterSpec::trivial().value(12), 1);
    }

    #[test]
    fn hecke_t2_on_delta() {
        let d = delta(40);
        let t2 = hecke_tp(&d, 2, 12, &CharacterSpec::trivial()).unwrap();
        // tau(4) + 2^11 tau(1) = tau(2)^2
        assert_eq!(t2.coeff(2).unwrap(), BigInt::from(576));
        assert_eq!(t2.trunc(), 20);
    }

    #[test]
    fn hecke_on_zero_series() {
        let z = Series::zero(50, Ring::INTEGERS);
        assert!(hecke_tp(&z, 7, 3, &CharacterSpec::trivial()).unwrap().is_zero());
        assert!(hecke_tp(&z, 6, 3, &CharacterSpec::trivial()).is_err());
    }

    #[test]
    fn eigenforms() {
        let d = delta(300);
        let r = eigenform_check(&d, 3, 12, &CharacterSpec::trivial()).unwrap();
        assert!(r.eigen_ok);
        assert_eq!(r.lambda, BigInt::from(252));

        let spec = eta4_6_spec();
        let f = eta_expand(&spec, 400, Ring::INTEGERS).unwrap();
        let chi = spec.character().unwrap();
        let r5 = eigenform_check(&f, 5, 3, &chi).unwrap();
        assert!(r5.eigen_ok);
        assert_eq!(r5.lambda, BigInt::from(-6));
        let r3 = eigenform_check(&f, 3, 3, &chi).unwrap();
        assert!(r3.eigen_ok && r3.lambda.is_zero() && r3.transformed.is_zero());
    }

    #[test]
    fn non_eigenform_is_detected() {
        // q f_1^3 is normalized but not an eigenform of T_2 (weight 3/2 guess k = 2)
        let f = crate::series::f_cubed(1, 200, Ring::INTEGERS).shift(1);
        let r = eigenform_check(&f, 2, 2, &CharacterSpec::trivial()).unwrap();
        assert!(!r.eigen_ok);
        assert!(r.first_violation.is_some());
        let unnormalized = Series::from_ints(&[0, 2, 1], Ring::INTEGERS);
        assert!(matches!(
            eigenform_check(&unnormalized, 2, 2, &CharacterSpec::trivial()),
            Err(ModformError::NotNormalized { .. })
        ));
    }

    #[test]
    fn support_statements() {
        let f = eta_expand(&eta4_6_spec(), 400, Ring::INTEGERS).unwrap();
        assert!(support_check_mod(&f, 1, 4, 1).passed());
        assert!(support_check_mod(&f, 1, 8, 2).passed());
        let r = support_check_mod(&f, 1, 8, 1);
        assert!(!r.passed());
        assert_eq!(r.counterexample.unwrap().n, 5);
    }
}
