//! Exact truncated power series in `q`.
//!
//! A [`Series`] holds the coefficients of `q^0 ..= q^trunc`, either as
//! signed arbitrary-precision integers or as machine-word residues modulo
//! some `M` in `[2, 2^32]`. All operations are pure; binary operations take
//! the minimum of the operand truncations.

mod classical;
mod kernels;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use classical::{eta_product, f_cubed, pentagonal_terms, series_f, theta_phi, theta_psi};

/// Largest supported residue modulus.
pub const MAX_MODULUS: u64 = 1 << 32;

/// Coefficient ring of a series: the integers, or `Z/M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring(Option<u64>);

impl Ring {
    pub const INTEGERS: Ring = Ring(None);

    pub fn modular(m: u64) -> Result<Ring, SeriesError> {
        if (2..=MAX_MODULUS).contains(&m) {
            Ok(Ring(Some(m)))
        } else {
            Err(SeriesError::ModulusOutOfRange(m))
        }
    }

    /// `None` means exact integers.
    pub fn from_option(m: Option<u64>) -> Result<Ring, SeriesError> {
        m.map_or(Ok(Ring::INTEGERS), Ring::modular)
    }

    pub fn modulus(self) -> Option<u64> {
        self.0
    }

    pub fn is_exact(self) -> bool {
        self.0.is_none()
    }

    fn reduce(self, c: &BigInt) -> BigInt {
        match self.0 {
            None => c.clone(),
            Some(m) => {
                let m = BigInt::from(m);
                ((c % &m) + &m) % &m
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "Z"),
            Some(m) => write!(f, "Z/{m}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: Ring, right: Ring },
    #[error("non-unit constant term {constant} in {ring}")]
    NonUnitConstant { constant: String, ring: Ring },
    #[error("modulus {0} out of range (need 2 <= M <= 2^32)")]
    ModulusOutOfRange(u64),
    #[error("cannot reduce modulo {target}: it does not divide the current modulus {current}")]
    ModulusNotDividing { target: u64, current: u64 },
    #[error("invalid dissection parameters m = {m}, r = {r}")]
    BadResidue { m: usize, r: usize },
    #[error("series truncated at q^{trunc} has no coefficient at q^{needed}")]
    InsufficientTruncation { trunc: usize, needed: usize },
    #[error("magnification factor must be positive")]
    ZeroMagnification,
    #[error("a series needs at least the constant term")]
    Empty,
    #[error("residue {value} is not reduced modulo {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Residues { modulus: u64, values: Vec<u64> },
}

/// Truncated q-expansion `c_0 + c_1 q + ... + c_trunc q^trunc + O(q^(trunc+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    data: Coeffs,
}

impl Series {
    pub fn zero(trunc: usize, ring: Ring) -> Series {
        match ring.modulus() {
            None => Series::exact(vec![BigInt::zero(); trunc + 1]),
            Some(modulus) => Series::residues(modulus, vec![0; trunc + 1]),
        }
    }

    pub fn one(trunc: usize, ring: Ring) -> Series {
        Series::monomial(0, 1, trunc, ring)
    }

    /// `c * q^exp`, truncated (a zero series if `exp > trunc`).
    pub fn monomial(exp: usize, c: i64, trunc: usize, ring: Ring) -> Series {
        let mut v = vec![0i64; trunc + 1];
        if exp <= trunc {
            v[exp] = c;
        }
        Series::from_ints(&v, ring)
    }

    /// Build from signed machine integers, reducing into `ring`.
    pub fn from_ints(coeffs: &[i64], ring: Ring) -> Series {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        match ring.modulus() {
            None => Series::exact(coeffs.iter().map(|&c| BigInt::from(c)).collect()),
            Some(m) => Series::residues(
                m,
                coeffs.iter().map(|&c| c.rem_euclid(m as i64) as u64).collect(),
            ),
        }
    }

    pub fn from_bigints(coeffs: Vec<BigInt>, ring: Ring) -> Series {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        match ring.modulus() {
            None => Series::exact(coeffs),
            Some(m) => Series::residues(
                m,
                coeffs
                    .iter()
                    .map(|c| ring.reduce(c).to_u64().expect("reduced residue fits u64"))
                    .collect(),
            ),
        }
    }

    /// Build from residues already reduced into `[0, modulus)`.
    pub fn from_residues(modulus: u64, values: Vec<u64>) -> Result<Series, SeriesError> {
        Ring::modular(modulus)?;
        if values.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(&value) = values.iter().find(|&&v| v >= modulus) {
            return Err(SeriesError::ResidueOutOfRange { value, modulus });
        }
        Ok(Series::residues(modulus, values))
    }

    pub(crate) fn exact(values: Vec<BigInt>) -> Series {
        debug_assert!(!values.is_empty());
        Series { data: Coeffs::Exact(values) }
    }

    pub(crate) fn residues(modulus: u64, values: Vec<u64>) -> Series {
        debug_assert!(!values.is_empty());
        debug_assert!(values.iter().all(|&v| v < modulus));
        Series { data: Coeffs::Residues { modulus, values } }
    }

    pub fn trunc(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.data {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Residues { values, .. } => values.len(),
        }
    }

    pub fn ring(&self) -> Ring {
        Ring(self.modulus())
    }

    pub fn modulus(&self) -> Option<u64> {
        match &self.data {
            Coeffs::Exact(_) => None,
            Coeffs::Residues { modulus, .. } => Some(*modulus),
        }
    }

    /// Coefficient of `q^n`, or `None` beyond the truncation.
    pub fn coeff(&self, n: usize) -> Option<BigInt> {
        match &self.data {
            Coeffs::Exact(v) => v.get(n).cloned(),
            Coeffs::Residues { values, .. } => values.get(n).map(|&r| BigInt::from(r)),
        }
    }

    pub fn as_exact(&self) -> Option<&[BigInt]> {
        match &self.data {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Residues { .. } => None,
        }
    }

    pub fn as_residues(&self) -> Option<&[u64]> {
        match &self.data {
            Coeffs::Exact(_) => None,
            Coeffs::Residues { values, .. } => Some(values),
        }
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        match &self.data {
            Coeffs::Exact(v) => v.clone(),
            Coeffs::Residues { values, .. } => values.iter().map(|&r| BigInt::from(r)).collect(),
        }
    }

    /// True when coefficient `n` is zero (in the series' ring).
    pub fn coeff_is_zero(&self, n: usize) -> bool {
        match &self.data {
            Coeffs::Exact(v) => v[n].is_zero(),
            Coeffs::Residues { values, .. } => values[n] == 0,
        }
    }

    pub fn nonzero_count(&self) -> usize {
        match &self.data {
            Coeffs::Exact(v) => v.iter().filter(|c| !c.is_zero()).count(),
            Coeffs::Residues { values, .. } => values.iter().filter(|&&c| c != 0).count(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    /// Keep coefficients up to `min(trunc, self.trunc())`.
    pub fn truncate(&self, trunc: usize) -> Series {
        let t = trunc.min(self.trunc());
        match &self.data {
            Coeffs::Exact(v) => Series::exact(v[..=t].to_vec()),
            Coeffs::Residues { modulus, values } => Series::residues(*modulus, values[..=t].to_vec()),
        }
    }

    fn check_ring(&self, other: &Series) -> Result<(), SeriesError> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch { left: self.ring(), right: other.ring() })
        }
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_ring(other)?;
        let t = self.trunc().min(other.trunc());
        Ok(match (&self.data, &other.data) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Series::exact((0..=t).map(|i| &a[i] + &b[i]).collect())
            }
            (Coeffs::Residues { modulus, values: a }, Coeffs::Residues { values: b, .. }) => {
                let m = *modulus;
                Series::residues(m, (0..=t).map(|i| (a[i] + b[i]) % m).collect())
            }
            _ => unreachable!("rings checked"),
        })
    }

    pub fn neg(&self) -> Series {
        match &self.data {
            Coeffs::Exact(v) => Series::exact(v.iter().map(|c| -c).collect()),
            Coeffs::Residues { modulus, values } => {
                let m = *modulus;
                Series::residues(m, values.iter().map(|&c| (m - c) % m).collect())
            }
        }
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Series {
        match &self.data {
            Coeffs::Exact(v) => Series::exact(v.iter().map(|x| x * c).collect()),
            Coeffs::Residues { modulus, values } => {
                let m = *modulus;
                let c = self.ring().reduce(c).to_u64().expect("residue") as u128;
                Series::residues(
                    m,
                    values.iter().map(|&x| ((x as u128 * c) % m as u128) as u64).collect(),
                )
            }
        }
    }

    /// Truncated Cauchy product. The operand with fewer nonzero terms is
    /// walked as a term list, so products with pentagonal or theta series
    /// cost `nnz * trunc`.
    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_ring(other)?;
        let t = self.trunc().min(other.trunc());
        let (sparse, dense) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(match (&sparse.data, &dense.data) {
            (Coeffs::Exact(s), Coeffs::Exact(d)) => {
                Series::exact(kernels::mul_exact(&kernels::terms_exact(s, t), d, t))
            }
            (Coeffs::Residues { modulus, values: s }, Coeffs::Residues { values: d, .. }) => {
                Series::residues(*modulus, kernels::mul_mod(&kernels::terms_mod(s, t), d, *modulus, t))
            }
            _ => unreachable!("rings checked"),
        })
    }

    fn unit_constant_error(&self) -> SeriesError {
        SeriesError::NonUnitConstant {
            constant: self.coeff(0).expect("constant term").to_string(),
            ring: self.ring(),
        }
    }

    /// `self / divisor`, defined when the divisor's constant term is a unit.
    pub fn div(&self, divisor: &Series) -> Result<Series, SeriesError> {
        self.check_ring(divisor)?;
        let t = self.trunc().min(divisor.trunc());
        match (&self.data, &divisor.data) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                let unit = match b[0].to_i64() {
                    Some(u @ (1 | -1)) => u,
                    _ => return Err(divisor.unit_constant_error()),
                };
                Ok(Series::exact(kernels::div_exact(a, &kernels::terms_exact(b, t), unit, t)))
            }
            (Coeffs::Residues { modulus, values: a }, Coeffs::Residues { values: b, .. }) => {
                let inv = crate::arith::inverse_mod(b[0] as i128, *modulus)
                    .ok_or_else(|| divisor.unit_constant_error())?;
                Ok(Series::residues(
                    *modulus,
                    kernels::div_mod(a, &kernels::terms_mod(b, t), inv, *modulus, t),
                ))
            }
            _ => unreachable!("rings checked"),
        }
    }

    pub fn inverse(&self) -> Result<Series, SeriesError> {
        Series::one(self.trunc(), self.ring()).div(self)
    }

    /// Integer power; negative exponents go through [`Series::inverse`].
    pub fn pow(&self, e: i64) -> Result<Series, SeriesError> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let e = e as u64;
        if e == 0 {
            return Ok(Series::one(self.trunc(), self.ring()));
        }
        // Repeated multiplication by a sparse base beats squaring, which
        // densifies after the first step.
        let nnz = self.nonzero_count() as u64;
        let len = self.len() as u64;
        if nnz * e <= len * (64 - e.leading_zeros() as u64) {
            let mut acc = self.clone();
            for _ in 1..e {
                acc = acc.mul(self)?;
            }
            return Ok(acc);
        }
        let mut acc: Option<Series> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("e > 0"))
    }

    /// Coefficients at `m*n + r`: the series `sum a(mn + r) q^n`.
    /// Output truncation is `floor((trunc - r) / m)`.
    pub fn dissect(&self, m: usize, r: usize) -> Result<Series, SeriesError> {
        if m == 0 || r >= m {
            return Err(SeriesError::BadResidue { m, r });
        }
        if self.trunc() < r {
            return Err(SeriesError::InsufficientTruncation { trunc: self.trunc(), needed: r });
        }
        let t = (self.trunc() - r) / m;
        Ok(match &self.data {
            Coeffs::Exact(v) => Series::exact((0..=t).map(|n| v[m * n + r].clone()).collect()),
            Coeffs::Residues { modulus, values } => {
                Series::residues(*modulus, (0..=t).map(|n| values[m * n + r]).collect())
            }
        })
    }

    /// Substitute `q -> q^m`. The gaps above the last known coefficient are
    /// known to vanish, so the output truncation is `m*trunc + m - 1`.
    pub fn magnify(&self, m: usize) -> Result<Series, SeriesError> {
        if m == 0 {
            return Err(SeriesError::ZeroMagnification);
        }
        let t = m * self.trunc() + m - 1;
        let mut out = Series::zero(t, self.ring());
        match (&mut out.data, &self.data) {
            (Coeffs::Exact(o), Coeffs::Exact(v)) => {
                for (n, c) in v.iter().enumerate() {
                    o[m * n] = c.clone();
                }
            }
            (Coeffs::Residues { values: o, .. }, Coeffs::Residues { values: v, .. }) => {
                for (n, &c) in v.iter().enumerate() {
                    o[m * n] = c;
                }
            }
            _ => unreachable!("same ring"),
        }
        Ok(out)
    }

    /// Multiply by `q^e`; the truncation grows by `e`.
    pub fn shift(&self, e: usize) -> Series {
        match &self.data {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); e];
                out.extend(v.iter().cloned());
                Series::exact(out)
            }
            Coeffs::Residues { modulus, values } => {
                let mut out = vec![0u64; e];
                out.extend_from_slice(values);
                Series::residues(*modulus, out)
            }
        }
    }

    /// Substitute `q -> -q`.
    pub fn twist(&self) -> Series {
        match &self.data {
            Coeffs::Exact(v) => Series::exact(
                v.iter()
                    .enumerate()
                    .map(|(n, c)| if n % 2 == 1 { -c } else { c.clone() })
                    .collect(),
            ),
            Coeffs::Residues { modulus, values } => {
                let m = *modulus;
                Series::residues(
                    m,
                    values
                        .iter()
                        .enumerate()
                        .map(|(n, &c)| if n % 2 == 1 { (m - c) % m } else { c })
                        .collect(),
                )
            }
        }
    }

    /// Map coefficients into `[0, target)`. On a modular series `target`
    /// must divide the current modulus.
    pub fn reduce_mod(&self, target: u64) -> Result<Series, SeriesError> {
        let ring = Ring::modular(target)?;
        match &self.data {
            Coeffs::Exact(v) => Ok(Series::from_bigints(v.clone(), ring)),
            Coeffs::Residues { modulus, values } => {
                if modulus % target != 0 {
                    return Err(SeriesError::ModulusNotDividing { target, current: *modulus });
                }
                Ok(Series::residues(target, values.iter().map(|&c| c % target).collect()))
            }
        }
    }

    /// Re-express in `ring`: exact to modular reduces, modular to a
    /// dividing modulus reduces, identical rings are a no-op.
    pub fn into_ring(self, ring: Ring) -> Result<Series, SeriesError> {
        match ring.modulus() {
            _ if ring == self.ring() => Ok(self),
            Some(m) => self.reduce_mod(m),
            None => Err(SeriesError::RingMismatch { left: self.ring(), right: ring }),
        }
    }

    /// First exponent (up to the shared truncation) where the two series differ.
    pub fn first_difference(&self, other: &Series) -> Result<Option<usize>, SeriesError> {
        self.check_ring(other)?;
        let t = self.trunc().min(other.trunc());
        Ok(match (&self.data, &other.data) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => (0..=t).find(|&i| a[i] != b[i]),
            (Coeffs::Residues { values: a, .. }, Coeffs::Residues { values: b, .. }) => {
                (0..=t).find(|&i| a[i] != b[i])
            }
            _ => unreachable!("rings checked"),
        })
    }

    /// First index whose coefficient is not divisible by `c`.
    pub fn first_not_divisible(&self, c: &BigInt) -> Option<usize> {
        let v = self.to_bigints();
        (0..v.len()).find(|&i| !(&v[i] % c).is_zero())
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.to_bigints().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_coeff = n == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match n {
                0 => {}
                1 => write!(f, "{}q", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}q^{n}", if show_coeff { "*" } else { "" })?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}
