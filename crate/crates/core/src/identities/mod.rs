//! Catalog of q-series identities and congruences, each side a base series
//! followed by a list of coefficient-level steps, and a verifier that
//! compares both sides to a truncation.

mod catalog;

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::enumeration::{count_rbar_dp, partition_table, DP_BOUND};
use crate::par;
use crate::qexpr::{evaluate, EvalError, QExpr};
use crate::report::{CheckReport, Counterexample};
use crate::series::{theta_phi, Ring, Series, SeriesError};

pub use catalog::{catalog, findings};

/// Smallest truncation accepted by [`verify_identity`].
pub const MIN_TRUNC: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("identity {id}: truncation {trunc} is below the minimum {MIN_TRUNC}")]
    TruncTooSmall { id: String, trunc: usize },
    #[error("identity {id}: {source}")]
    Eval { id: String, source: EvalError },
    #[error("identity {id}: {source}")]
    Series { id: String, source: SeriesError },
    #[error("identity {id}: {message}")]
    Builtin { id: String, message: String },
    #[error("unknown identity `{0}`")]
    Unknown(String),
}

/// Failure while building one side, before the entry id is attached.
#[derive(Debug)]
enum SideError {
    Eval(EvalError),
    Series(SeriesError),
    Builtin(String),
}

impl From<EvalError> for SideError {
    fn from(e: EvalError) -> Self {
        SideError::Eval(e)
    }
}

impl From<SeriesError> for SideError {
    fn from(e: SeriesError) -> Self {
        SideError::Series(e)
    }
}

impl SideError {
    fn with_id(self, id: &str) -> IdentityError {
        let id = id.to_string();
        match self {
            SideError::Eval(source) => IdentityError::Eval { id, source },
            SideError::Series(source) => IdentityError::Series { id, source },
            SideError::Builtin(message) => IdentityError::Builtin { id, message },
        }
    }
}

/// Series computed directly from their combinatorial or summation
/// definitions rather than through the product engine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `sum R*_l(n) q^n` by the dynamic-programming counter.
    Rbar { ell: u64 },
    Partitions,
    Overpartitions,
    /// `(prod_{i>=1} (1 - q^{ki}))^e` by repeated binomial multiplication.
    NaiveProduct { k: usize, e: u32 },
    /// `sum_{n in Z} (-1)^n q^{n(3n-1)/2}`.
    PentagonalSum,
    /// `sum_{n>=0} (-1)^n (2n+1) q^{n(n+1)/2}`.
    TriangularSum,
    /// `sum_{n>=0} q^{(2n+1)^2}`.
    OddSquares,
    /// `prod_{i>=0} phi(q^{2^i})^{2^i}`, all factors that reach the truncation.
    PhiTower,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Rbar { ell } => write!(f, "sum R*_{ell}(n) q^n [counted]"),
            Builtin::Partitions => write!(f, "sum p(n) q^n [counted]"),
            Builtin::Overpartitions => write!(f, "sum pbar(n) q^n [counted]"),
            Builtin::NaiveProduct { k, e: 1 } => write!(f, "prod (1 - q^{k}i) [naive]"),
            Builtin::NaiveProduct { k, e } => write!(f, "(prod (1 - q^{k}i))^{e} [naive]"),
            Builtin::PentagonalSum => write!(f, "sum (-1)^n q^(n(3n-1)/2)"),
            Builtin::TriangularSum => write!(f, "sum (-1)^n (2n+1) q^(n(n+1)/2)"),
            Builtin::OddSquares => write!(f, "sum q^((2n+1)^2)"),
            Builtin::PhiTower => write!(f, "prod phi(q^(2^i))^(2^i)"),
        }
    }
}

fn to_series(v: Vec<BigInt>, ring: Ring) -> Series {
    Series::from_bigints(v, ring)
}

fn from_unsigned(v: Vec<BigUint>, ring: Ring) -> Series {
    to_series(v.into_iter().map(BigInt::from).collect(), ring)
}

impl Builtin {
    fn evaluate(&self, trunc: usize, ring: Ring) -> Result<Series, SideError> {
        let dp_guard = |what: &str| {
            if trunc > DP_BOUND {
                Err(SideError::Builtin(format!("{what} is counted only up to n = {DP_BOUND}, {trunc} requested")))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            Builtin::Rbar { ell } => {
                dp_guard("R*")?;
                from_unsigned(count_rbar_dp(*ell, trunc).map_err(|e| SideError::Builtin(e.to_string()))?, ring)
            }
            Builtin::Partitions => {
                dp_guard("p(n)")?;
                from_unsigned(partition_table(trunc), ring)
            }
            Builtin::Overpartitions => {
                dp_guard("pbar(n)")?;
                let big_ell = trunc as u64 + 1;
                from_unsigned(count_rbar_dp(big_ell, trunc).map_err(|e| SideError::Builtin(e.to_string()))?, ring)
            }
            Builtin::NaiveProduct { k, e } => {
                let mut v = vec![BigInt::zero(); trunc + 1];
                v[0] = BigInt::one();
                for _ in 0..*e {
                    for step in (*k..=trunc).step_by(*k) {
                        for n in (step..=trunc).rev() {
                            let (lo, hi) = v.split_at_mut(n);
                            hi[0] -= &lo[n - step];
                        }
                    }
                }
                to_series(v, ring)
            }
            Builtin::PentagonalSum => {
                let mut v = vec![BigInt::zero(); trunc + 1];
                let bound = trunc as i64;
                for n in -(bound + 1)..=(bound + 1) {
                    let e = n * (3 * n - 1) / 2;
                    if (0..=bound).contains(&e) {
                        v[e as usize] += if n % 2 == 0 { 1 } else { -1 };
                    }
                }
                to_series(v, ring)
            }
            Builtin::TriangularSum => {
                let mut v = vec![BigInt::zero(); trunc + 1];
                for n in 0usize.. {
                    let e = n * (n + 1) / 2;
                    if e > trunc {
                        break;
                    }
                    let c = 2 * n as i64 + 1;
                    v[e] += if n % 2 == 0 { c } else { -c };
                }
                to_series(v, ring)
            }
            Builtin::OddSquares => {
                let mut v = vec![BigInt::zero(); trunc + 1];
                for n in 0usize.. {
                    let e = (2 * n + 1) * (2 * n + 1);
                    if e > trunc {
                        break;
                    }
                    v[e] += 1;
                }
                to_series(v, ring)
            }
            Builtin::PhiTower => {
                let mut acc = Series::one(trunc, ring);
                let mut k = 1usize;
                while k <= trunc {
                    acc = acc.mul(&theta_phi(k, trunc, ring).pow(k as i64)?)?;
                    k *= 2;
                }
                acc
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Expr(QExpr),
    Builtin(Builtin),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Expr(e) => write!(f, "{e}"),
            Source::Builtin(b) => write!(f, "{b}"),
        }
    }
}

impl Source {
    fn evaluate(&self, trunc: usize, ring: Ring) -> Result<Series, SideError> {
        match self {
            Source::Expr(e) => Ok(evaluate(e, trunc, ring)?),
            Source::Builtin(b) => b.evaluate(trunc, ring),
        }
    }
}

/// Coefficient-level operations applied after the base series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Keep exponents `m n + r`, re-indexed by `n`.
    Dissect { m: usize, r: usize },
    /// `q -> q^m`
    Magnify(usize),
    /// Multiply by `q^e`.
    Shift(usize),
    Scale(i64),
    /// `q -> -q`
    Twist,
    /// Multiply by another expression.
    MulBy(QExpr),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Dissect { m, r } => write!(f, "dissect({m},{r})"),
            Step::Magnify(m) => write!(f, "magnify({m})"),
            Step::Shift(e) => write!(f, "shift({e})"),
            Step::Scale(c) => write!(f, "scale({c})"),
            Step::Twist => write!(f, "twist"),
            Step::MulBy(e) => write!(f, "times({e})"),
        }
    }
}

impl Step {
    fn apply(&self, s: Series) -> Result<Series, SideError> {
        Ok(match self {
            Step::Dissect { m, r } => s.dissect(*m, *r)?,
            Step::Magnify(m) => s.magnify(*m)?,
            Step::Shift(e) => s.shift(*e),
            Step::Scale(c) => s.scale(&BigInt::from(*c)),
            Step::Twist => s.twist(),
            Step::MulBy(e) => {
                let other = evaluate(e, s.trunc(), s.ring())?;
                s.mul(&other)?
            }
        })
    }

    /// Base truncation needed for this step to produce `trunc`.
    fn input_trunc(&self, trunc: usize) -> usize {
        match self {
            Step::Dissect { m, r } => m * trunc + r,
            Step::Magnify(m) => trunc / m,
            Step::Shift(e) => trunc.saturating_sub(*e),
            Step::Scale(_) | Step::Twist | Step::MulBy(_) => trunc,
        }
    }
}

/// A base series followed by steps applied left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissectExpr {
    pub base: Source,
    pub steps: Vec<Step>,
}

impl DissectExpr {
    pub fn expr(e: QExpr) -> Self {
        DissectExpr { base: Source::Expr(e), steps: Vec::new() }
    }

    pub fn builtin(b: Builtin) -> Self {
        DissectExpr { base: Source::Builtin(b), steps: Vec::new() }
    }

    pub fn then(mut self, step: Step) -> Self {
        self.steps.push(step);
        self
    }

    pub fn then_all(mut self, steps: &[Step]) -> Self {
        self.steps.extend_from_slice(steps);
        self
    }

    /// Truncation the base must be evaluated to.
    pub fn base_trunc(&self, trunc: usize) -> usize {
        self.steps.iter().rev().fold(trunc, |t, s| s.input_trunc(t))
    }

    fn apply_steps(&self, base: Series, trunc: usize) -> Result<Series, SideError> {
        let mut s = base.truncate(self.base_trunc(trunc));
        for step in &self.steps {
            s = step.apply(s)?;
        }
        if s.trunc() < trunc {
            return Err(SeriesError::InsufficientTruncation { trunc: s.trunc(), needed: trunc }.into());
        }
        Ok(s.truncate(trunc))
    }

    fn evaluate(&self, trunc: usize, ring: Ring) -> Result<Series, SideError> {
        let base = self.base.evaluate(self.base_trunc(trunc), ring)?;
        self.apply_steps(base, trunc)
    }

    /// Evaluate to `trunc` over `ring`, naming `id` in any error.
    pub fn evaluate_as(&self, id: &str, trunc: usize, ring: Ring) -> Result<Series, IdentityError> {
        self.evaluate(trunc, ring).map_err(|e| e.with_id(id))
    }

    /// The leading integer scalar of an unstepped product side, if any.
    pub fn leading_scalar(&self) -> Option<BigInt> {
        match (&self.base, self.steps.is_empty()) {
            (Source::Expr(e), true) => crate::qexpr::leading_scalar(e),
            _ => None,
        }
    }
}

impl fmt::Display for DissectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for s in &self.steps {
            write!(f, " |> {s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    /// Both sides are compared modulo `M`.
    Congruent(u64),
}

impl Mode {
    pub fn ring(self) -> Ring {
        match self {
            Mode::Exact => Ring::INTEGERS,
            Mode::Congruent(m) => Ring::modular(m).expect("catalog moduli are valid"),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Congruent(m) => write!(f, "mod {m}"),
        }
    }
}

/// Where a derived entry comes from: its lhs is the parent's lhs followed
/// by `steps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub parent: String,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityEntry {
    pub id: String,
    pub aliases: Vec<String>,
    pub lhs: DissectExpr,
    pub rhs: DissectExpr,
    pub mode: Mode,
    pub chain: Option<Chain>,
    pub provenance: String,
}

impl IdentityEntry {
    pub fn matches(&self, name: &str) -> bool {
        self.id == name || self.aliases.iter().any(|a| a == name)
    }
}

/// Look up a catalog entry by id or alias.
pub fn find(name: &str) -> Result<IdentityEntry, IdentityError> {
    catalog()
        .into_iter()
        .find(|e| e.matches(name))
        .ok_or_else(|| IdentityError::Unknown(name.to_string()))
}

fn compare(entry: &IdentityEntry, lhs: &Series, rhs: &Series, trunc: usize, start: Instant) -> CheckReport {
    let id = entry.id.clone();
    let diff = lhs.first_difference(rhs).expect("sides share a ring");
    let report = match diff {
        None => CheckReport::pass(id, trunc as u64, start.elapsed()),
        Some(n) => {
            let cx = Counterexample {
                n: n as i64,
                value: lhs.coeff(n).expect("in range").to_string(),
                expected: Some(rhs.coeff(n).expect("in range").to_string()),
            };
            CheckReport::fail(id, trunc as u64, cx, start.elapsed())
        }
    };
    report.with_note(format!("{} ({})", entry.mode, entry.provenance))
}

/// Evaluate both sides of `entry` to `trunc` and compare them exactly, or
/// modulo `M` for congruent entries.
pub fn verify_identity(entry: &IdentityEntry, trunc: usize) -> Result<CheckReport, IdentityError> {
    if trunc < MIN_TRUNC {
        return Err(IdentityError::TruncTooSmall { id: entry.id.clone(), trunc });
    }
    let start = Instant::now();
    let ring = entry.mode.ring();
    let lhs = entry.lhs.evaluate_as(&entry.id, trunc, ring)?;
    let rhs = entry.rhs.evaluate_as(&entry.id, trunc, ring)?;
    Ok(compare(entry, &lhs, &rhs, trunc, start))
}

/// Truncation `verify_all(trunc)` uses for an entry: congruent entries are
/// cheap in residue arithmetic and run twice as deep.
pub fn trunc_for(entry: &IdentityEntry, trunc: usize) -> usize {
    match entry.mode {
        Mode::Exact => trunc,
        Mode::Congruent(_) => 2 * trunc,
    }
}

/// Verify every entry of `entries`. Base series shared between entries (the
/// generating functions, mostly) are evaluated once at the deepest
/// truncation any entry needs; evaluation errors become error reports.
pub fn verify_entries(entries: &[IdentityEntry], trunc: usize) -> Vec<CheckReport> {
    verify_entries_streaming(entries, trunc, |_| {})
}

/// [`verify_entries`], handing each report to `on_report` as soon as it is
/// ready (from worker threads, in completion order).
pub fn verify_entries_streaming(
    entries: &[IdentityEntry],
    trunc: usize,
    on_report: impl Fn(&CheckReport) + Sync,
) -> Vec<CheckReport> {
    if trunc < MIN_TRUNC {
        return entries
            .iter()
            .map(|e| {
                let err = IdentityError::TruncTooSmall { id: e.id.clone(), trunc };
                let r = CheckReport::error(e.id.clone(), err.to_string());
                on_report(&r);
                r
            })
            .collect();
    }
    let mut needs: HashMap<(Source, Ring), usize> = HashMap::new();
    for e in entries {
        let t = trunc_for(e, trunc);
        for side in [&e.lhs, &e.rhs] {
            let slot = needs.entry((side.base.clone(), e.mode.ring())).or_insert(0);
            *slot = (*slot).max(side.base_trunc(t));
        }
    }
    let keys: Vec<((Source, Ring), usize)> = needs.into_iter().collect();
    let bases = par::map(&keys, |((src, ring), t)| src.evaluate(*t, *ring).map_err(|e| format!("{:?}", e)));
    let memo: HashMap<(Source, Ring), Result<Series, String>> =
        keys.into_iter().map(|(k, _)| k).zip(bases).collect();

    par::map(entries, |e| {
        let start = Instant::now();
        let t = trunc_for(e, trunc);
        let ring = e.mode.ring();
        let side = |d: &DissectExpr| -> Result<Series, IdentityError> {
            match &memo[&(d.base.clone(), ring)] {
                Ok(base) => d.apply_steps(base.clone(), t).map_err(|err| err.with_id(&e.id)),
                // re-evaluate alone to get a typed error carrying this entry's id
                Err(_) => d.evaluate_as(&e.id, t, ring),
            }
        };
        let report = match side(&e.lhs).and_then(|l| side(&e.rhs).map(|r| (l, r))) {
            Ok((l, r)) => compare(e, &l, &r, t, start),
            Err(err) => CheckReport::error(e.id.clone(), err.to_string()),
        };
        on_report(&report);
        report
    })
}

/// Verify the whole catalog (exact entries at `trunc`, congruent entries
/// at `2 * trunc`).
pub fn verify_all(trunc: usize) -> Vec<CheckReport> {
    verify_entries(&catalog(), trunc)
}
