//! Ramanujan-type congruences `R*_l(An + B) ≡ 0 (mod M)`: claims, their
//! verification against one shared expansion per `(l, M)`, and a bounded
//! scanner for empirical candidates.

mod theorems;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{inverse_mod, is_prime};
use crate::modforms::{legendre, ModformError};
use crate::par;
use crate::report::{CheckReport, Counterexample, Status};
use crate::series::{series_f, theta_phi, Ring, Series, SeriesError};

pub use theorems::{default_instances, theorem_claims, TheoremParams, THEOREM_IDS};

/// Default ceiling on the number of coefficients a single check may expand.
pub const DEFAULT_TRUNC_CEILING: u64 = 8_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("claim needs {needed} coefficients, above the ceiling of {ceiling}")]
    AboveCeiling { needed: u64, ceiling: u64 },
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("invalid parameters for {theorem}: {reason}")]
    InvalidParams { theorem: String, reason: String },
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: u64 },
    #[error("invalid claim: {0}")]
    InvalidClaim(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Modform(#[from] ModformError),
}

/// Epistemic status attached to a claim's report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Theorem,
    Conjecture,
    Candidate,
}

impl ClaimKind {
    pub fn disclaimer(self) -> &'static str {
        match self {
            ClaimKind::Theorem => "consistent with proved theorem",
            ClaimKind::Conjecture => "conjecture: numerical evidence",
            ClaimKind::Candidate => "empirical candidate from a bounded scan, not a theorem",
        }
    }
}

/// `R*_ell(A n + B) ≡ 0 (mod M)` for all `n >= 0`.
///
/// `B` is stored reduced into `[0, A)`; the quotient is kept in `n_offset`
/// so that the original progression is `A (n + n_offset) + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionClaim {
    pub ell: u64,
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    pub n_offset: i64,
    #[serde(rename = "M")]
    pub modulus: u64,
    pub source: String,
    pub kind: ClaimKind,
}

impl ProgressionClaim {
    pub fn new(
        ell: u64,
        a: u64,
        b: i128,
        modulus: u64,
        source: impl Into<String>,
        kind: ClaimKind,
    ) -> Result<Self, CongruenceError> {
        if ell == 0 {
            return Err(CongruenceError::InvalidClaim("ell must be at least 1".into()));
        }
        if a == 0 {
            return Err(CongruenceError::InvalidClaim("A must be at least 1".into()));
        }
        Ring::modular(modulus)?;
        let n_offset = b.div_euclid(a as i128);
        Ok(ProgressionClaim {
            ell,
            a,
            b: b.rem_euclid(a as i128) as u64,
            n_offset: i64::try_from(n_offset)
                .map_err(|_| CongruenceError::InvalidClaim("B too large".into()))?,
            modulus,
            source: source.into(),
            kind,
        })
    }

    pub fn theorem(ell: u64, a: u64, b: i128, modulus: u64, source: impl Into<String>) -> Result<Self, CongruenceError> {
        Self::new(ell, a, b, modulus, source, ClaimKind::Theorem)
    }

    /// `B` as originally stated, before reduction.
    pub fn original_b(&self) -> i128 {
        self.a as i128 * self.n_offset as i128 + self.b as i128
    }

    /// Coefficient index `A n + B` for the original `n`, if non-negative.
    pub fn index(&self, n: u64) -> Option<u64> {
        let i = self.a as i128 * n as i128 + self.original_b();
        u64::try_from(i).ok()
    }

    /// Truncation needed to check `n = 0..=n_max`.
    pub fn trunc_for(&self, n_max: u64) -> u64 {
        self.index(n_max).unwrap_or(0)
    }

    pub fn label(&self) -> String {
        format!("{} [R*_{}({}n+{}) ≡ 0 mod {}]", self.source, self.ell, self.a, self.original_b(), self.modulus)
    }
}

impl fmt::Display for ProgressionClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R*_{}({}n + {}) ≡ 0 (mod {})", self.ell, self.a, self.original_b(), self.modulus)
    }
}

/// Default `n_max` by progression length: long progressions get fewer terms.
pub fn default_n_max(a: u64) -> u64 {
    match a {
        0..=200 => 1000,
        201..=10_000 => 100,
        _ => 3,
    }
}

/// `sum R*_ell(n) q^n = f_ell / phi(-q)` truncated at `trunc` over `ring`,
/// using `f_2 / f_1^2 = 1/phi(-q)`; both factors are sparse.
pub fn rbar_series(ell: u64, trunc: usize, ring: Ring) -> Series {
    let phi_minus = theta_phi(1, trunc, ring).twist();
    series_f(ell as usize, trunc, ring)
        .div(&phi_minus)
        .expect("phi(-q) has constant term 1")
}

/// Check one claim for `n = 0..=n_max` against a precomputed expansion of
/// `sum R*_ell(n) q^n` modulo the claim's modulus (or a multiple of it).
pub fn check_against(claim: &ProgressionClaim, n_max: u64, series: &Series) -> Result<CheckReport, CongruenceError> {
    let start = Instant::now();
    let needed = claim.trunc_for(n_max) as usize;
    if series.trunc() < needed {
        return Err(SeriesError::InsufficientTruncation { trunc: series.trunc(), needed }.into());
    }
    let reduced;
    let series = if series.modulus() == Some(claim.modulus) {
        series
    } else {
        reduced = series.truncate(needed).reduce_mod(claim.modulus)?;
        &reduced
    };
    let residues = series.as_residues().expect("modular series");
    for n in 0..=n_max {
        let Some(i) = claim.index(n) else { continue };
        let v = residues[i as usize];
        if v != 0 {
            let cx = Counterexample { n: n as i64, value: v.to_string(), expected: Some("0".into()) };
            let mut r = CheckReport::fail(claim.label(), n_max, cx, start.elapsed());
            r.claim = Some(claim.clone());
            return Ok(r.with_note(claim.kind.disclaimer()));
        }
    }
    let mut r = CheckReport::pass(claim.label(), n_max, start.elapsed());
    r.claim = Some(claim.clone());
    Ok(r.with_note(format!("{} (checked to n = {n_max})", claim.kind.disclaimer())))
}

/// Verify one claim: expand `sum R*_ell(n) q^n mod M` once to `A n_max + B`
/// and test every coefficient in the progression.
pub fn check_progression(claim: &ProgressionClaim, n_max: u64) -> Result<CheckReport, CongruenceError> {
    check_progression_with_ceiling(claim, n_max, DEFAULT_TRUNC_CEILING)
}

pub fn check_progression_with_ceiling(
    claim: &ProgressionClaim,
    n_max: u64,
    ceiling: u64,
) -> Result<CheckReport, CongruenceError> {
    let start = Instant::now();
    let needed = claim.trunc_for(n_max);
    if needed > ceiling {
        return Err(CongruenceError::AboveCeiling { needed, ceiling });
    }
    let ring = Ring::modular(claim.modulus)?;
    let series = rbar_series(claim.ell, needed as usize, ring);
    let mut report = check_against(claim, n_max, &series)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// A claim together with the `n_max` it should be checked to.
#[derive(Clone, Debug)]
pub struct Job {
    pub claim: ProgressionClaim,
    pub n_max: u64,
}

impl Job {
    pub fn new(claim: ProgressionClaim, n_max: u64) -> Self {
        Job { claim, n_max }
    }

    pub fn with_default_n_max(claim: ProgressionClaim) -> Self {
        let n_max = default_n_max(claim.a);
        Job { claim, n_max }
    }
}

/// Check many claims, sharing one expansion per `(ell, M)` group. Groups run
/// concurrently; `provide(ell, ring, trunc)` supplies each group's series
/// (e.g. from a cache) and `on_report` sees every report as it completes.
/// Claims above `ceiling` produce error reports without any expansion.
pub fn check_jobs_with<P, R>(jobs: &[Job], ceiling: u64, provide: P, on_report: R) -> Vec<CheckReport>
where
    P: Fn(u64, Ring, usize) -> Series + Sync + Send,
    R: Fn(&CheckReport) + Sync + Send,
{
    let mut groups: BTreeMap<(u64, u64), Vec<usize>> = BTreeMap::new();
    let mut reports: Vec<Option<CheckReport>> = vec![None; jobs.len()];
    for (i, job) in jobs.iter().enumerate() {
        let needed = job.claim.trunc_for(job.n_max);
        if needed > ceiling {
            let err = CongruenceError::AboveCeiling { needed, ceiling };
            let mut r = CheckReport::error(job.claim.label(), err.to_string());
            r.claim = Some(job.claim.clone());
            on_report(&r);
            reports[i] = Some(r);
        } else {
            groups.entry((job.claim.ell, job.claim.modulus)).or_default().push(i);
        }
    }
    let groups: Vec<((u64, u64), Vec<usize>)> = groups.into_iter().collect();
    let done = par::map(&groups, |((ell, m), members)| {
        let start = Instant::now();
        let trunc = members.iter().map(|&i| jobs[i].claim.trunc_for(jobs[i].n_max)).max().unwrap_or(0);
        let ring = Ring::modular(*m).expect("validated modulus");
        let series = provide(*ell, ring, trunc as usize);
        let build = start.elapsed();
        members
            .iter()
            .map(|&i| {
                let job = &jobs[i];
                let mut r = check_against(&job.claim, job.n_max, &series).unwrap_or_else(|e| {
                    let mut r = CheckReport::error(job.claim.label(), e.to_string());
                    r.claim = Some(job.claim.clone());
                    r
                });
                r.elapsed += build / members.len() as u32;
                on_report(&r);
                (i, r)
            })
            .collect::<Vec<_>>()
    });
    for (i, r) in done.into_iter().flatten() {
        reports[i] = Some(r);
    }
    reports.into_iter().map(|r| r.expect("every job reported")).collect()
}

pub fn check_jobs(jobs: &[Job], ceiling: u64) -> Vec<CheckReport> {
    check_jobs_with(jobs, ceiling, |ell, ring, t| rbar_series(ell, t, ring), |_| {})
}

/// `a^{-1} mod p` in `(0, p)`.
pub fn inv_mod(a: i64, p: u64) -> Result<u64, CongruenceError> {
    inverse_mod(a as i128, p).ok_or(CongruenceError::NotInvertible { a, m: p })
}

/// Residues `r` in `1..p` for which `inv(3, p) * 4r + 1` is a quadratic
/// nonresidue modulo the prime `p >= 5`.
pub fn james3_residues(p: u64) -> Result<Vec<u64>, CongruenceError> {
    if p < 5 || !is_prime(p) {
        return Err(CongruenceError::InvalidParams {
            theorem: "james3".into(),
            reason: format!("p = {p} must be a prime >= 5"),
        });
    }
    let inv3 = inv_mod(3, p)?;
    let mut out = Vec::new();
    for r in 1..p {
        let s = ((inv3 as u128 * 4 * r as u128 + 1) % p as u128) as i64;
        if legendre(s, p)? == -1 {
            out.push(r);
        }
    }
    Ok(out)
}

/// Every `(A <= a_max, B < A, M in moduli)` whose first `n_max + 1` terms
/// all vanish modulo `M`. Results are candidates, not theorems.
pub fn scan(ell: u64, a_max: u64, moduli: &[u64], n_max: u64) -> Result<Vec<ProgressionClaim>, CongruenceError> {
    let mut out = Vec::new();
    for &m in moduli {
        let ring = Ring::modular(m)?;
        let trunc = (a_max * (n_max + 1)) as usize;
        let series = rbar_series(ell, trunc, ring);
        let residues = series.as_residues().expect("modular");
        let found = par::map_range(1..a_max as usize + 1, |a| {
            (0..a)
                .filter(|&b| (0..=n_max as usize).all(|n| residues[a * n + b] == 0))
                .collect::<Vec<_>>()
        });
        for (i, bs) in found.into_iter().enumerate() {
            let a = i as u64 + 1;
            for b in bs {
                out.push(ProgressionClaim::new(
                    ell,
                    a,
                    b as i128,
                    m,
                    format!("scan(l={ell}, n_max={n_max})"),
                    ClaimKind::Candidate,
                )?);
            }
        }
    }
    Ok(out)
}

/// Recompute a failing claim's coefficient with the dynamic-programming
/// oracle (when the index is within its bound) and return it reduced mod M.
pub fn oracle_residue(claim: &ProgressionClaim, n: u64) -> Option<BigInt> {
    let i = claim.index(n)? as usize;
    if i > crate::enumeration::DP_BOUND {
        return None;
    }
    let table = crate::enumeration::count_rbar_dp(claim.ell, i).ok()?;
    Some(BigInt::from(table[i].clone()) % claim.modulus)
}

/// True when every report passed.
pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.status == Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_large_offsets() {
        let c = ProgressionClaim::theorem(6, 9, 23, 8, "t").unwrap();
        assert_eq!((c.b, c.n_offset), (5, 2));
        assert_eq!(c.index(0), Some(23));
        assert_eq!(c.original_b(), 23);
        let neg = ProgressionClaim::theorem(6, 9, -4, 8, "t").unwrap();
        assert_eq!((neg.b, neg.n_offset), (5, -1));
        assert_eq!(neg.index(0), None);
        assert_eq!(neg.index(1), Some(5));
    }

    #[test]
    fn invalid_claims() {
        assert!(ProgressionClaim::theorem(3, 0, 1, 8, "t").is_err());
        assert!(ProgressionClaim::theorem(3, 9, 1, 1, "t").is_err());
        assert!(ProgressionClaim::theorem(0, 9, 1, 8, "t").is_err());
    }

    #[test]
    fn rbar_series_matches_eta_form() {
        let q = crate::qexpr::QExpr::rbar_gf(6);
        for ring in [Ring::INTEGERS, Ring::modular(96).unwrap()] {
            let a = crate::qexpr::evaluate(&q, 400, ring).unwrap();
            assert_eq!(a, rbar_series(6, 400, ring));
        }
    }

    #[test]
    fn elthm_first_claim() {
        let c = ProgressionClaim::theorem(3, 9, 4, 12, "elthm").unwrap();
        assert!(check_progression(&c, 100).unwrap().passed());
    }

    #[test]
    fn stronger_modulus_fails_at_zero() {
        let c = ProgressionClaim::theorem(3, 9, 4, 24, "negative control").unwrap();
        let r = check_progression(&c, 1).unwrap();
        assert_eq!(r.status, Status::Fail);
        let cx = r.counterexample.unwrap();
        assert_eq!((cx.n, cx.value.as_str()), (0, "12"));
        assert_eq!(oracle_residue(&c, 0), Some(BigInt::from(12)));
    }

    #[test]
    fn ceiling_is_enforced() {
        let c = ProgressionClaim::theorem(6, 1_000_000, 5, 8, "big").unwrap();
        assert_eq!(
            check_progression_with_ceiling(&c, 10, 1000).unwrap_err(),
            CongruenceError::AboveCeiling { needed: 10_000_005, ceiling: 1000 }
        );
    }

    #[test]
    fn inverse_of_three() {
        assert_eq!(inv_mod(3, 5).unwrap(), 2);
        assert_eq!(inv_mod(3, 7).unwrap(), 5);
        assert!(inv_mod(3, 6).is_err());
    }

    #[test]
    fn james3_residue_sets() {
        assert_eq!(james3_residues(5).unwrap(), vec![2, 4]);
        assert!(!james3_residues(5).unwrap().contains(&3));
        assert!(james3_residues(3).is_err());
        assert!(james3_residues(9).is_err());
        for r in james3_residues(7).unwrap() {
            let c = ProgressionClaim::theorem(6, 21, 3 * r as i128 + 2, 8, "james3").unwrap();
            assert!(check_progression(&c, 200).unwrap().passed(), "r = {r}");
        }
    }

    #[test]
    fn scan_of_trivial_progression_is_empty() {
        assert!(scan(5, 1, &[2], 50).unwrap().is_empty());
    }

    #[test]
    fn scan_rediscovers_l3_claims() {
        let found = scan(3, 9, &[12, 48], 200).unwrap();
        let has = |a, b, m| found.iter().any(|c| c.a == a && c.b == b && c.modulus == m);
        assert!(has(9, 4, 12));
        assert!(has(9, 7, 48));
        for c in &found {
            assert!(check_progression(c, 200).unwrap().passed());
        }
    }

    #[test]
    fn grouped_checks_match_single_checks() {
        let jobs: Vec<Job> = default_instances("elthm")
            .unwrap()
            .into_iter()
            .chain(default_instances("james2").unwrap())
            .map(|c| Job::new(c, 150))
            .collect();
        let grouped = check_jobs(&jobs, DEFAULT_TRUNC_CEILING);
        assert_eq!(grouped.len(), jobs.len());
        for (job, r) in jobs.iter().zip(&grouped) {
            let single = check_progression(&job.claim, job.n_max).unwrap();
            assert_eq!(r.status, single.status);
            assert_eq!(r.claim.as_ref(), Some(&job.claim));
        }
    }
}
