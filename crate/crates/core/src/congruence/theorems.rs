//! One claim generator per congruence theorem, plus the default instances
//! used by `verify all`.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{ClaimKind, CongruenceError, ProgressionClaim};
use crate::arith::is_prime;
use crate::modforms::{legendre, tau};

pub const THEOREM_IDS: &[&str] = &[
    "elthm", "thm3n", "thm-2ell", "thm-ellr", "nathsel", "saik", "james1", "james2", "james3",
    "family-mf", "t4", "conj-128",
];

/// Parameter binding for [`theorem_claims`]. Unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoremParams {
    pub k: Option<u32>,
    pub ell: Option<u64>,
    pub p: Option<u64>,
    pub primes: Vec<u64>,
    pub j: Option<i64>,
    pub s: Option<u64>,
    pub k_max: Option<u32>,
}

fn invalid(theorem: &str, reason: impl Into<String>) -> CongruenceError {
    CongruenceError::InvalidParams { theorem: theorem.into(), reason: reason.into() }
}

fn need<T: Copy>(theorem: &str, v: Option<T>, name: &str) -> Result<T, CongruenceError> {
    v.ok_or_else(|| invalid(theorem, format!("missing parameter `{name}`")))
}

fn claim(ell: u64, a: u64, b: i128, m: u64, source: String) -> Result<ProgressionClaim, CongruenceError> {
    ProgressionClaim::new(ell, a, b, m, source, ClaimKind::Theorem)
}

fn checked_pow(theorem: &str, base: u64, e: u32) -> Result<u64, CongruenceError> {
    base.checked_pow(e).ok_or_else(|| invalid(theorem, "progression modulus overflows u64"))
}

/// Generate the claims of theorem `id` under the given parameter binding.
pub fn theorem_claims(id: &str, params: &TheoremParams) -> Result<Vec<ProgressionClaim>, CongruenceError> {
    match id {
        "elthm" => Ok(vec![
            claim(3, 9, 4, 12, "elthm".into())?,
            claim(3, 9, 7, 48, "elthm".into())?,
            claim(6, 9, 5, 24, "elthm".into())?,
            claim(6, 9, 8, 96, "elthm".into())?,
        ]),
        "thm3n" => {
            let k = need(id, params.k, "k")?;
            if k == 0 {
                return Err(invalid(id, "k must be at least 1"));
            }
            let ell = 3 * k as u64;
            let src = format!("thm3n(k={k})");
            Ok(vec![claim(ell, 3, 1, 2, src.clone())?, claim(ell, 3, 2, 4, src)?])
        }
        "thm-2ell" => {
            let ell = need(id, params.ell, "ell")?;
            if ell == 0 {
                return Err(invalid(id, "ell must be at least 1"));
            }
            Ok(vec![claim(2 * ell, 2, 1, 2, format!("thm-2ell(ell={ell})"))?])
        }
        "thm-ellr" => {
            let ell = need(id, params.ell, "ell")?;
            if ell < 2 {
                return Err(invalid(id, "ell must be at least 2 so that some r is not divisible by ell"));
            }
            (1..ell)
                .map(|r| claim(ell, ell, r as i128, 2, format!("thm-ellr(ell={ell}, r={r})")))
                .collect()
        }
        "nathsel" => {
            const TABLE: [(u64, i128, u64); 11] = [
                (16, 9, 8),
                (16, 11, 16),
                (32, 25, 16),
                (64, 37, 32),
                (16, 13, 64),
                (32, 21, 64),
                (16, 15, 128),
                (32, 29, 256),
                (128, 85, 512),
                (64, 53, 1024),
                (128, 117, 4096),
            ];
            TABLE.iter().map(|&(a, b, m)| claim(8, a, b, m, "nathsel".into())).collect()
        }
        "saik" => {
            let k = need(id, params.k, "k")?;
            if !(3..64).contains(&k) {
                return Err(invalid(id, "k must satisfy 3 <= k < 64"));
            }
            const MODULI: [u64; 7] = [2, 2, 4, 2, 8, 4, 16];
            let ell = 1u64 << k;
            (1..=7)
                .zip(MODULI)
                .map(|(i, m)| claim(ell, 8, i, m, format!("saik(k={k})")))
                .collect()
        }
        "james1" => Ok(vec![claim(6, 6, 5, 8, "james1".into())?]),
        "james2" => Ok(vec![claim(6, 9, 5, 8, "james2".into())?, claim(6, 9, 8, 8, "james2".into())?]),
        "james3" => {
            let p = need(id, params.p, "p")?;
            let residues = super::james3_residues(p)?;
            residues
                .into_iter()
                .map(|r| claim(6, 3 * p, 3 * r as i128 + 2, 8, format!("james3(p={p}, r={r})")))
                .collect()
        }
        "family-mf" => family_mf(&params.primes, need(id, params.j, "j")?).map(|c| vec![c]),
        "t4" => t4(need(id, params.p, "p")?, need(id, params.s, "s")?, params.k_max.unwrap_or(0)),
        "conj-128" => {
            let k_max = params.k_max.unwrap_or(1);
            let mut out = vec![ProgressionClaim::new(6, 54, 38, 128, "conj-128(k=0)", ClaimKind::Conjecture)?];
            for k in 1..=k_max {
                let p2k = checked_pow(id, 3, 2 * k)? as i128;
                let a = 18 * checked_pow(id, 3, 2 * k + 1)?;
                out.push(ProgressionClaim::new(
                    6,
                    a,
                    (153 * p2k - 1) / 4,
                    128,
                    format!("conj-128(k={k})"),
                    ClaimKind::Conjecture,
                )?);
            }
            Ok(out)
        }
        other => Err(CongruenceError::UnknownTheorem(other.to_string())),
    }
}

/// `A = 18 prod p_i^2`, `B = (9 p_1^2 .. p_k^2 p_{k+1} (4j + p_{k+1}) - 1) / 4`.
fn family_mf(primes: &[u64], j: i64) -> Result<ProgressionClaim, CongruenceError> {
    let id = "family-mf";
    let Some((&last, head)) = primes.split_last() else {
        return Err(invalid(id, "at least one prime is required"));
    };
    for &p in primes {
        if p < 3 || !is_prime(p) {
            return Err(invalid(id, format!("p = {p} must be an odd prime")));
        }
        if p % 8 == 1 {
            return Err(invalid(id, format!("p = {p} must not be 1 mod 8")));
        }
    }
    if j.rem_euclid(last as i64) == 0 {
        return Err(invalid(id, format!("j = {j} must not be divisible by p_(k+1) = {last}")));
    }
    let mut a: u128 = 18;
    for &p in primes {
        a = a
            .checked_mul(p as u128 * p as u128)
            .filter(|&a| a <= u64::MAX as u128)
            .ok_or_else(|| invalid(id, "A overflows u64"))?;
    }
    let head_sq: i128 = head.iter().map(|&p| p as i128 * p as i128).product();
    let num = 9 * head_sq * last as i128 * (4 * j as i128 + last as i128) - 1;
    let (b, rem) = num.div_rem(&4);
    if !rem.is_zero() {
        return Err(invalid(id, format!("9 p^2 .. - 1 = {num} is not divisible by 4")));
    }
    // With every prime equal the family also has the closed form
    // 18 p^(2(k+1)) n + 9 p^(2k+1) j + (9 p^(2(k+1)) - 1)/4; the two must agree.
    if primes.iter().all(|&p| p == last) {
        let p = last as i128;
        let k = head.len() as u32;
        let alt_b = 9 * p.pow(2 * k + 1) * j as i128 + (9 * p.pow(2 * (k + 1)) - 1) / 4;
        if alt_b != b || 18 * p.pow(2 * (k + 1)) != a as i128 {
            return Err(invalid(id, "closed forms disagree"));
        }
    }
    let binding = format!("family-mf(p={primes:?}, j={j})");
    claim(6, a as u64, b, 8, binding)
}

/// `(p, s)` with `s ≡ 1 (mod 8)`, `1 <= s <= 8p`, `(s/p) = -1`:
/// `18 p n + (9s - 1)/4`, and when `tau(p)` is even the deeper
/// `18 p^(2k+1) n + (9 s p^(2k) - 1)/4` for `1 <= k <= k_max`.
fn t4(p: u64, s: u64, k_max: u32) -> Result<Vec<ProgressionClaim>, CongruenceError> {
    let id = "t4";
    if p < 3 || !is_prime(p) {
        return Err(invalid(id, format!("p = {p} must be an odd prime")));
    }
    if s % 8 != 1 {
        return Err(invalid(id, format!("s = {s} must be 1 mod 8")));
    }
    if s < 1 || s > 8 * p {
        return Err(invalid(id, format!("s = {s} must lie in 1..=8p")));
    }
    if legendre(s as i64, p)? != -1 {
        return Err(invalid(id, format!("s = {s} must be a quadratic nonresidue mod {p}")));
    }
    let b0 = (9 * s as i128 - 1) / 4;
    let mut out = vec![claim(6, 18 * p, b0, 8, format!("t4(p={p}, s={s}, k=0)"))?];
    if k_max == 0 {
        return Ok(out);
    }
    let tau_p = &tau(p as usize)[p as usize];
    if tau_p.is_odd() {
        return Err(invalid(id, format!("deeper claims need tau({p}) even, but tau({p}) = {tau_p}")));
    }
    for k in 1..=k_max {
        let p2k = checked_pow(id, p, 2 * k)? as i128;
        let a = 18u64
            .checked_mul(checked_pow(id, p, 2 * k + 1)?)
            .ok_or_else(|| invalid(id, "A overflows u64"))?;
        let num = 9 * s as i128 * p2k - 1;
        debug_assert_eq!(num % 4, 0);
        let mut c = claim(6, a, num / 4, 8, format!("t4(p={p}, s={s}, k={k})"))?;
        c.source.push_str(&format!(" tau({p})={}", tau_p.to_i64().map_or("big".into(), |t| t.to_string())));
        out.push(c);
    }
    Ok(out)
}

/// The default parameter bindings for `id`, as exercised by `verify all`.
pub fn default_instances(id: &str) -> Result<Vec<ProgressionClaim>, CongruenceError> {
    let p = TheoremParams::default;
    let mut out = Vec::new();
    let mut add = |params: TheoremParams| -> Result<(), CongruenceError> {
        out.extend(theorem_claims(id, &params)?);
        Ok(())
    };
    match id {
        "elthm" | "nathsel" | "james1" | "james2" => add(p())?,
        "thm3n" => {
            for k in 1..=3 {
                add(TheoremParams { k: Some(k), ..p() })?;
            }
        }
        "thm-2ell" => {
            for ell in 1..=6 {
                add(TheoremParams { ell: Some(ell), ..p() })?;
            }
        }
        "thm-ellr" => {
            for ell in 2..=8 {
                add(TheoremParams { ell: Some(ell), ..p() })?;
            }
        }
        "saik" => {
            for k in 3..=5 {
                add(TheoremParams { k: Some(k), ..p() })?;
            }
        }
        "james3" => {
            for prime in [5, 7, 11, 13] {
                add(TheoremParams { p: Some(prime), ..p() })?;
            }
        }
        "family-mf" => {
            for (primes, j) in [
                (vec![3], 1),
                (vec![3], 2),
                (vec![5], 1),
                (vec![7], 3),
                (vec![3, 3], 1),
                (vec![11, 13], 2),
            ] {
                add(TheoremParams { primes, j: Some(j), ..p() })?;
            }
        }
        "t4" => {
            for (prime, s, k_max) in [(3, 17, 1), (5, 17, 1), (5, 33, 1), (7, 17, 0), (7, 33, 0), (7, 41, 0)] {
                add(TheoremParams { p: Some(prime), s: Some(s), k_max: Some(k_max), ..p() })?;
            }
        }
        "conj-128" => add(TheoremParams { k_max: Some(1), ..p() })?,
        other => return Err(CongruenceError::UnknownTheorem(other.to_string())),
    }
    Ok(out)
}
