//! Coefficient kernels for products and quotients.
//!
//! Products walk the sparser operand as a `(exponent, coefficient)` list and
//! accumulate into chunks of the output, which are filled independently.
//! Quotients are a forward recurrence and stay sequential.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::par;

/// Work per output chunk is `terms * chunk`; keep chunks coarse.
const MIN_CHUNK: usize = 512;

pub(super) enum Factor {
    One,
    MinusOne,
    Small(i64),
    Big(BigInt),
}

impl Factor {
    fn of(c: &BigInt) -> Factor {
        match c.to_i64() {
            Some(1) => Factor::One,
            Some(-1) => Factor::MinusOne,
            Some(s) => Factor::Small(s),
            None => Factor::Big(c.clone()),
        }
    }
}

pub(super) fn terms_exact(v: &[BigInt], trunc: usize) -> Vec<(usize, Factor)> {
    v.iter()
        .take(trunc + 1)
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e, Factor::of(c)))
        .collect()
}

pub(super) fn terms_mod(v: &[u64], trunc: usize) -> Vec<(usize, u64)> {
    v.iter()
        .take(trunc + 1)
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (e, c))
        .collect()
}

#[inline]
fn axpy(acc: &mut BigInt, x: &BigInt, f: &Factor) {
    if x.is_zero() {
        return;
    }
    match f {
        Factor::One => *acc += x,
        Factor::MinusOne => *acc -= x,
        Factor::Small(s) => *acc += x * *s,
        Factor::Big(b) => *acc += x * b,
    }
}

pub(super) fn mul_exact(terms: &[(usize, Factor)], dense: &[BigInt], trunc: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); trunc + 1];
    par::for_each_chunk_mut(&mut out, MIN_CHUNK / 8, |lo, chunk| {
        let hi = lo + chunk.len();
        for (e, f) in terms {
            if *e >= hi {
                break;
            }
            for n in lo.max(*e)..hi {
                axpy(&mut chunk[n - lo], &dense[n - e], f);
            }
        }
    });
    out
}

pub(super) fn mul_mod(terms: &[(usize, u64)], dense: &[u64], m: u64, trunc: usize) -> Vec<u64> {
    let mut out = vec![0u64; trunc + 1];
    if m.is_power_of_two() {
        // Wrapping arithmetic is exact modulo 2^64, hence modulo m.
        let mask = m - 1;
        par::for_each_chunk_mut(&mut out, MIN_CHUNK, |lo, chunk| {
            let hi = lo + chunk.len();
            for &(e, t) in terms {
                if e >= hi {
                    break;
                }
                let start = lo.max(e);
                let src = &dense[start - e..hi - e];
                for (o, &d) in chunk[start - lo..].iter_mut().zip(src) {
                    *o = o.wrapping_add(t.wrapping_mul(d));
                }
            }
            for o in chunk.iter_mut() {
                *o &= mask;
            }
        });
    } else {
        par::for_each_chunk_mut(&mut out, MIN_CHUNK, |lo, chunk| {
            let hi = lo + chunk.len();
            let mut acc = vec![0u128; chunk.len()];
            for &(e, t) in terms {
                if e >= hi {
                    break;
                }
                let start = lo.max(e);
                let src = &dense[start - e..hi - e];
                for (a, &d) in acc[start - lo..].iter_mut().zip(src) {
                    *a += (t * d) as u128;
                }
            }
            for (o, a) in chunk.iter_mut().zip(acc) {
                *o = (a % m as u128) as u64;
            }
        });
    }
    out
}

/// `num / den` where `den` has constant term `unit = ±1`.
pub(super) fn div_exact(num: &[BigInt], den: &[(usize, Factor)], unit: i64, trunc: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(trunc + 1);
    for n in 0..=trunc {
        let mut acc = num[n].clone();
        for (e, f) in den.iter().skip_while(|(e, _)| *e == 0) {
            if *e > n {
                break;
            }
            let neg = match f {
                Factor::One => Factor::MinusOne,
                Factor::MinusOne => Factor::One,
                Factor::Small(s) => Factor::Small(-s),
                Factor::Big(b) => Factor::Big(-b),
            };
            axpy(&mut acc, &out[n - e], &neg);
        }
        if unit == -1 {
            acc = -acc;
        }
        out.push(acc);
    }
    out
}

/// `num / den` modulo `m`; `inv0` is the inverse of the constant term of `den`.
pub(super) fn div_mod(num: &[u64], den: &[(usize, u64)], inv0: u64, m: u64, trunc: usize) -> Vec<u64> {
    let tail: Vec<(usize, u64)> = den.iter().copied().filter(|&(e, _)| e > 0).collect();
    let mut out: Vec<u64> = Vec::with_capacity(trunc + 1);
    if m.is_power_of_two() {
        let mask = m - 1;
        for n in 0..=trunc {
            let mut acc = num[n];
            for &(e, t) in &tail {
                if e > n {
                    break;
                }
                acc = acc.wrapping_sub(t.wrapping_mul(out[n - e]));
            }
            out.push(acc.wrapping_mul(inv0) & mask);
        }
    } else {
        let m128 = m as u128;
        for n in 0..=trunc {
            let mut sub = 0u128;
            for &(e, t) in &tail {
                if e > n {
                    break;
                }
                sub += (t * out[n - e]) as u128;
            }
            let sub = (sub % m128) as u64;
            let acc = (num[n] + m - sub) % m;
            out.push(((acc as u128 * inv0 as u128) % m128) as u64);
        }
    }
    out
}
