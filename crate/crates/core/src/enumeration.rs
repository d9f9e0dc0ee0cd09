//! Combinatorial counting oracles, independent of the series engine.
//!
//! `R*_l(n)` counts overpartitions of `n` whose non-overlined parts are not
//! divisible by `l`. For `l = 1` every positive integer is divisible by `l`,
//! so only overlined parts remain (partitions into distinct parts).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest weight accepted by the brute-force enumerator.
pub const ENUMERATION_BOUND: u64 = 30;
/// Largest table length accepted by the dynamic-programming counter.
pub const DP_BOUND: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    AboveBound { n: u64, bound: u64 },
    #[error("regularity parameter must be at least 1")]
    ZeroEll,
}

/// Regularity parameter and weight for one count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OverpartitionSpec {
    pub ell: u64,
    pub n: u64,
}

impl OverpartitionSpec {
    pub fn new(ell: u64, n: u64) -> Result<Self, EnumerationError> {
        if ell == 0 {
            return Err(EnumerationError::ZeroEll);
        }
        Ok(OverpartitionSpec { ell, n })
    }
}

/// Count by explicit recursive generation. Part sizes are visited from
/// `n` down to 1; each size is used overlined at most once and, when not
/// divisible by `ell`, non-overlined any number of times. Every leaf of the
/// recursion that reaches weight zero is one overpartition.
pub fn count_rbar_enum(ell: u64, n: u64) -> Result<u64, EnumerationError> {
    let spec = OverpartitionSpec::new(ell, n)?;
    if spec.n > ENUMERATION_BOUND {
        return Err(EnumerationError::AboveBound { n, bound: ENUMERATION_BOUND });
    }
    fn visit(remaining: u64, size: u64, ell: u64) -> u64 {
        if remaining == 0 {
            return 1;
        }
        if size == 0 {
            return 0;
        }
        let mut count = 0;
        for overlined in [0, size] {
            if overlined > remaining {
                continue;
            }
            let rest = remaining - overlined;
            let max_plain = if size.is_multiple_of(ell) { 0 } else { rest / size };
            for plain in 0..=max_plain {
                count += visit(rest - plain * size, size - 1, ell);
            }
        }
        count
    }
    Ok(visit(n, n, ell))
}

/// Counts `R*_l(0..=n_max)` by a knapsack over part sizes: a 0/1 pass for
/// the overlined copy of each size and an unbounded pass for the plain copy.
pub fn count_rbar_dp(ell: u64, n_max: usize) -> Result<Vec<BigUint>, EnumerationError> {
    if ell == 0 {
        return Err(EnumerationError::ZeroEll);
    }
    if n_max > DP_BOUND {
        return Err(EnumerationError::AboveBound { n: n_max as u64, bound: DP_BOUND as u64 });
    }
    let mut table = vec![BigUint::zero(); n_max + 1];
    table[0] = BigUint::one();
    for size in 1..=n_max {
        for w in (size..=n_max).rev() {
            let (lo, hi) = table.split_at_mut(w);
            hi[0] += &lo[w - size];
        }
        if !(size as u64).is_multiple_of(ell) {
            for w in size..=n_max {
                let (lo, hi) = table.split_at_mut(w);
                hi[0] += &lo[w - size];
            }
        }
    }
    Ok(table)
}

/// Same table reduced modulo 2, for long parity sweeps.
pub fn count_rbar_dp_parity(ell: u64, n_max: usize) -> Vec<u8> {
    assert!(ell >= 1);
    let mut table = vec![0u8; n_max + 1];
    table[0] = 1;
    for size in 1..=n_max {
        for w in (size..=n_max).rev() {
            table[w] ^= table[w - size];
        }
        if !(size as u64).is_multiple_of(ell) {
            for w in size..=n_max {
                table[w] ^= table[w - size];
            }
        }
    }
    table
}

/// `p(0..=n_max)` by the unbounded knapsack.
pub fn partition_table(n_max: usize) -> Vec<BigUint> {
    let mut table = vec![BigUint::zero(); n_max + 1];
    table[0] = BigUint::one();
    for size in 1..=n_max {
        for w in size..=n_max {
            let (lo, hi) = table.split_at_mut(w);
            hi[0] += &lo[w - size];
        }
    }
    table
}

pub fn count_partitions(n: usize) -> BigUint {
    partition_table(n).swap_remove(n)
}

pub fn count_overpartitions(n: usize) -> BigUint {
    // Overpartitions are the l-regular case with no restriction on plain
    // parts, i.e. l larger than n.
    count_rbar_dp(n as u64 + 1, n)
        .expect("within bound")
        .swap_remove(n)
}

/// True iff `n = ell * k(3k-1)/2` for some integer `k`, i.e. `ell | n` and
/// `24 n / ell + 1` is a perfect square. This is the parity criterion:
/// `R*_l(n)` is odd exactly when it holds.
pub fn parity_predicate(ell: u64, n: u64) -> bool {
    assert!(ell >= 1);
    if !n.is_multiple_of(ell) {
        return false;
    }
    crate::arith::is_square(24 * (n / ell) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l3_weight3_excludes_plain_three() {
        // 8 overpartitions of 3 minus the non-overlined (3)
        assert_eq!(count_rbar_enum(3, 3).unwrap(), 7);
        assert_eq!(count_rbar_enum(3, 4).unwrap(), 12);
    }

    #[test]
    fn empty_partition() {
        for ell in 1..6 {
            assert_eq!(count_rbar_enum(ell, 0).unwrap(), 1);
        }
        assert_eq!(count_rbar_dp(8, 0).unwrap(), vec![BigUint::one()]);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        assert_eq!(
            count_rbar_enum(3, 31),
            Err(EnumerationError::AboveBound { n: 31, bound: 30 })
        );
        assert!(count_rbar_dp(3, DP_BOUND + 1).is_err());
        assert_eq!(count_rbar_enum(0, 3), Err(EnumerationError::ZeroEll));
    }

    #[test]
    fn dp_small_table() {
        let t: Vec<u64> = count_rbar_dp(3, 4).unwrap().iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(t, vec![1, 2, 4, 7, 12]);
        assert_eq!(count_rbar_dp(6, 2).unwrap()[2], BigUint::from(4u32));
    }

    #[test]
    fn classical_counts() {
        assert_eq!(count_partitions(3), BigUint::from(3u32));
        assert_eq!(count_overpartitions(3), BigUint::from(8u32));
        assert_eq!(count_overpartitions(0), BigUint::one());
        assert_eq!(count_partitions(100), "190569292".parse().unwrap());
    }

    #[test]
    fn ell_one_counts_distinct_parts() {
        // partitions of 6 into distinct parts: 6, 51, 42, 321
        assert_eq!(count_rbar_enum(1, 6).unwrap(), 4);
        assert_eq!(count_rbar_dp(1, 6).unwrap()[6], BigUint::from(4u32));
    }

    #[test]
    fn parity_examples() {
        assert!(parity_predicate(2, 0));
        assert!(parity_predicate(2, 2));
        assert_eq!(count_rbar_enum(2, 2).unwrap(), 3);
        assert!(!parity_predicate(3, 4));
        assert_eq!(count_rbar_enum(3, 4).unwrap() % 2, 0);
    }

    #[test]
    fn parity_table_matches_exact_table() {
        for ell in [2, 5, 9] {
            let exact = count_rbar_dp(ell, 300).unwrap();
            let parity = count_rbar_dp_parity(ell, 300);
            for n in 0..=300 {
                assert_eq!((&exact[n] % 2u32) == BigUint::one(), parity[n] == 1);
            }
        }
    }
}
