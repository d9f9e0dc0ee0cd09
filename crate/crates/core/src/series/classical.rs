//! Sparse constructors for the classical products and theta series, and
//! expansion of eta products `prod f_d^{r_d}`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Ring, Series, SeriesError};
use crate::arith::sigma_table;

fn sparse(terms: impl IntoIterator<Item = (usize, i64)>, trunc: usize, ring: Ring) -> Series {
    let mut v = vec![0i64; trunc + 1];
    for (e, c) in terms {
        if e <= trunc {
            v[e] += c;
        }
    }
    Series::from_ints(&v, ring)
}

/// Nonzero terms of `f_k = prod_{i>=1} (1 - q^{ki})` up to `trunc`, in
/// increasing exponent order: `(-1)^n q^{k n(3n-1)/2}` over all integers `n`.
pub fn pentagonal_terms(k: usize, trunc: usize) -> Vec<(usize, i64)> {
    assert!(k >= 1, "generator index must be positive");
    let mut out = vec![(0usize, 1i64)];
    for j in 1usize.. {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let lo = k * j * (3 * j - 1) / 2;
        if lo > trunc {
            break;
        }
        out.push((lo, sign));
        let hi = k * j * (3 * j + 1) / 2;
        if hi <= trunc {
            out.push((hi, sign));
        }
    }
    out
}

/// `f_k` truncated at `trunc`, built from the pentagonal number theorem.
pub fn series_f(k: usize, trunc: usize, ring: Ring) -> Series {
    sparse(pentagonal_terms(k, trunc), trunc, ring)
}

/// `f_k^3 = sum_{n>=0} (-1)^n (2n+1) q^{k n(n+1)/2}` (Jacobi).
pub fn f_cubed(k: usize, trunc: usize, ring: Ring) -> Series {
    assert!(k >= 1, "generator index must be positive");
    let terms = (0usize..)
        .map(|n| (k * n * (n + 1) / 2, n))
        .take_while(|&(e, _)| e <= trunc)
        .map(|(e, n)| (e, if n % 2 == 0 { 1 } else { -1 } * (2 * n as i64 + 1)));
    sparse(terms, trunc, ring)
}

/// `phi(q^k) = 1 + 2 sum_{n>=1} q^{k n^2}`.
pub fn theta_phi(k: usize, trunc: usize, ring: Ring) -> Series {
    assert!(k >= 1, "theta index must be positive");
    let terms = std::iter::once((0, 1)).chain(
        (1usize..)
            .map(|n| k * n * n)
            .take_while(|&e| e <= trunc)
            .map(|e| (e, 2)),
    );
    sparse(terms, trunc, ring)
}

/// `psi(q^k) = sum_{n>=0} q^{k n(n+1)/2}`.
pub fn theta_psi(k: usize, trunc: usize, ring: Ring) -> Series {
    assert!(k >= 1, "theta index must be positive");
    let terms = (0usize..)
        .map(|n| k * n * (n + 1) / 2)
        .take_while(|&e| e <= trunc)
        .map(|e| (e, 1));
    sparse(terms, trunc, ring)
}

/// Number of nonzero terms in the pentagonal expansion of `f_k` to `trunc`.
fn pentagonal_len(k: usize, trunc: usize) -> u64 {
    2 * ((2.0 * trunc as f64 / (3.0 * k as f64)).sqrt() as u64 + 1)
}

fn triangular_len(k: usize, trunc: usize) -> u64 {
    (2.0 * trunc as f64 / k as f64).sqrt() as u64 + 1
}

/// `prod f_d^{r_d}` truncated at `trunc`, without any `q`-offset.
///
/// Over the integers two routes are available and the cheaper one is taken:
/// repeated multiplication/division by the sparse series `f_d^3` and `f_d`,
/// or the logarithmic-derivative recurrence
/// `n F(n) = sum_{k=1}^{n} D(k) F(n-k)` with `D(k) = -sum_{d|k} r_d d sigma(k/d)`.
/// Residue rings always use the sparse route (the recurrence divides by `n`).
pub fn eta_product(exponents: &[(usize, i64)], trunc: usize, ring: Ring) -> Series {
    let exps: Vec<(usize, i64)> = exponents.iter().copied().filter(|&(_, r)| r != 0).collect();
    let sparse_cost: u64 = exps
        .iter()
        .map(|&(d, r)| {
            let r = r.unsigned_abs();
            (r / 3) * triangular_len(d, trunc) + (r % 3) * pentagonal_len(d, trunc)
        })
        .sum::<u64>()
        * (trunc as u64 + 1);
    let recurrence_cost = (trunc as u64 + 1) * (trunc as u64 + 1) / 2;
    if ring.is_exact() && recurrence_cost < sparse_cost {
        eta_product_recurrence(&exps, trunc)
    } else {
        eta_product_sparse(&exps, trunc, ring).expect("eta products have unit constant term")
    }
}

pub(crate) fn eta_product_sparse(
    exps: &[(usize, i64)],
    trunc: usize,
    ring: Ring,
) -> Result<Series, SeriesError> {
    let mut acc = Series::one(trunc, ring);
    // Multiply first so that divisions act on an already-dense series.
    let mut ordered = exps.to_vec();
    ordered.sort_by_key(|&(_, r)| std::cmp::Reverse(r.signum()));
    for (d, r) in ordered {
        let cube = f_cubed(d, trunc, ring);
        let single = series_f(d, trunc, ring);
        let a = r.unsigned_abs();
        for _ in 0..a / 3 {
            acc = if r > 0 { acc.mul(&cube)? } else { acc.div(&cube)? };
        }
        for _ in 0..a % 3 {
            acc = if r > 0 { acc.mul(&single)? } else { acc.div(&single)? };
        }
    }
    Ok(acc)
}

pub(crate) fn eta_product_recurrence(exps: &[(usize, i64)], trunc: usize) -> Series {
    let sigma = sigma_table(trunc);
    let mut d = vec![0i64; trunc + 1];
    for &(delta, r) in exps {
        let mut m = 1;
        while delta * m <= trunc {
            d[delta * m] -= r * delta as i64 * sigma[m];
            m += 1;
        }
    }
    let mut f: Vec<BigInt> = Vec::with_capacity(trunc + 1);
    f.push(BigInt::from(1));
    for n in 1..=trunc {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            if d[k] != 0 && !f[n - k].is_zero() {
                acc += &f[n - k] * d[k];
            }
        }
        f.push(acc / n as i64);
    }
    Series::exact(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_product(k: usize, trunc: usize) -> Series {
        let mut acc = Series::one(trunc, Ring::INTEGERS);
        let mut i = 1;
        while k * i <= trunc {
            acc = acc
                .mul(&Series::from_ints(
                    &{
                        let mut v = vec![0i64; trunc + 1];
                        v[0] = 1;
                        v[k * i] = -1;
                        v
                    },
                    Ring::INTEGERS,
                ))
                .unwrap();
            i += 1;
        }
        acc
    }

    #[test]
    fn euler_f1_small() {
        let f = series_f(1, 8, Ring::INTEGERS);
        assert_eq!(f, Series::from_ints(&[1, -1, -1, 0, 0, 1, 0, 1, 0], Ring::INTEGERS));
    }

    #[test]
    fn f3_below_its_first_exponent() {
        assert_eq!(series_f(3, 2, Ring::INTEGERS), Series::one(2, Ring::INTEGERS));
    }

    #[test]
    fn f1_coefficient_at_twelve() {
        // brute-force product over i <= 12; 12 is pentagonal with sign (-1)^3
        let naive = naive_product(1, 12);
        assert_eq!(naive.coeff(12).unwrap(), BigInt::from(-1));
        assert_eq!(series_f(1, 12, Ring::INTEGERS), naive);
    }

    #[test]
    fn pentagonal_matches_naive_product() {
        for k in 1..=6 {
            for trunc in [0, 1, 7, 40, 150] {
                assert_eq!(series_f(k, trunc, Ring::INTEGERS), naive_product(k, trunc), "k={k} N={trunc}");
            }
        }
    }

    #[test]
    fn theta_examples() {
        let z = Ring::INTEGERS;
        assert_eq!(theta_phi(1, 9, z), Series::from_ints(&[1, 2, 0, 0, 2, 0, 0, 0, 0, 2], z));
        assert_eq!(theta_psi(1, 6, z), Series::from_ints(&[1, 1, 0, 1, 0, 0, 1], z));
    }

    #[test]
    fn cube_matches_jacobi_example() {
        let z = Ring::INTEGERS;
        assert_eq!(f_cubed(1, 6, z), Series::from_ints(&[1, -3, 0, 5, 0, 0, -7], z));
        assert_eq!(series_f(1, 6, z).pow(3).unwrap(), f_cubed(1, 6, z));
    }

    #[test]
    fn both_eta_routes_agree() {
        let exps = [(1usize, -5i64), (2, 7), (4, -2), (3, 4)];
        let a = eta_product_recurrence(&exps, 300);
        let b = eta_product_sparse(&exps, 300, Ring::INTEGERS).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eta_product_modular_matches_reduced_exact() {
        let exps = [(1usize, -2i64), (2, 1), (6, 1)];
        let exact = eta_product(&exps, 500, Ring::INTEGERS);
        let m8 = Ring::modular(8).unwrap();
        assert_eq!(eta_product(&exps, 500, m8), exact.reduce_mod(8).unwrap());
        let m12 = Ring::modular(12).unwrap();
        assert_eq!(eta_product(&exps, 500, m12), exact.reduce_mod(12).unwrap());
    }
}
