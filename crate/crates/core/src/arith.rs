//! Small integer helpers shared by the series engine, the modular-forms
//! module and the congruence generators.

/// Deterministic primality test by trial division. Inputs in this crate are
/// at most a few million, so nothing cleverer is needed.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// `base^exp mod m` for `m < 2^32`.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Extended Euclid: returns `(g, x)` with `a*x ≡ g (mod m)`.
pub fn ext_gcd(a: i128, m: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r < 0 {
        (-old_r, -old_s)
    } else {
        (old_r, old_s)
    }
}

/// Inverse of `a` modulo `m`, if it exists, as a value in `[0, m)`.
pub fn inverse_mod(a: i128, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m = m as i128;
    let (g, x) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m) as u64)
}

/// Divisor sums `sigma(n)` for `n = 0..=n_max` (with `sigma(0) = 0`).
pub fn sigma_table(n_max: usize) -> Vec<i64> {
    let mut sigma = vec![0i64; n_max + 1];
    for d in 1..=n_max {
        let mut k = d;
        while k <= n_max {
            sigma[k] += d as i64;
            k += d;
        }
    }
    sigma
}

/// Kronecker symbol `(a/n)`, the multiplicative extension of the Legendre
/// symbol to all integers `n` (with the usual conventions at 2 and -1).
pub fn kronecker(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k: i8 = 1;
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        // (a/2) = (-1)^((a^2-1)/8) for odd a
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            k = -k;
        }
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n is now odd and positive: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        a %= n;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_below_fifty() {
        let got: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(got, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
    }

    #[test]
    fn sigma_small() {
        assert_eq!(sigma_table(12)[1..], [1, 3, 4, 7, 6, 12, 8, 15, 13, 18, 12, 28]);
    }

    #[test]
    fn kronecker_matches_euler_criterion_on_odd_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for a in -40i64..40 {
                let r = a.rem_euclid(p as i64) as u64;
                let euler = if r == 0 {
                    0
                } else if mod_pow(r, (p - 1) / 2, p) == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p as i64), euler, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(1, 2), 1);
        assert_eq!(kronecker(3, 2), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(4, 2), 0);
    }

    #[test]
    fn inverse_mod_basic() {
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(-1, 8), Some(7));
        assert_eq!(inverse_mod(2, 8), None);
    }
}
