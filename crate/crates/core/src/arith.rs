//! Small integer-arithmetic helpers: gcds, multiplicative functions,
//! Kronecker/Legendre symbols and rational binomial coefficients.

use num::bigint::BigInt;
use num::rational::{BigRational, Ratio};
use num::{One, Signed, Zero};

pub type Rat64 = Ratio<i64>;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b)).abs() * b.abs()
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g, g >= 0.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Inverse of a modulo m (m > 0, gcd(a, m) = 1).
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (g, x, _) = egcd(a.rem_euclid(m), m);
    if g == 1 {
        Some(x.rem_euclid(m))
    } else {
        None
    }
}

/// Kronecker symbol (-4 | m): 0 for even m, +1 for m = 1 mod 4, -1 for m = 3 mod 4.
/// Valid for negative m as well.
pub fn kronecker_minus4(m: i64) -> i64 {
    match m.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// Legendre symbol (a | 3) extended by zero.
pub fn legendre3(a: i64) -> i64 {
    match a.rem_euclid(3) {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Prime factorization by trial division; inputs here are tiny.
pub fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: i64) -> Vec<i64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: i64) -> Vec<i64> {
    assert!(n >= 1);
    let mut out = vec![1];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: i64) -> i64 {
    let mut out = n;
    for p in prime_divisors(n) {
        out = out / p * (p - 1);
    }
    out
}

pub fn moebius(n: i64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// sigma_j(n) = sum of j-th powers of the divisors of n.
pub fn sigma(j: u32, n: i64) -> i64 {
    divisors(n).into_iter().map(|d| d.pow(j)).sum()
}

/// Binomial coefficient C(alpha, k) for rational alpha.
pub fn binomial_rational(alpha: &BigRational, k: u64) -> BigRational {
    let mut num = BigRational::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= alpha - BigRational::from(BigInt::from(i));
        den *= BigInt::from(i + 1);
    }
    num / BigRational::from(den)
}

pub fn big_rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn big_rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat64_to_big(r: Rat64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Exact i64 extraction from a BigRational that must be an integer.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.denom().is_one() {
        let n = r.numer();
        if n.abs() <= BigInt::from(i64::MAX) {
            return Some(i64::try_from(n.clone()).ok()?);
        }
    }
    None
}

pub fn is_zero_rational(r: &BigRational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker_minus4(1), 1);
        assert_eq!(kronecker_minus4(3), -1);
        assert_eq!(kronecker_minus4(-1), -1);
        assert_eq!(kronecker_minus4(2), 0);
        assert_eq!(kronecker_minus4(5), 1);
        assert_eq!(kronecker_minus4(-3), 1);
    }

    #[test]
    fn divisor_functions() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma(0, 12), 6);
        assert_eq!(sigma(1, 6), 12);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(2), -1);
        assert_eq!(moebius(4), 0);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn egcd_inverse() {
        let (g, x, y) = egcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }

    #[test]
    fn binomial_half() {
        let half = big_rat_frac(1, 2);
        assert_eq!(binomial_rational(&half, 0), big_rat(1));
        assert_eq!(binomial_rational(&half, 1), big_rat_frac(1, 2));
        assert_eq!(binomial_rational(&half, 2), big_rat_frac(-1, 8));
        assert_eq!(binomial_rational(&half, 3), big_rat_frac(1, 16));
    }
}
