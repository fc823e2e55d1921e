//! Exact roots of unity and the cyclotomic number ring Q(zeta_L).
//!
//! [`Phase`] is a single root of unity e^(2 pi i k/L) stored as a reduced
//! fraction mod 1. [`CycQ`] is a finite rational combination of roots of
//! unity; equality and inversion go through the canonical representation
//! modulo the L-th cyclotomic polynomial, so zero-testing is exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::arith::{euler_phi, gcd, lcm};
use crate::error::{Error, Result};
use crate::series::Coeff;

/// e^(2 pi i num/den), reduced, den > 0, 0 <= num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Phase {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = gcd(num, den).max(1);
        Phase { num: num / g, den: den / g }
    }

    pub fn one() -> Self {
        Phase { num: 0, den: 1 }
    }

    pub fn minus_one() -> Self {
        Phase::new(1, 2)
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// Multiplicative order.
    pub fn order(&self) -> i64 {
        self.den
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn mul(&self, other: &Phase) -> Phase {
        let den = lcm(self.den, other.den);
        Phase::new(self.num * (den / self.den) + other.num * (den / other.den), den)
    }

    pub fn inv(&self) -> Phase {
        Phase::new(-self.num, self.den)
    }

    pub fn pow(&self, e: i64) -> Phase {
        Phase::new(self.num.wrapping_mul(e.rem_euclid(self.den)), self.den)
    }

    pub fn to_complex(&self) -> num::complex::Complex64 {
        let theta = 2.0 * std::f64::consts::PI * (self.num as f64) / (self.den as f64);
        num::complex::Complex64::new(theta.cos(), theta.sin())
    }

    pub fn as_rational_exponent(&self) -> (i64, i64) {
        (self.num, self.den)
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e(2pi i {}/{})", self.num, self.den)
    }
}

struct CycContext {
    level: i64,
    degree: usize,
    /// x^k reduced modulo the cyclotomic polynomial, for 0 <= k < level.
    power_table: Vec<Vec<BigRational>>,
    /// Monic cyclotomic polynomial coefficients (low to high) over Q.
    phi: Vec<BigRational>,
}

fn contexts() -> &'static Mutex<HashMap<i64, Arc<CycContext>>> {
    static CTX: OnceLock<Mutex<HashMap<i64, Arc<CycContext>>>> = OnceLock::new();
    CTX.get_or_init(|| Mutex::new(HashMap::new()))
}

fn context(level: i64) -> Arc<CycContext> {
    let mut map = contexts().lock().unwrap();
    if let Some(ctx) = map.get(&level) {
        return ctx.clone();
    }
    let phi_int = cyclotomic_polynomial(level);
    let phi: Vec<BigRational> = phi_int.iter().map(|c| BigRational::from(c.clone())).collect();
    let degree = phi.len() - 1;
    // Power table by repeated multiplication by x with reduction.
    let mut power_table: Vec<Vec<BigRational>> = Vec::with_capacity(level as usize);
    let mut current = vec![BigRational::zero(); degree];
    if degree > 0 {
        current[0] = BigRational::one();
    }
    for _ in 0..level {
        power_table.push(current.clone());
        // multiply by x
        let top = current[degree - 1].clone();
        for i in (1..degree).rev() {
            current[i] = current[i - 1].clone();
        }
        current[0] = BigRational::zero();
        if !top.is_zero() {
            // x^degree = -(phi[0] + phi[1] x + ... + phi[degree-1] x^(degree-1))
            for i in 0..degree {
                current[i] = &current[i] - &top * &phi[i];
            }
        }
    }
    let ctx = Arc::new(CycContext { level, degree, power_table, phi });
    map.insert(level, ctx.clone());
    ctx
}

/// Cyclotomic polynomial Phi_n as integer coefficients (low to high), computed
/// by exact division of x^n - 1 by the Phi_d for proper divisors d.
fn cyclotomic_polynomial(n: i64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut poly: Vec<BigInt> = vec![BigInt::from(-1)];
    poly.extend(std::iter::repeat(BigInt::zero()).take((n - 1) as usize));
    poly.push(BigInt::one()); // x^n - 1
    for d in crate::arith::divisors(n) {
        if d < n {
            let phi_d = cyclotomic_polynomial(d);
            poly = poly_div_exact_int(&poly, &phi_d);
        }
    }
    poly
}

fn poly_div_exact_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    let da = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for i in (0..=(da - db)).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for j in 0..=db {
            rem[i + j] = &rem[i + j] - &c * &b[j];
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division must be exact");
    while quot.len() > 1 && quot.last().unwrap().is_zero() {
        quot.pop();
    }
    quot
}

/// Element of Q(zeta_L): sparse rational combination of zeta_L^k.
#[derive(Debug, Clone)]
pub struct CycQ {
    level: i64,
    terms: BTreeMap<i64, BigRational>,
}

impl CycQ {
    pub fn rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        CycQ { level: 1, terms }
    }

    pub fn from_i64(n: i64) -> Self {
        CycQ::rational(BigRational::from(BigInt::from(n)))
    }

    pub fn root_of_unity(phase: Phase) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(phase.num, BigRational::one());
        CycQ { level: phase.den, terms }
    }

    pub fn from_phase_scaled(phase: Phase, r: BigRational) -> Self {
        if r.is_zero() {
            return CycQ::rational(BigRational::zero());
        }
        let mut terms = BTreeMap::new();
        terms.insert(phase.num, r);
        CycQ { level: phase.den, terms }
    }

    fn lift_to(&self, level: i64) -> CycQ {
        assert!(level % self.level == 0);
        let f = level / self.level;
        let terms = self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect();
        CycQ { level, terms }
    }

    /// Reduces the level when every exponent shares a factor with it.
    fn compress(mut self) -> CycQ {
        if self.terms.is_empty() {
            self.level = 1;
            return self;
        }
        let mut g = self.level;
        for k in self.terms.keys() {
            g = gcd(g, *k);
        }
        if g > 1 {
            self.terms = self.terms.into_iter().map(|(k, c)| (k / g, c)).collect();
            self.level /= g;
        }
        self
    }

    fn unify(&self, other: &Self) -> (CycQ, CycQ) {
        let level = lcm(self.level, other.level);
        (self.lift_to(level), other.lift_to(level))
    }

    /// Canonical coordinates in the power basis modulo the cyclotomic polynomial.
    fn canonical(&self) -> Vec<BigRational> {
        let ctx = context(self.level);
        let mut out = vec![BigRational::zero(); ctx.degree.max(1)];
        if ctx.degree == 0 {
            return out;
        }
        for (k, c) in &self.terms {
            let row = &ctx.power_table[(*k).rem_euclid(ctx.level) as usize];
            for (i, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out[i] = &out[i] + c * v;
                }
            }
        }
        out
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return Some(c.clone());
            }
        }
        let canon = self.canonical();
        if canon.iter().skip(1).all(|c| c.is_zero()) {
            Some(canon[0].clone())
        } else {
            None
        }
    }

    pub fn conj(&self) -> CycQ {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| ((-k).rem_euclid(self.level), c.clone()))
            .collect();
        CycQ { level: self.level, terms }
    }

    pub fn to_complex(&self) -> num::complex::Complex64 {
        let mut z = num::complex::Complex64::new(0.0, 0.0);
        for (k, c) in &self.terms {
            let p = Phase::new(*k, self.level);
            let cf = rational_to_f64(c);
            z += p.to_complex() * cf;
        }
        z
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let n = bigint_to_f64(r.numer());
    let d = bigint_to_f64(r.denom());
    n / d
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl PartialEq for CycQ {
    fn eq(&self, other: &Self) -> bool {
        let diff = self.add_ref(&other.neg_ref());
        diff.c_is_zero()
    }
}

impl Coeff for CycQ {
    fn c_zero() -> Self {
        CycQ::rational(BigRational::zero())
    }

    fn c_one() -> Self {
        CycQ::rational(BigRational::one())
    }

    fn c_is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.terms.len() == 1 {
            return false; // a single root of unity scaled by a nonzero rational
        }
        self.canonical().iter().all(|c| c.is_zero())
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (mut a, b) = self.unify(other);
        for (k, c) in b.terms {
            let entry = a.terms.remove(&k);
            let sum = match entry {
                None => c,
                Some(prev) => prev + c,
            };
            if !sum.is_zero() {
                a.terms.insert(k, sum);
            }
        }
        a.compress()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let mut terms: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k = (ka + kb).rem_euclid(a.level);
                let add = ca * cb;
                let entry = terms.remove(&k);
                let sum = match entry {
                    None => add,
                    Some(prev) => prev + add,
                };
                if !sum.is_zero() {
                    terms.insert(k, sum);
                }
            }
        }
        (CycQ { level: a.level, terms }).compress()
    }

    fn neg_ref(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect();
        CycQ { level: self.level, terms }
    }

    fn inv_ref(&self) -> Result<Self> {
        if self.terms.is_empty() {
            return Err(Error::ZeroDivisor);
        }
        // Fast path: a single scaled root of unity.
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            terms.insert((-k).rem_euclid(self.level), BigRational::one() / c.clone());
            return Ok((CycQ { level: self.level, terms }).compress());
        }
        let ctx = context(self.level);
        let a = self.canonical();
        if a.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroDivisor);
        }
        let inv = poly_mod_inverse(&a, &ctx.phi).ok_or(Error::ZeroDivisor)?;
        let mut terms = BTreeMap::new();
        for (i, c) in inv.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(i as i64, c);
            }
        }
        Ok((CycQ { level: ctx.level, terms }).compress())
    }

    fn from_rational(r: &BigRational) -> Self {
        CycQ::rational(r.clone())
    }
}

/// Inverse of `a` modulo the monic irreducible polynomial `m` over Q.
fn poly_mod_inverse(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    // Extended Euclid: maintain r0 = m, r1 = a, with coefficients of a.
    let trim = |mut p: Vec<BigRational>| -> Vec<BigRational> {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        p
    };
    let is_zero_poly = |p: &[BigRational]| p.iter().all(|c| c.is_zero());
    let mut r0 = trim(m.to_vec());
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<BigRational> = vec![BigRational::zero()];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = trim(r);
        s0 = s1;
        s1 = trim(s);
    }
    // r0 = gcd; must be a nonzero constant.
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let g = r0[0].clone();
    let mut inv: Vec<BigRational> = s0.into_iter().map(|c| c / g.clone()).collect();
    // Reduce once more mod m for safety.
    if inv.len() >= m.len() {
        let (_, r) = poly_divmod(&inv, &m.to_vec());
        inv = r;
    }
    inv.resize(m.len() - 1, BigRational::zero());
    Some(inv)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone() / lead.clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for j in 0..=db {
            rem[i + j] = &rem[i + j] - &c * &b[j];
        }
    }
    rem.truncate(db.max(1));
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] = &out[i + j] + ca * cb;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = &out[i] - c;
    }
    out
}

/// Degree of the cyclotomic field of order n.
pub fn cyclotomic_degree(n: i64) -> usize {
    euler_phi(n) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{big_rat, big_rat_frac};

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_polynomial(1), vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(cyclotomic_polynomial(2), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(
            cyclotomic_polynomial(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        // Phi_12 = x^4 - x^2 + 1
        assert_eq!(
            cyclotomic_polynomial(12),
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn sum_of_primitive_roots_vanishes() {
        // 1 + zeta_3 + zeta_3^2 = 0
        let z = CycQ::root_of_unity(Phase::new(1, 3));
        let z2 = CycQ::root_of_unity(Phase::new(2, 3));
        let sum = CycQ::c_one().add_ref(&z).add_ref(&z2);
        assert!(sum.c_is_zero());
    }

    #[test]
    fn sqrt3_arithmetic() {
        // (zeta_12 + zeta_12^-1)^2 = 3
        let s = CycQ::root_of_unity(Phase::new(1, 12)).add_ref(&CycQ::root_of_unity(Phase::new(11, 12)));
        let sq = s.mul_ref(&s);
        assert_eq!(sq.as_rational(), Some(big_rat(3)));
        // and the inverse of sqrt(3) squares to 1/3
        let inv = s.inv_ref().unwrap();
        let inv_sq = inv.mul_ref(&inv);
        assert_eq!(inv_sq.as_rational(), Some(big_rat_frac(1, 3)));
        assert!(s.mul_ref(&inv).eq(&CycQ::c_one()));
    }

    #[test]
    fn phase_group() {
        let i = Phase::new(1, 4);
        assert_eq!(i.mul(&i), Phase::minus_one());
        assert_eq!(i.pow(4), Phase::one());
        assert_eq!(i.inv(), Phase::new(3, 4));
        assert_eq!(Phase::new(5, 10), Phase::new(1, 2));
    }

    #[test]
    fn complex_agreement() {
        let z = CycQ::root_of_unity(Phase::new(1, 8)).add_ref(&CycQ::from_i64(2));
        let c = z.to_complex();
        let expected = num::complex::Complex64::new(2.0 + (std::f64::consts::FRAC_PI_4).cos(), (std::f64::consts::FRAC_PI_4).sin());
        assert!((c - expected).norm() < 1e-12);
    }
}
