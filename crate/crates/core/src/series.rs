//! Truncated Laurent/Puiseux series in three variables with exact coefficients.
//!
//! A [`TriSeries`] stores monomials `q^(n_hat/den_tau) r^(l_hat/den_z) s^(m_hat/den_omega)`
//! in a `BTreeMap` keyed by the scaled exponent triple, ordered lexicographically by
//! `(m_hat, n_hat, l_hat)`. Coefficients live in an exact ring implementing [`Coeff`];
//! the public instantiation uses `BigRational`.
//!
//! Truncation is a hard window: every stored key satisfies the policy, and a series is
//! complete within its window (all monomials of the represented function with exponents
//! inside the window are present). Binary operations derive the output window from the
//! operand windows and valuations so that completeness is preserved.

use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::{One, Zero};

use crate::arith::{binomial_rational, lcm, rat64_to_big, Rat64};
use crate::error::{Error, Result};

/// Exact coefficient ring. Implemented for `BigRational` and for the
/// cyclotomic numbers used internally by the theta machinery.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv_ref(&self) -> Result<Self>;
    fn from_rational(r: &BigRational) -> Self;
}

impl Coeff for BigRational {
    fn c_zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn c_one() -> Self {
        <BigRational as One>::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn inv_ref(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::ZeroDivisor)
        } else {
            Ok(<BigRational as One>::one() / self.clone())
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

/// Scaled exponent triple. True exponents are `n_hat/den_tau` etc. of the
/// owning series. Field order gives the lexicographic key order (m, n, l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentKey {
    pub m_hat: i64,
    pub n_hat: i64,
    pub l_hat: i64,
}

impl ExponentKey {
    pub fn new(n_hat: i64, l_hat: i64, m_hat: i64) -> Self {
        ExponentKey { m_hat, n_hat, l_hat }
    }
}

/// Hard truncation window expressed in true (unscaled) exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    /// Upper bound on the tau-exponent.
    pub max_tau: Rat64,
    /// Upper bound on the omega-exponent.
    pub max_omega: Rat64,
    /// Upper bound on the absolute z-exponent.
    pub max_abs_z: Rat64,
}

impl TruncationPolicy {
    pub fn new(max_tau: Rat64, max_omega: Rat64, max_abs_z: Rat64) -> Self {
        TruncationPolicy { max_tau, max_omega, max_abs_z }
    }

    /// Window for a q-series computation: omega bound zero, generous z bound.
    pub fn tau_only(max_tau: Rat64) -> Self {
        TruncationPolicy {
            max_tau,
            max_omega: Rat64::from_integer(0),
            max_abs_z: Rat64::from_integer(0),
        }
    }

    /// Symmetric window in tau/omega with a z bound.
    pub fn box_window(max_tau: Rat64, max_omega: Rat64, max_abs_z: Rat64) -> Self {
        TruncationPolicy { max_tau, max_omega, max_abs_z }
    }

    fn contains(&self, key: &ExponentKey, den_tau: i64, den_z: i64, den_omega: i64) -> bool {
        Rat64::new(key.n_hat, den_tau) <= self.max_tau
            && Rat64::new(key.m_hat, den_omega) <= self.max_omega
            && Rat64::new(key.l_hat.abs(), den_z) <= self.max_abs_z
    }

    /// Component-wise minimum of the tau/omega windows, sum of z bounds.
    fn meet_for_mul(&self, other: &Self, va: Vals, vb: Vals) -> Self {
        TruncationPolicy {
            max_tau: (self.max_tau + vb.tau).min(other.max_tau + va.tau),
            max_omega: (self.max_omega + vb.omega).min(other.max_omega + va.omega),
            max_abs_z: self.max_abs_z + other.max_abs_z,
        }
    }

    pub fn canonical_string(&self) -> String {
        format!(
            "tau={}/{};omega={}/{};z={}/{}",
            self.max_tau.numer(),
            self.max_tau.denom(),
            self.max_omega.numer(),
            self.max_omega.denom(),
            self.max_abs_z.numer(),
            self.max_abs_z.denom()
        )
    }
}

#[derive(Clone, Copy)]
struct Vals {
    tau: Rat64,
    omega: Rat64,
}

/// Truncated series with exact coefficients in `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriSeries<C: Coeff = BigRational> {
    pub den_tau: i64,
    pub den_z: i64,
    pub den_omega: i64,
    pub trunc: TruncationPolicy,
    coeffs: BTreeMap<ExponentKey, C>,
}

impl<C: Coeff> TriSeries<C> {
    pub fn zero(den_tau: i64, den_z: i64, den_omega: i64, trunc: TruncationPolicy) -> Self {
        assert!(den_tau > 0 && den_z > 0 && den_omega > 0);
        TriSeries { den_tau, den_z, den_omega, trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(trunc: TruncationPolicy) -> Self {
        let mut s = TriSeries::zero(1, 1, 1, trunc);
        s.insert(ExponentKey::new(0, 0, 0), C::c_one());
        s
    }

    /// Monomial c * q^(n_hat/den_tau) r^(l_hat/den_z) s^(m_hat/den_omega).
    pub fn monomial(
        c: C,
        n_hat: i64,
        l_hat: i64,
        m_hat: i64,
        den_tau: i64,
        den_z: i64,
        den_omega: i64,
        trunc: TruncationPolicy,
    ) -> Self {
        let mut s = TriSeries::zero(den_tau, den_z, den_omega, trunc);
        s.insert(ExponentKey::new(n_hat, l_hat, m_hat), c);
        s
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (ExponentKey, C)>,
        den_tau: i64,
        den_z: i64,
        den_omega: i64,
        trunc: TruncationPolicy,
    ) -> Self {
        let mut s = TriSeries::zero(den_tau, den_z, den_omega, trunc);
        for (k, c) in terms {
            s.add_to(k, c);
        }
        s
    }

    /// Inserts respecting the window and pruning zeros.
    fn insert(&mut self, key: ExponentKey, c: C) {
        if c.c_is_zero() {
            return;
        }
        if self.trunc.contains(&key, self.den_tau, self.den_z, self.den_omega) {
            self.coeffs.insert(key, c);
        }
    }

    fn add_to(&mut self, key: ExponentKey, c: C) {
        if c.c_is_zero() || !self.trunc.contains(&key, self.den_tau, self.den_z, self.den_omega) {
            return;
        }
        match self.coeffs.remove(&key) {
            None => {
                self.coeffs.insert(key, c);
            }
            Some(prev) => {
                let sum = prev.add_ref(&c);
                if !sum.c_is_zero() {
                    self.coeffs.insert(key, sum);
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentKey, &C)> {
        self.coeffs.iter()
    }

    /// Coefficient at a true exponent triple (zero when absent or off-grid).
    pub fn coeff_at(&self, tau: Rat64, z: Rat64, omega: Rat64) -> C {
        let scale = |r: Rat64, den: i64| -> Option<i64> {
            let v = r * Rat64::from_integer(den);
            if *v.denom() == 1 {
                Some(*v.numer())
            } else {
                None
            }
        };
        match (scale(tau, self.den_tau), scale(z, self.den_z), scale(omega, self.den_omega)) {
            (Some(n), Some(l), Some(m)) => self
                .coeffs
                .get(&ExponentKey::new(n, l, m))
                .cloned()
                .unwrap_or_else(C::c_zero),
            _ => C::c_zero(),
        }
    }

    pub fn true_exponents(&self, key: &ExponentKey) -> (Rat64, Rat64, Rat64) {
        (
            Rat64::new(key.n_hat, self.den_tau),
            Rat64::new(key.l_hat, self.den_z),
            Rat64::new(key.m_hat, self.den_omega),
        )
    }

    fn vals(&self) -> Vals {
        if self.coeffs.is_empty() {
            return Vals { tau: self.trunc.max_tau, omega: self.trunc.max_omega };
        }
        let mut tau = Rat64::new(i64::MAX / 2, 1);
        let mut omega = Rat64::new(i64::MAX / 2, 1);
        for k in self.coeffs.keys() {
            tau = tau.min(Rat64::new(k.n_hat, self.den_tau));
            omega = omega.min(Rat64::new(k.m_hat, self.den_omega));
        }
        Vals { tau: tau.min(self.trunc.max_tau), omega: omega.min(self.trunc.max_omega) }
    }

    pub fn min_tau_exponent(&self) -> Option<Rat64> {
        self.coeffs
            .keys()
            .map(|k| Rat64::new(k.n_hat, self.den_tau))
            .min()
    }

    /// Rescales internal denominators to the given common denominators.
    pub fn with_denominators(&self, den_tau: i64, den_z: i64, den_omega: i64) -> Self {
        assert!(den_tau % self.den_tau == 0 && den_z % self.den_z == 0 && den_omega % self.den_omega == 0);
        let (ft, fz, fm) = (den_tau / self.den_tau, den_z / self.den_z, den_omega / self.den_omega);
        let mut out = TriSeries::zero(den_tau, den_z, den_omega, self.trunc);
        for (k, c) in &self.coeffs {
            out.insert(ExponentKey::new(k.n_hat * ft, k.l_hat * fz, k.m_hat * fm), c.clone());
        }
        out
    }

    /// Reduces the denominators by the gcd of the stored exponents.
    pub fn normalize_denominators(&self) -> Self {
        let mut gt = self.den_tau;
        let mut gz = self.den_z;
        let mut gm = self.den_omega;
        for k in self.coeffs.keys() {
            gt = crate::arith::gcd(gt, k.n_hat);
            gz = crate::arith::gcd(gz, k.l_hat);
            gm = crate::arith::gcd(gm, k.m_hat);
        }
        let gt = gt.max(1);
        let gz = gz.max(1);
        let gm = gm.max(1);
        let mut out = TriSeries::zero(self.den_tau / gt, self.den_z / gz, self.den_omega / gm, self.trunc);
        for (k, c) in &self.coeffs {
            out.coeffs
                .insert(ExponentKey::new(k.n_hat / gt, k.l_hat / gz, k.m_hat / gm), c.clone());
        }
        out
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let dt = lcm(self.den_tau, other.den_tau);
        let dz = lcm(self.den_z, other.den_z);
        let dm = lcm(self.den_omega, other.den_omega);
        (self.with_denominators(dt, dz, dm), other.with_denominators(dt, dz, dm))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let trunc = TruncationPolicy {
            max_tau: a.trunc.max_tau.min(b.trunc.max_tau),
            max_omega: a.trunc.max_omega.min(b.trunc.max_omega),
            max_abs_z: a.trunc.max_abs_z.max(b.trunc.max_abs_z),
        };
        let mut out = TriSeries::zero(a.den_tau, a.den_z, a.den_omega, trunc);
        for (k, c) in a.coeffs.iter().chain(b.coeffs.iter()) {
            out.add_to(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg_ref();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = TriSeries::zero(self.den_tau, self.den_z, self.den_omega, self.trunc);
        if c.c_is_zero() {
            return out;
        }
        for (k, v) in &self.coeffs {
            out.insert(*k, v.mul_ref(c));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(&C::from_rational(r))
    }

    /// Exact convolution within the derived window.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify(other);
        let (va, vb) = (a.vals(), b.vals());
        let trunc = a.trunc.meet_for_mul(&b.trunc, va, vb);
        if !a.coeffs.is_empty() && !b.coeffs.is_empty() {
            // Window soundness: the product's own valuation must stay visible.
            if trunc.max_tau < va.tau + vb.tau || trunc.max_omega < va.omega + vb.omega {
                return Err(Error::IncompatiblePolicies(format!(
                    "product window {} excludes the product valuation",
                    trunc.canonical_string()
                )));
            }
        }
        let mut out = TriSeries::zero(a.den_tau, a.den_z, a.den_omega, trunc);
        let max_n = ratio_floor_scaled(trunc.max_tau, a.den_tau);
        let max_m = ratio_floor_scaled(trunc.max_omega, a.den_omega);
        for (ka, ca) in &a.coeffs {
            for (kb, cb) in &b.coeffs {
                let n = ka.n_hat + kb.n_hat;
                let m = ka.m_hat + kb.m_hat;
                if n > max_n || m > max_m {
                    continue;
                }
                out.add_to(ExponentKey::new(n, ka.l_hat + kb.l_hat, m), ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    /// Integer power by repeated squaring (works for any series when e >= 0).
    /// Intermediates are truncated to the window the final power supports, so
    /// positive-valuation bases do not inflate intermediate windows.
    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let inv = TriSeries::one(self.trunc).div(self)?;
            return inv.pow_i64(-e);
        }
        if e == 0 {
            return Ok(TriSeries::one(self.trunc));
        }
        let v = self.vals();
        let target = TruncationPolicy {
            max_tau: self.trunc.max_tau + v.tau * Rat64::from_integer(e - 1),
            max_omega: self.trunc.max_omega + v.omega * Rat64::from_integer(e - 1),
            max_abs_z: self.trunc.max_abs_z * Rat64::from_integer(e),
        };
        let cap = |s: TriSeries<C>| -> TriSeries<C> {
            let w = TruncationPolicy {
                max_tau: s.trunc.max_tau.min(target.max_tau),
                max_omega: s.trunc.max_omega.min(target.max_omega),
                max_abs_z: s.trunc.max_abs_z.min(target.max_abs_z),
            };
            s.truncate_to(w)
        };
        let mut result = TriSeries::one(self.trunc);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = cap(result.mul(&base)?);
            }
            e >>= 1;
            if e > 0 {
                base = cap(base.mul(&base)?);
            }
        }
        Ok(result)
    }

    /// Binomial series (1 + v)^alpha for a series with constant term one whose
    /// variable part has strictly positive (q, s)-valuation.
    pub fn pow_rational(&self, alpha: Rat64) -> Result<Self> {
        let const_key = ExponentKey::new(0, 0, 0);
        match self.coeffs.get(&const_key) {
            Some(c) if *c == C::c_one() => {}
            _ => return Err(Error::NonUnitConstantTerm),
        }
        let mut v = self.clone();
        v.coeffs.remove(&const_key);
        for k in v.coeffs.keys() {
            if k.n_hat <= 0 && k.m_hat <= 0 {
                return Err(Error::NonPositiveValuation);
            }
        }
        let alpha_big = rat64_to_big(alpha);
        let mut out = TriSeries::one(self.trunc)
            .with_denominators(self.den_tau, self.den_z, self.den_omega);
        out.trunc = self.trunc;
        let mut power = TriSeries::one(self.trunc);
        let mut k: u64 = 0;
        loop {
            if k > 0 {
                power = power.mul(&v)?.truncate_to(self.trunc);
                if power.is_empty() {
                    break;
                }
            }
            if k > 0 {
                let coeff = binomial_rational(&alpha_big, k);
                out = out.add(&power.scale_rational(&coeff));
            }
            k += 1;
            if k > 10_000 {
                return Err(Error::WindowTooSmall("binomial expansion did not terminate".into()));
            }
        }
        Ok(out)
    }

    /// Exact division a / b by slice-wise long division: series are grouped into
    /// Laurent-polynomial slices in r indexed by the (q, s)-bidegree; the leading
    /// slice of the divisor must divide exactly in every step.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.coeffs.is_empty() {
            return Err(Error::ZeroDivisor);
        }
        let (a, b) = self.unify(other);

        // Slices of the divisor keyed by (n_hat, m_hat).
        let mut b_slices: BTreeMap<(i64, i64), Vec<(i64, C)>> = BTreeMap::new();
        for (k, c) in &b.coeffs {
            b_slices.entry((k.n_hat, k.m_hat)).or_default().push((k.l_hat, c.clone()));
        }
        let (&(bn0, bm0), _) = b_slices.iter().next().unwrap();
        // Leading slice must be minimal component-wise.
        for &(n, m) in b_slices.keys() {
            if n < bn0 || m < bm0 {
                return Err(Error::UnsupportedDivisorShape);
            }
        }
        let b0 = b_slices.get(&(bn0, bm0)).unwrap().clone();

        let mut a_slices: BTreeMap<(i64, i64), Vec<(i64, C)>> = BTreeMap::new();
        for (k, c) in &a.coeffs {
            a_slices.entry((k.n_hat, k.m_hat)).or_default().push((k.l_hat, c.clone()));
        }
        for &(n, m) in a_slices.keys() {
            if n < bn0 || m < bm0 {
                return Err(Error::NonDivisible(format!(
                    "dividend slice ({n}, {m}) below divisor valuation ({bn0}, {bm0})"
                )));
            }
        }

        // Quotient window.
        let bval_tau = Rat64::new(bn0, b.den_tau);
        let bval_omega = Rat64::new(bm0, b.den_omega);
        let trunc = TruncationPolicy {
            max_tau: a.trunc.max_tau.min(b.trunc.max_tau) - bval_tau,
            max_omega: a.trunc.max_omega.min(b.trunc.max_omega) - bval_omega,
            max_abs_z: a.trunc.max_abs_z + b.trunc.max_abs_z,
        };
        let max_n = ratio_floor_scaled(trunc.max_tau, a.den_tau);
        let max_m = ratio_floor_scaled(trunc.max_omega, a.den_omega);

        // Quotient slices are computed by increasing total grade n + m. The
        // quotient support lies in the rectangle spanned by the shifted
        // dividend support and the window (cancellation can only push support
        // upward from the component-wise minimum).
        let mut targets: Vec<(i64, i64)> = Vec::new();
        if !a_slices.is_empty() {
            let min_qn = a_slices.keys().map(|&(n, _)| n).min().unwrap() - bn0;
            let min_qm = a_slices.keys().map(|&(_, m)| m).min().unwrap() - bm0;
            for n in min_qn..=max_n {
                for m in min_qm..=max_m {
                    targets.push((n, m));
                }
            }
        }
        targets.sort_by_key(|&(n, m)| (n + m, n));

        let mut q_slices: BTreeMap<(i64, i64), Vec<(i64, C)>> = BTreeMap::new();
        for &(qn, qm) in &targets {
            // residual = a_slice(qn + bn0, qm + bm0) - sum q_slice(u,v) * b_slice(qn-u+bn0, qm-v+bm0)
            let mut residual: BTreeMap<i64, C> = BTreeMap::new();
            if let Some(sl) = a_slices.get(&(qn + bn0, qm + bm0)) {
                for (l, c) in sl {
                    add_laurent(&mut residual, *l, c.clone());
                }
            }
            for ((u, v), qs) in &q_slices {
                let (dn, dm) = (qn - u + bn0, qm - v + bm0);
                if dn < bn0 || dm < bm0 {
                    continue;
                }
                if let Some(bs) = b_slices.get(&(dn, dm)) {
                    for (lq, cq) in qs {
                        for (lb, cb) in bs {
                            add_laurent(&mut residual, lq + lb, cq.mul_ref(cb).neg_ref());
                        }
                    }
                }
            }
            residual.retain(|_, c| !c.c_is_zero());
            if residual.is_empty() {
                continue;
            }
            let quotient = laurent_div_exact(&residual, &b0)?;
            if !quotient.is_empty() {
                q_slices.insert((qn, qm), quotient);
            }
        }

        let mut out = TriSeries::zero(a.den_tau, a.den_z, a.den_omega, trunc);
        let mut max_abs_l: i64 = 0;
        for ((n, m), sl) in &q_slices {
            for (l, c) in sl {
                max_abs_l = max_abs_l.max(l.abs());
                out.insert(ExponentKey::new(*n, *l, *m), c.clone());
            }
        }
        // The z bound is saturated to the actual support.
        out.trunc.max_abs_z = a
            .trunc
            .max_abs_z
            .max(Rat64::new(max_abs_l, a.den_z));
        Ok(out)
    }

    /// Multiplies each exponent by the per-variable positive factor.
    pub fn rescale(&self, c_tau: i64, c_z: i64, c_omega: i64) -> Self {
        assert!(c_tau > 0 && c_z > 0 && c_omega > 0);
        let trunc = TruncationPolicy {
            max_tau: self.trunc.max_tau * Rat64::from_integer(c_tau),
            max_omega: self.trunc.max_omega * Rat64::from_integer(c_omega),
            max_abs_z: self.trunc.max_abs_z * Rat64::from_integer(c_z),
        };
        let mut out = TriSeries::zero(self.den_tau, self.den_z, self.den_omega, trunc);
        for (k, c) in &self.coeffs {
            out.insert(
                ExponentKey::new(k.n_hat * c_tau, k.l_hat * c_z, k.m_hat * c_omega),
                c.clone(),
            );
        }
        out.normalize_denominators()
    }

    /// Drops coefficients outside the given window and adopts it.
    pub fn truncate_to(&self, trunc: TruncationPolicy) -> Self {
        let mut out = TriSeries::zero(self.den_tau, self.den_z, self.den_omega, trunc);
        for (k, c) in &self.coeffs {
            out.insert(*k, c.clone());
        }
        out
    }

    /// Substitutes r -> 1 (z = 0), collapsing the l-grading.
    pub fn collapse_z(&self) -> Self {
        let mut out = TriSeries::zero(self.den_tau, 1, self.den_omega, self.trunc);
        for (k, c) in &self.coeffs {
            out.add_to(ExponentKey::new(k.n_hat, 0, k.m_hat), c.clone());
        }
        out
    }

    /// Extracts the q-r layer at a fixed omega-exponent.
    pub fn omega_layer(&self, m_hat: i64) -> Self {
        let mut out = TriSeries::zero(self.den_tau, self.den_z, self.den_omega, self.trunc);
        for (k, c) in &self.coeffs {
            if k.m_hat == m_hat {
                out.insert(ExponentKey::new(k.n_hat, k.l_hat, 0), c.clone());
            }
        }
        out
    }

    pub fn omega_support(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.coeffs.keys().map(|k| k.m_hat).collect();
        v.dedup();
        v
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TriSeries<D> {
        let mut out = TriSeries::zero(self.den_tau, self.den_z, self.den_omega, self.trunc);
        for (k, c) in &self.coeffs {
            let d = f(c);
            if !d.c_is_zero() {
                out.coeffs.insert(*k, d);
            }
        }
        out
    }

    /// First mismatching coefficient of two series inside the window, if any.
    /// Missing keys count as zero. Denominators are unified before comparing.
    pub fn first_mismatch(&self, other: &Self, window: &TruncationPolicy) -> Option<Mismatch<C>> {
        let (a, b) = self.unify(other);
        let mut keys: std::collections::BTreeSet<ExponentKey> = std::collections::BTreeSet::new();
        for k in a.coeffs.keys().chain(b.coeffs.keys()) {
            if window.contains(k, a.den_tau, a.den_z, a.den_omega) {
                keys.insert(*k);
            }
        }
        for k in keys {
            let ca = a.coeffs.get(&k).cloned().unwrap_or_else(C::c_zero);
            let cb = b.coeffs.get(&k).cloned().unwrap_or_else(C::c_zero);
            if ca != cb {
                return Some(Mismatch {
                    tau: Rat64::new(k.n_hat, a.den_tau),
                    z: Rat64::new(k.l_hat, a.den_z),
                    omega: Rat64::new(k.m_hat, a.den_omega),
                    left: ca,
                    right: cb,
                });
            }
        }
        None
    }

    pub fn agrees_with(&self, other: &Self, window: &TruncationPolicy) -> bool {
        self.first_mismatch(other, window).is_none()
    }
}

/// A coefficient disagreement located by true exponents.
#[derive(Debug, Clone)]
pub struct Mismatch<C> {
    pub tau: Rat64,
    pub z: Rat64,
    pub omega: Rat64,
    pub left: C,
    pub right: C,
}

impl TriSeries<BigRational> {
    /// All denominators must reduce to one; returns offending keys otherwise.
    pub fn assert_integer_coefficients(&self) -> Result<()> {
        for (k, c) in self.iter() {
            if !c.denom().is_one() {
                return Err(Error::IntegralityViolation(format!(
                    "coefficient {} at key ({}, {}, {})",
                    c, k.n_hat, k.l_hat, k.m_hat
                )));
            }
        }
        Ok(())
    }

    /// JSON object: {"den_tau":..,"den_z":..,"den_omega":..,"coeffs":[[n,l,m,"c"],..]}
    /// with entries sorted by (m, n, l) key order.
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                serde_json::json!([k.n_hat, k.l_hat, k.m_hat, format_rational(c)])
            })
            .collect();
        serde_json::json!({
            "den_tau": self.den_tau,
            "den_z": self.den_z,
            "den_omega": self.den_omega,
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &serde_json::Value, trunc: TruncationPolicy) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Domain("series JSON must be an object".into()))?;
        let get_den = |name: &str| -> Result<i64> {
            obj.get(name)
                .and_then(|x| x.as_i64())
                .ok_or_else(|| Error::Domain(format!("missing field {name}")))
        };
        let den_tau = get_den("den_tau")?;
        let den_z = get_den("den_z")?;
        let den_omega = get_den("den_omega")?;
        let mut out = TriSeries::zero(den_tau, den_z, den_omega, trunc);
        let coeffs = obj
            .get("coeffs")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Domain("missing coeffs".into()))?;
        for entry in coeffs {
            let arr = entry.as_array().ok_or_else(|| Error::Domain("bad coeff row".into()))?;
            if arr.len() != 4 {
                return Err(Error::Domain("coeff row must have 4 entries".into()));
            }
            let n = arr[0].as_i64().ok_or_else(|| Error::Domain("bad exponent".into()))?;
            let l = arr[1].as_i64().ok_or_else(|| Error::Domain("bad exponent".into()))?;
            let m = arr[2].as_i64().ok_or_else(|| Error::Domain("bad exponent".into()))?;
            let cs = arr[3].as_str().ok_or_else(|| Error::Domain("bad coefficient".into()))?;
            let c: BigRational = cs
                .parse()
                .map_err(|_| Error::Domain(format!("unparseable rational {cs}")))?;
            out.insert(ExponentKey::new(n, l, m), c);
        }
        Ok(out)
    }

    /// Leading terms rendered for human consumption, lowest keys first.
    pub fn leading_terms_text(&self, count: usize) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().take(count) {
            let (t, z, o) = self.true_exponents(k);
            parts.push(format!("{} q^{} r^{} s^{}", c, t, z, o));
        }
        if self.coeffs.len() > count {
            parts.push("...".into());
        }
        parts.join(" + ")
    }
}

pub fn format_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn ratio_floor_scaled(bound: Rat64, den: i64) -> i64 {
    // Largest scaled exponent x with x/den <= bound.
    let r = bound * Rat64::from_integer(den);
    r.floor().to_integer()
}

fn add_laurent<C: Coeff>(map: &mut BTreeMap<i64, C>, l: i64, c: C) {
    if c.c_is_zero() {
        return;
    }
    match map.remove(&l) {
        None => {
            map.insert(l, c);
        }
        Some(prev) => {
            let sum = prev.add_ref(&c);
            if !sum.c_is_zero() {
                map.insert(l, sum);
            }
        }
    }
}

/// Exact division of Laurent polynomials in one variable; errors if the
/// remainder is nonzero.
fn laurent_div_exact<C: Coeff>(a: &BTreeMap<i64, C>, b: &[(i64, C)]) -> Result<Vec<(i64, C)>> {
    let mut b = b.to_vec();
    b.sort_by_key(|(l, _)| *l);
    let (b_hi_l, b_hi_c) = b.last().cloned().ok_or(Error::ZeroDivisor)?;
    let b_hi_inv = b_hi_c.inv_ref()?;
    let mut rem: BTreeMap<i64, C> = a.clone();
    let mut quot: Vec<(i64, C)> = Vec::new();
    while let Some((&r_hi_l, r_hi_c)) = rem.iter().next_back() {
        let q_l = r_hi_l - b_hi_l;
        let q_c = r_hi_c.mul_ref(&b_hi_inv);
        for (bl, bc) in &b {
            add_laurent(&mut rem, q_l + bl, q_c.mul_ref(bc).neg_ref());
        }
        quot.push((q_l, q_c));
        if quot.len() > 100_000 {
            return Err(Error::NonDivisible("division does not terminate".into()));
        }
        // Termination: if the remainder's top degree did not strictly drop the
        // division cannot be exact.
        if let Some((&new_hi, _)) = rem.iter().next_back() {
            if new_hi >= r_hi_l {
                return Err(Error::NonDivisible("remainder degree did not decrease".into()));
            }
        }
    }
    Ok(quot)
}
