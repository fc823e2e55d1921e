//! Theta-function calculus: the Jacobi theta series, theta series of level N
//! with characteristics, the weight-0 quotients xi = theta(tau, z)/theta(tau, 0)
//! with their exact transformation rules, slash transport to arbitrary cusps,
//! trace operators, and the weight-two constant-term identity.

use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{One, Zero};

use crate::arith::{big_rat, big_rat_frac, kronecker_minus4, Rat64};
use crate::cyclotomic::{CycQ, Phase};
use crate::error::{Error, Result};
use crate::modular::{coset_reps, st_decompose, Cusp, Gen, Mat2};
use crate::series::{Coeff, ExponentKey, TriSeries, TruncationPolicy};

/// Series with exact cyclotomic coefficients, used for theta expansions whose
/// terms carry root-of-unity phases.
pub type CycSeries = TriSeries<CycQ>;

/// The Jacobi theta series sum_m (-4|m) q^(m^2/8) r^(m/2); den_tau = 8, den_z = 2.
pub fn theta_series(trunc: &TruncationPolicy) -> TriSeries {
    let bound8 = (trunc.max_tau * Rat64::from_integer(8)).floor().to_integer();
    let mut terms = Vec::new();
    let mut m: i64 = 1;
    while m * m <= bound8 {
        terms.push((ExponentKey::new(m * m, m, 0), big_rat(kronecker_minus4(m))));
        terms.push((ExponentKey::new(m * m, -m, 0), big_rat(kronecker_minus4(-m))));
        m += 2;
    }
    TriSeries::from_terms(terms, 8, 2, 1, *trunc)
}

/// Product form -q^(1/8) r^(-1/2) prod (1-q^(n-1) r)(1-q^n r^(-1))(1-q^n),
/// expanded within the window. Used as an independent route to theta.
pub fn theta_series_product(trunc: &TruncationPolicy) -> Result<TriSeries> {
    let mut unit = TriSeries::one(TruncationPolicy::box_window(
        trunc.max_tau + Rat64::from_integer(1),
        trunc.max_omega,
        trunc.max_abs_z + Rat64::from_integer(2),
    ));
    let bound = (trunc.max_tau + Rat64::from_integer(1)).floor().to_integer();
    for n in 1..=bound.max(1) {
        // (1 - q^(n-1) r)
        let f1 = TriSeries::from_terms(
            [
                (ExponentKey::new(0, 0, 0), big_rat(1)),
                (ExponentKey::new(n - 1, 1, 0), big_rat(-1)),
            ],
            1,
            1,
            1,
            unit.trunc,
        );
        let f2 = TriSeries::from_terms(
            [
                (ExponentKey::new(0, 0, 0), big_rat(1)),
                (ExponentKey::new(n, -1, 0), big_rat(-1)),
            ],
            1,
            1,
            1,
            unit.trunc,
        );
        let f3 = TriSeries::from_terms(
            [
                (ExponentKey::new(0, 0, 0), big_rat(1)),
                (ExponentKey::new(n, 0, 0), big_rat(-1)),
            ],
            1,
            1,
            1,
            unit.trunc,
        );
        unit = unit.mul(&f1)?.mul(&f2)?.mul(&f3)?;
    }
    let prefix = TriSeries::monomial(big_rat(-1), 1, -1, 0, 8, 2, 1, *trunc);
    Ok(prefix.mul(&unit)?.truncate_to(*trunc))
}

/// theta(c tau, c z) / theta(tau, z) as a series with integer structure:
/// q^((c-1)/8) r^(-(c-1)/2) prod_(j>=0) P_c(q^j r) prod_(n>=1) P_c(q^n r^(-1))
/// / prod_(c not| n) (1 - q^n), with P_c(x) = 1 + x + ... + x^(c-1).
pub fn theta_quotient_scaled(c: i64, trunc: &TruncationPolicy) -> Result<TriSeries> {
    assert!(c >= 2);
    let work = TruncationPolicy::box_window(
        trunc.max_tau + Rat64::from_integer(1),
        trunc.max_omega,
        trunc.max_abs_z + Rat64::from_integer(c),
    );
    let bound = work.max_tau.floor().to_integer();
    let poly_in = |base_n: i64, l_sign: i64, tr: TruncationPolicy| -> TriSeries {
        let mut terms = vec![(ExponentKey::new(0, 0, 0), big_rat(1))];
        for k in 1..c {
            terms.push((ExponentKey::new(base_n * k, l_sign * k, 0), big_rat(1)));
        }
        TriSeries::from_terms(terms, 1, 1, 1, tr)
    };
    let mut unit = poly_in(0, 1, work); // j = 0 factor: P_c(r)
    for j in 1..=bound.max(0) {
        unit = unit.mul(&poly_in(j, 1, work))?;
        unit = unit.mul(&poly_in(j, -1, work))?;
    }
    // 1 / prod_(c not| n)(1 - q^n)
    for n in 1..=bound.max(0) {
        if n % c != 0 {
            let f = TriSeries::from_terms(
                [
                    (ExponentKey::new(0, 0, 0), big_rat(1)),
                    (ExponentKey::new(n, 0, 0), big_rat(-1)),
                ],
                1,
                1,
                1,
                work,
            );
            unit = unit.mul(&f.pow_rational(Rat64::from_integer(-1))?)?;
        }
    }
    let prefix = TriSeries::monomial(big_rat(1), c - 1, -(c - 1), 0, 8, 2, 1, *trunc);
    Ok(prefix.mul(&unit)?.truncate_to(*trunc))
}

/// Theta series of level N with characteristic (a, b), with z scaled by
/// z_scale: sum_n e(phase) q^((n + a/N)^2 / 2) r^(z_scale (n + a/N)), where the
/// phase of the n-th term is e^(2 pi i (n + a/N) b / N). Coefficients are exact
/// cyclotomic numbers.
pub fn theta_char_series_cyc(
    level: i64,
    a: i64,
    b: i64,
    z_scale: i64,
    trunc: &TruncationPolicy,
) -> CycSeries {
    assert!(level >= 1);
    let den_tau = 2 * level * level;
    let den_z = level;
    let bound = (trunc.max_tau * Rat64::from_integer(den_tau)).floor().to_integer();
    let mut out = CycSeries::zero(den_tau, den_z, 1, *trunc);
    // x = n N + a runs over the residue class a mod N; q-exponent x^2/(2 N^2).
    let mut n: i64 = 0;
    loop {
        let mut hit = false;
        for x in [n * level + a, -(n + 1) * level + a] {
            let qexp = x * x; // over den_tau = 2 N^2
            if qexp <= bound {
                hit = true;
                let phase = Phase::new(x * b, level * level);
                let term = CycQ::root_of_unity(phase);
                let key = ExponentKey::new(qexp, x * z_scale, 0);
                out = out.add(&CycSeries::from_terms(
                    [(key, term)],
                    den_tau,
                    den_z,
                    1,
                    *trunc,
                ));
            }
        }
        if !hit && n > 0 {
            break;
        }
        n += 1;
        if n > 10_000 {
            break;
        }
    }
    out
}

/// Rational theta-with-characteristic series when every phase collapses.
pub fn theta_char_series(level: i64, a: i64, b: i64, trunc: &TruncationPolicy) -> Result<TriSeries> {
    cyc_to_rational(&theta_char_series_cyc(level, a, b, 1, trunc))
}

pub fn cyc_to_rational(s: &CycSeries) -> Result<TriSeries> {
    let mut out = TriSeries::zero(s.den_tau, s.den_z, s.den_omega, s.trunc);
    let mut terms = Vec::new();
    for (k, c) in s.iter() {
        match c.as_rational() {
            Some(r) => terms.push((*k, r)),
            None => {
                return Err(Error::NonRationalCoefficient(format!(
                    "at key ({}, {}, {})",
                    k.n_hat, k.l_hat, k.m_hat
                )))
            }
        }
    }
    for (k, r) in terms {
        out = out.add(&TriSeries::from_terms([(k, r)], s.den_tau, s.den_z, s.den_omega, s.trunc));
    }
    Ok(out)
}

pub fn rational_to_cyc(s: &TriSeries) -> CycSeries {
    s.map_coeffs(|c| CycQ::rational(c.clone()))
}

/// A single xi factor: xi^(level)_(a,b)(tau, z_scale * z). The level is kept
/// even; odd-level symbols are doubled on construction ((a, b, N) -> (2a, 2b, 2N)
/// leaves the function unchanged).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiSymbol {
    pub level: i64,
    pub a: i64,
    pub b: i64,
    pub z_scale: i64,
}

impl XiSymbol {
    pub fn new(level: i64, a: i64, b: i64) -> Result<Self> {
        Self::with_scale(level, a, b, 1)
    }

    pub fn with_scale(level: i64, a: i64, b: i64, z_scale: i64) -> Result<Self> {
        assert!(level >= 1 && z_scale >= 1);
        let (level, a, b) = if level % 2 == 1 {
            (2 * level, 2 * a, 2 * b)
        } else {
            (level, a, b)
        };
        let a = a.rem_euclid(level);
        let b = b.rem_euclid(level);
        let sym = XiSymbol { level, a, b, z_scale };
        if sym.is_forbidden() {
            return Err(Error::ForbiddenCharacteristic);
        }
        Ok(sym)
    }

    fn is_forbidden(&self) -> bool {
        self.level % 2 == 0 && self.a == self.level / 2 && self.b == self.level / 2
    }

    /// Index (times two) of the factor as a Jacobi form: one half times z_scale^2.
    pub fn index_x2(&self) -> i64 {
        self.z_scale * self.z_scale
    }
}

/// Scalar multiple of a product of xi factors with an exact phase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct XiProduct {
    pub scalar: BigRational,
    pub phase: Phase,
    pub factors: Vec<XiSymbol>,
}

impl XiProduct {
    pub fn new(scalar: BigRational, factors: Vec<XiSymbol>) -> Self {
        let mut p = XiProduct { scalar, phase: Phase::one(), factors };
        p.factors.sort();
        p
    }

    pub fn index_x2(&self) -> i64 {
        self.factors.iter().map(|f| f.index_x2()).sum()
    }

    /// Application of one Jacobi-group generator, exact in characteristics and
    /// phase. S and T act per factor; the Heisenberg translation [l, m; 0]
    /// contributes the phase e^(2 pi i (a m - b l) z_scale / N) per factor.
    pub fn transform(&self, g: &JacobiGen) -> Result<XiProduct> {
        let mut out = self.clone();
        match g {
            JacobiGen::S => {
                for f in &mut out.factors {
                    let (a, b) = (f.a, f.b);
                    f.a = b.rem_euclid(f.level);
                    f.b = (-a).rem_euclid(f.level);
                    if f.is_forbidden() {
                        return Err(Error::ForbiddenCharacteristic);
                    }
                }
            }
            JacobiGen::T(n) => {
                for f in &mut out.factors {
                    let half = f.level / 2;
                    // b -> b + (a + half) per application of T.
                    let step = (f.a + half).rem_euclid(f.level);
                    f.b = (f.b + step * n).rem_euclid(f.level);
                    if f.is_forbidden() {
                        return Err(Error::ForbiddenCharacteristic);
                    }
                }
            }
            JacobiGen::Heis(lambda, mu) => {
                for f in &out.factors {
                    let num = (f.a * mu - f.b * lambda) * f.z_scale;
                    out.phase = out.phase.mul(&Phase::new(num, f.level));
                }
            }
        }
        out.factors.sort();
        Ok(out)
    }

    pub fn transform_word(&self, word: &[JacobiGen]) -> Result<XiProduct> {
        let mut out = self.clone();
        for g in word {
            out = out.transform(g)?;
        }
        Ok(out)
    }

    pub fn slash_matrix(&self, m: &Mat2) -> Result<XiProduct> {
        let word = st_decompose(m)?;
        let jword: Vec<JacobiGen> = word.iter().map(|g| (*g).into()).collect();
        self.transform_word(&jword)
    }

    /// Exact q-r expansion with cyclotomic coefficients.
    pub fn series_cyc(&self, trunc: &TruncationPolicy) -> Result<CycSeries> {
        // Work window padded by the denominator valuations.
        let pad = Rat64::from_integer(2);
        let work = TruncationPolicy::box_window(
            trunc.max_tau + pad,
            trunc.max_omega,
            trunc.max_abs_z + Rat64::from_integer(8),
        );
        let mut num = CycSeries::one(work);
        let mut den = CycSeries::one(work);
        for f in &self.factors {
            num = num.mul(&theta_char_series_cyc(f.level, f.a, f.b, f.z_scale, &work))?;
            den = den.mul(&theta_char_series_cyc(f.level, f.a, f.b, 0, &work))?;
        }
        let quotient = num.div(&den)?;
        let scalar = CycQ::from_phase_scaled(self.phase, self.scalar.clone());
        Ok(quotient.scale(&scalar).truncate_to(*trunc))
    }

    pub fn series(&self, trunc: &TruncationPolicy) -> Result<TriSeries> {
        cyc_to_rational(&self.series_cyc(trunc)?)
    }
}

/// Jacobi-group generator alphabet for xi transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiGen {
    S,
    T(i64),
    /// Heisenberg translation [lambda, mu; 0].
    Heis(i64, i64),
}

impl From<Gen> for JacobiGen {
    fn from(g: Gen) -> Self {
        match g {
            Gen::S => JacobiGen::S,
            Gen::T(n) => JacobiGen::T(n),
        }
    }
}

/// Orbit closure of a xi product under a set of generator words.
pub fn xi_orbit(start: &XiProduct, generators: &[Vec<JacobiGen>]) -> Result<BTreeSet<XiProduct>> {
    const CAP: usize = 10_000;
    let mut seen: BTreeSet<XiProduct> = BTreeSet::new();
    let mut frontier = vec![start.clone()];
    seen.insert(start.clone());
    while let Some(p) = frontier.pop() {
        for word in generators {
            let next = p.transform_word(word)?;
            if !seen.contains(&next) {
                if seen.len() >= CAP {
                    return Err(Error::OrbitCapExceeded(CAP));
                }
                seen.insert(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(seen)
}

/// Sum of xi products: a weight-0 nearly holomorphic Jacobi form given exactly.
#[derive(Debug, Clone)]
pub struct WeightZeroForm {
    pub id: String,
    pub level: i64,
    pub index_x2: i64,
    pub terms: Vec<XiProduct>,
}

impl WeightZeroForm {
    pub fn new(id: &str, level: i64, terms: Vec<XiProduct>) -> Self {
        let index_x2 = terms.first().map(|t| t.index_x2()).unwrap_or(0);
        assert!(terms.iter().all(|t| t.index_x2() == index_x2));
        WeightZeroForm { id: id.into(), level, index_x2, terms }
    }

    pub fn series(&self, trunc: &TruncationPolicy) -> Result<TriSeries> {
        let mut acc = CycSeries::zero(1, 1, 1, *trunc);
        for t in &self.terms {
            acc = acc.add(&t.series_cyc(trunc)?);
        }
        cyc_to_rational(&acc)
    }

    pub fn slash_matrix(&self, m: &Mat2) -> Result<WeightZeroForm> {
        let terms: Result<Vec<XiProduct>> = self.terms.iter().map(|t| t.slash_matrix(m)).collect();
        Ok(WeightZeroForm {
            id: self.id.clone(),
            level: self.level,
            index_x2: self.index_x2,
            terms: terms?,
        })
    }

    /// Expansion of the form slashed to the given cusp of Gamma_0(level).
    pub fn cusp_expansion(&self, cusp: &Cusp, trunc: &TruncationPolicy) -> Result<TriSeries> {
        self.slash_matrix(&cusp.matrix())?.series(trunc)
    }

    /// Trace to Gamma_0(target) for target | level: sum over coset classes.
    pub fn trace_to(&self, target: i64) -> Result<WeightZeroForm> {
        if self.level % target != 0 {
            return Err(Error::Domain(format!(
                "target level {} does not divide {}",
                target, self.level
            )));
        }
        let mut terms = Vec::new();
        for rep in coset_reps(self.level, target)? {
            let slashed = self.slash_matrix(&rep)?;
            terms.extend(slashed.terms);
        }
        Ok(WeightZeroForm {
            id: format!("tr({}->{})", self.id, target),
            level: target,
            index_x2: self.index_x2,
            terms,
        })
    }
}

/// Materialized Jacobi form data: metadata plus per-cusp expansions.
#[derive(Debug, Clone)]
pub struct JacobiForm {
    pub id: String,
    pub weight_x2: i64,
    pub index_x2: i64,
    pub level: i64,
    pub character_tag: String,
    pub q_chi: i64,
    pub expansions: std::collections::BTreeMap<Cusp, TriSeries>,
}

impl JacobiForm {
    pub fn infinity_expansion(&self) -> Option<&TriSeries> {
        self.expansions.iter().find(|(c, _)| c.e == self.level).map(|(_, s)| s)
    }

    /// Every stored coefficient of a holomorphic form satisfies 4 n t - l^2 >= 0.
    pub fn check_holomorphic(&self) -> Result<()> {
        for (cusp, s) in &self.expansions {
            for (k, _) in s.iter() {
                let (n, l, _) = s.true_exponents(k);
                let norm = Rat64::from_integer(4) * n * Rat64::new(self.index_x2, 2)
                    - l * l;
                if norm < Rat64::from_integer(0) {
                    return Err(Error::Domain(format!(
                        "negative norm {} at cusp {}",
                        norm,
                        cusp.label()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The weight-two constant-term identity for a level-one nearly holomorphic
/// Jacobi form of weight 0 and index t (= index_x2 / 2):
/// t sum_l c(0, l) - 24 t sum_(n<0) sigma_1(-n) c(n, l) - 6 sum_l l^2 c(0, l).
pub fn weight2_constant_check(series: &TriSeries, index_x2: i64) -> BigRational {
    let t = big_rat_frac(index_x2, 2);
    let mut c0 = BigRational::zero();
    let mut c0l2 = BigRational::zero();
    let mut neg = BigRational::zero();
    for (k, c) in series.iter() {
        let (n, l, _) = series.true_exponents(k);
        if n == Rat64::from_integer(0) {
            c0 += c;
            let l_big = big_rat(*l.numer()) / big_rat(*l.denom());
            c0l2 += &l_big * &l_big * c;
        } else if n < Rat64::from_integer(0) {
            assert!(*n.denom() == 1, "integral q-exponents expected at level one");
            let s1 = crate::arith::sigma(1, -*n.numer());
            neg += big_rat(s1) * c;
        }
    }
    &t * &c0 - big_rat(24) * &t * &neg - big_rat(6) * &c0l2
}

/// Specialization z = 0 must return 1 for any xi factor: used as a sanity check.
pub fn xi_specializes_to_one(sym: &XiSymbol, trunc: &TruncationPolicy) -> Result<bool> {
    let p = XiProduct::new(BigRational::one(), vec![*sym]);
    let s = p.series_cyc(trunc)?;
    let collapsed = s.collapse_z();
    let one = CycSeries::one(*trunc);
    Ok(collapsed.agrees_with(&one, trunc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(t: i64) -> TruncationPolicy {
        TruncationPolicy::box_window(
            Rat64::from_integer(t),
            Rat64::from_integer(1),
            Rat64::from_integer(16),
        )
    }

    #[test]
    fn theta_leading_terms() {
        let th = theta_series(&win(2));
        assert_eq!(th.coeff_at(Rat64::new(1, 8), Rat64::new(1, 2), 0.into()), big_rat(1));
        assert_eq!(th.coeff_at(Rat64::new(1, 8), Rat64::new(-1, 2), 0.into()), big_rat(-1));
        assert_eq!(th.coeff_at(Rat64::new(9, 8), Rat64::new(3, 2), 0.into()), big_rat(-1));
    }

    #[test]
    fn theta_vanishes_at_z_zero() {
        let th = theta_series(&win(6));
        assert!(th.collapse_z().is_empty());
    }

    #[test]
    fn theta_sum_equals_product() {
        let trunc = TruncationPolicy::box_window(Rat64::new(49, 8), 0.into(), Rat64::from_integer(16));
        let sum = theta_series(&trunc);
        let prod = theta_series_product(&trunc).unwrap();
        assert!(sum.agrees_with(&prod, &trunc));
    }

    #[test]
    fn theta_squared_two_routes() {
        let trunc = TruncationPolicy::box_window(Rat64::from_integer(5), 0.into(), Rat64::from_integer(16));
        let a = theta_series(&trunc).pow_i64(2).unwrap();
        let b = theta_series_product(&trunc).unwrap().pow_i64(2).unwrap();
        let w = TruncationPolicy::box_window(Rat64::from_integer(5), 0.into(), Rat64::from_integer(16));
        assert!(a.agrees_with(&b, &w));
    }

    #[test]
    fn theta_char_11_is_i_times_theta() {
        let trunc = win(3);
        let tc = theta_char_series_cyc(2, 1, 1, 1, &trunc);
        let th = rational_to_cyc(&theta_series(&trunc));
        let i = CycQ::root_of_unity(Phase::new(1, 4));
        let scaled = th.scale(&i);
        assert!(tc.agrees_with(&scaled, &trunc));
    }

    #[test]
    fn theta_char_shift_law() {
        // theta_(a+N, b) = e^(2 pi i b / N) ... shift in a by N multiplies by
        // e^(2 pi i b/N)? The displayed law: theta_(a+a'N, b+b'N) = e(a b'/N) theta_(a,b).
        // Shifting a by N (a' = 1, b' = 0) leaves the series unchanged.
        let trunc = win(3);
        let t1 = theta_char_series_cyc(4, 1, 3, 1, &trunc);
        let t2 = theta_char_series_cyc(4, 5, 3, 1, &trunc);
        assert!(t1.agrees_with(&t2, &trunc));
        // Shifting b by N (b' = 1): factor e^(2 pi i a / N).
        let t3 = theta_char_series_cyc(4, 1, 7, 1, &trunc);
        let factor = CycQ::root_of_unity(Phase::new(1, 4));
        assert!(t3.agrees_with(&t1.scale(&factor), &trunc));
    }

    #[test]
    fn theta00_sum_equals_triple_product() {
        // theta_00 = prod (1-q^n)(1 + q^((2n-1)/2) r)(1 + q^((2n-1)/2) r^(-1))
        let trunc = TruncationPolicy::box_window(Rat64::from_integer(6), 0.into(), Rat64::from_integer(12));
        let sum = cyc_to_rational(&theta_char_series_cyc(1, 0, 0, 1, &trunc)).unwrap();
        let work = TruncationPolicy::box_window(Rat64::from_integer(7), 0.into(), Rat64::from_integer(14));
        let mut prod = TriSeries::one(work);
        for n in 1..=7i64 {
            let f1 = TriSeries::from_terms(
                [(ExponentKey::new(0, 0, 0), big_rat(1)), (ExponentKey::new(n, 0, 0), big_rat(-1))],
                1, 1, 1, work,
            );
            let f2 = TriSeries::from_terms(
                [(ExponentKey::new(0, 0, 0), big_rat(1)), (ExponentKey::new(2 * n - 1, 2, 0), big_rat(1))],
                2, 2, 1, work,
            );
            let f3 = TriSeries::from_terms(
                [(ExponentKey::new(0, 0, 0), big_rat(1)), (ExponentKey::new(2 * n - 1, -2, 0), big_rat(1))],
                2, 2, 1, work,
            );
            prod = prod.mul(&f1).unwrap().mul(&f2).unwrap().mul(&f3).unwrap();
        }
        assert!(sum.agrees_with(&prod, &trunc));
    }

    #[test]
    fn xi_leading_row_and_phi2() {
        let sym = XiSymbol::new(2, 1, 0).unwrap();
        let xi = XiProduct::new(big_rat(1), vec![sym]);
        let trunc = win(2);
        let s = xi.series(&trunc).unwrap();
        // q^0 row: (r^(1/2) + r^(-1/2)) / 2
        assert_eq!(s.coeff_at(0.into(), Rat64::new(1, 2), 0.into()), big_rat_frac(1, 2));
        assert_eq!(s.coeff_at(0.into(), Rat64::new(-1, 2), 0.into()), big_rat_frac(1, 2));
        // 4 xi^2 at q^0: r^(-1) + 2 + r
        let phi2 = XiProduct::new(big_rat(4), vec![sym, sym]);
        let p = phi2.series(&trunc).unwrap();
        assert_eq!(p.coeff_at(0.into(), Rat64::from_integer(1), 0.into()), big_rat(1));
        assert_eq!(p.coeff_at(0.into(), 0.into(), 0.into()), big_rat(2));
        assert_eq!(p.coeff_at(0.into(), Rat64::from_integer(-1), 0.into()), big_rat(1));
    }

    #[test]
    fn xi_z_zero_is_one() {
        for (lvl, a, b) in [(2, 1, 0), (2, 0, 1), (4, 2, 1), (6, 3, 1)] {
            let sym = XiSymbol::new(lvl, a, b).unwrap();
            assert!(xi_specializes_to_one(&sym, &win(2)).unwrap(), "xi({lvl};{a},{b})");
        }
    }

    #[test]
    fn xi_transform_rules() {
        // S-rule: xi^(2)_(1,0) | S = xi^(2)_(0,1)
        let p = XiProduct::new(big_rat(1), vec![XiSymbol::new(2, 1, 0).unwrap()]);
        let ps = p.transform(&JacobiGen::S).unwrap();
        assert_eq!(ps.factors[0], XiSymbol::new(2, 0, 1).unwrap());
        assert!(ps.phase.is_one());

        // Even-level T-rule: xi^(4)_(2,1) is fixed by T.
        let p41 = XiProduct::new(big_rat(1), vec![XiSymbol::new(4, 2, 1).unwrap()]);
        let p41t = p41.transform(&JacobiGen::T(1)).unwrap();
        assert_eq!(p41t.factors[0], XiSymbol::new(4, 2, 1).unwrap());

        // Odd-level doubling: xi^(3)_(1,1) becomes a level-6 symbol.
        let p3 = XiSymbol::new(3, 1, 1).unwrap();
        assert_eq!(p3.level, 6);
        assert_eq!((p3.a, p3.b), (2, 2));

        // Heisenberg [1, 0; 0] on xi^(2)_(1,0): phase e(-b/N * 1) = 1 for b = 0.
        let ph = p.transform(&JacobiGen::Heis(1, 0)).unwrap();
        assert!(ph.phase.is_one());
        // [0, 1; 0]: phase e(a/N) = e(1/2) = -1.
        let ph2 = p.transform(&JacobiGen::Heis(0, 1)).unwrap();
        assert_eq!(ph2.phase, Phase::minus_one());
    }

    #[test]
    fn xi_orbits_match_known_sets() {
        let gens = |n: i64| -> Vec<Vec<JacobiGen>> {
            crate::modular::gamma0_generators(n)
                .unwrap()
                .iter()
                .map(|m| {
                    st_decompose(m)
                        .unwrap()
                        .into_iter()
                        .map(JacobiGen::from)
                        .collect()
                })
                .collect()
        };
        // O(xi^(2)_(1,0)) = { xi^(2)_(1,0) }
        let p = XiProduct::new(big_rat(1), vec![XiSymbol::new(2, 1, 0).unwrap()]);
        let orbit = xi_orbit(&p, &gens(2)).unwrap();
        assert_eq!(orbit.len(), 1);

        // O(xi^(6)_(3,1)) = { xi_(3,1), xi_(3,5) } under Gamma_0(3)
        let p61 = XiProduct::new(big_rat(1), vec![XiSymbol::new(6, 3, 1).unwrap()]);
        let orbit = xi_orbit(&p61, &gens(3)).unwrap();
        let chars: BTreeSet<(i64, i64)> = orbit.iter().map(|p| (p.factors[0].a, p.factors[0].b)).collect();
        assert_eq!(chars, BTreeSet::from([(3, 1), (3, 5)]));

        // O(xi^(4)_(0,1)) = { xi_(0,1), xi_(0,3) } under Gamma_0(4)
        let p401 = XiProduct::new(big_rat(1), vec![XiSymbol::new(4, 0, 1).unwrap()]);
        let orbit = xi_orbit(&p401, &gens(4)).unwrap();
        let chars: BTreeSet<(i64, i64)> = orbit.iter().map(|p| (p.factors[0].a, p.factors[0].b)).collect();
        assert_eq!(chars, BTreeSet::from([(0, 1), (0, 3)]));

        // O(xi^(4)_(2,1)) = { xi_(2,1), xi_(2,3) }
        let p421 = XiProduct::new(big_rat(1), vec![XiSymbol::new(4, 2, 1).unwrap()]);
        let orbit = xi_orbit(&p421, &gens(4)).unwrap();
        let chars: BTreeSet<(i64, i64)> = orbit.iter().map(|p| (p.factors[0].a, p.factors[0].b)).collect();
        assert_eq!(chars, BTreeSet::from([(2, 1), (2, 3)]));
    }

    #[test]
    fn theta_quotient_leading() {
        let trunc = TruncationPolicy::box_window(Rat64::from_integer(3), 0.into(), Rat64::from_integer(10));
        let q2 = theta_quotient_scaled(2, &trunc).unwrap();
        // leading q^(1/8)(r^(1/2) + r^(-1/2))
        assert_eq!(q2.coeff_at(Rat64::new(1, 8), Rat64::new(1, 2), 0.into()), big_rat(1));
        assert_eq!(q2.coeff_at(Rat64::new(1, 8), Rat64::new(-1, 2), 0.into()), big_rat(1));
        // multiply back: q2 * theta = theta(2 tau, 2z)
        let th = theta_series(&trunc);
        let th2 = theta_series(&TruncationPolicy::box_window(
            Rat64::from_integer(6), 0.into(), Rat64::from_integer(20),
        )).rescale(2, 2, 1);
        let back = q2.mul(&th).unwrap();
        let cmp = TruncationPolicy::box_window(Rat64::from_integer(3), 0.into(), Rat64::from_integer(8));
        assert!(back.agrees_with(&th2, &cmp));
    }

    #[test]
    fn theta_quotient_direct_division_matches() {
        let trunc = TruncationPolicy::box_window(Rat64::from_integer(3), 0.into(), Rat64::from_integer(12));
        let big = TruncationPolicy::box_window(Rat64::from_integer(8), 0.into(), Rat64::from_integer(24));
        let th2 = theta_series(&big).rescale(2, 2, 1);
        let th = theta_series(&big);
        let div = th2.div(&th).unwrap();
        let prod_form = theta_quotient_scaled(2, &trunc).unwrap();
        assert!(div.agrees_with(&prod_form, &trunc));
    }
}
