//! Hecke operators acting on Jacobi forms through their Fourier coefficients,
//! and the arithmetic lift to Siegel modular form coefficient tables, together
//! with the two closed-formula oracles and the V_t symmetry check.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::Zero;

use crate::arith::{big_rat, divisors, gcd, gcd3, kronecker_minus4, legendre3, sigma, Rat64};
use crate::cyclotomic::Phase;
use crate::error::{Error, Result};
use crate::modular::{character_value, eisenstein_qexpansion, sigma_a, CharacterId};
use crate::registry::EtaThetaRecipe;
use crate::series::{ExponentKey, TriSeries, TruncationPolicy};

/// Jacobi-form data prepared for lifting: metadata plus the coefficient table
/// c(n, l) at infinity in integer units (tau-exponent n/q, z-exponent l/2).
#[derive(Debug, Clone)]
pub struct LiftInput {
    pub id: String,
    /// Integral weight.
    pub k: i64,
    /// Twice the index.
    pub t_x2: i64,
    pub level: i64,
    /// Conductor q with chi(T) = e^(2 pi i / q); divides 24.
    pub q: i64,
    pub chi: CharacterId,
    pub mu: i64,
    pub coeffs: BTreeMap<(i64, i64), BigRational>,
}

impl LiftInput {
    /// Builds the table from a registry recipe, with enough terms for a lift
    /// window of the given tau/omega bounds.
    pub fn from_recipe(recipe: &EtaThetaRecipe, max_tau: Rat64, max_omega: Rat64) -> Result<Self> {
        if recipe.weight_x2 % 2 != 0 {
            return Err(Error::LiftPrecondition(format!(
                "weight {}/2 is not integral",
                recipe.weight_x2
            )));
        }
        let k = recipe.weight_x2 / 2;
        let q = recipe.q_chi;
        if 24 % q != 0 {
            return Err(Error::LiftPrecondition(format!("conductor {q} does not divide 24")));
        }
        if (recipe.index_x2 * q) % 2 != 0 {
            return Err(Error::LiftPrecondition("q t must be integral".into()));
        }
        // Largest product n m reachable inside the window.
        let n_max = (max_tau * Rat64::from_integer(q)).floor().to_integer();
        let m_max = (max_omega * Rat64::from_integer(2) / Rat64::from_integer(recipe.index_x2))
            .floor()
            .to_integer();
        let input_tau = Rat64::new((n_max * m_max).max(n_max).max(1), q);
        let l_bound = 2 + (2.0 * ((n_max * m_max).max(1) as f64 * 2.0).sqrt()) as i64;
        let window = TruncationPolicy::box_window(
            input_tau,
            Rat64::from_integer(0),
            Rat64::from_integer(l_bound),
        );
        let series = recipe.series(&window)?;
        let mut coeffs = BTreeMap::new();
        for (key, c) in series.iter() {
            let (tau, z, _) = series.true_exponents(key);
            let n = tau * Rat64::from_integer(q);
            let l = z * Rat64::from_integer(2);
            if *n.denom() != 1 || *l.denom() != 1 {
                return Err(Error::LiftPrecondition(format!(
                    "expansion exponent (q^{tau}, r^{z}) is off the (n/{q}, l/2) grid"
                )));
            }
            let (n, l) = (*n.numer(), *l.numer());
            if n < 0 {
                return Err(Error::LiftPrecondition("input is not holomorphic at infinity".into()));
            }
            // Parity l = 2t (mod 2) and congruence n = 1 (mod q) forced by chi(T).
            if (l - recipe.index_x2).rem_euclid(2) != 0 {
                return Err(Error::LiftPrecondition("z-exponent parity violates the index".into()));
            }
            if n > 0 && n.rem_euclid(q) != 1 % q {
                return Err(Error::LiftPrecondition(format!(
                    "tau-exponent {n}/{q} violates the conductor congruence"
                )));
            }
            // Holomorphy: 4 n t / q >= l^2 / 4 * ... in true exponents 4 (n/q)(t) - (l/2)^2 >= 0
            let norm = Rat64::new(4 * n * recipe.index_x2, 2 * q) - Rat64::new(l * l, 4);
            if norm < Rat64::from_integer(0) {
                return Err(Error::LiftPrecondition(format!(
                    "negative hyperbolic norm {norm} at (n, l) = ({n}, {l})"
                )));
            }
            coeffs.insert((n, l), c.clone());
        }
        Ok(LiftInput {
            id: recipe.id.into(),
            k,
            t_x2: recipe.index_x2,
            level: recipe.level,
            q,
            chi: recipe.character.clone(),
            mu: 1,
            coeffs,
        })
    }

    pub fn coeff(&self, n: i64, l: i64) -> BigRational {
        self.coeffs.get(&(n, l)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn c00(&self) -> BigRational {
        self.coeff(0, 0)
    }

    /// chi(sigma_a) as a sign; the lift only converges to rational tables when
    /// these twists are real.
    fn sigma_twist(&self, a: i64) -> Result<BigRational> {
        let sigma = sigma_a(a, self.level * self.q)?;
        let phase = character_value(&self.chi, &sigma)?;
        phase_sign(&phase)
    }
}

fn phase_sign(phase: &Phase) -> Result<BigRational> {
    if phase.is_one() {
        Ok(big_rat(1))
    } else if *phase == Phase::minus_one() {
        Ok(big_rat(-1))
    } else {
        Err(Error::NonRationalCoefficient(format!("character twist {phase}")))
    }
}

/// Siegel modular form presented by its Fourier coefficient table.
#[derive(Debug, Clone)]
pub struct SiegelForm {
    pub id: String,
    /// Polarization parameter of the paramodular group the table transforms
    /// under (q t for lifts, t for products).
    pub t_group: i64,
    pub level: i64,
    pub plus_ext: bool,
    pub weight_x2: i64,
    pub character_tag: String,
    pub series: TriSeries,
}

impl SiegelForm {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t": self.t_group,
            "N": self.level,
            "plus": self.plus_ext,
            "weight_x2": self.weight_x2,
            "character": self.character_tag,
            "series": self.series.to_json(),
        })
    }

    /// q-r layer at a fixed omega-exponent (given in true units).
    pub fn fourier_jacobi_slice(&self, omega: Rat64) -> Result<TriSeries> {
        if omega > self.series.trunc.max_omega {
            return Err(Error::WindowTooSmall(format!(
                "omega-exponent {omega} outside window {}",
                self.series.trunc.max_omega
            )));
        }
        let m_hat = omega * Rat64::from_integer(self.series.den_omega);
        if *m_hat.denom() != 1 {
            return Err(Error::Domain(format!("omega-exponent {omega} off the grid")));
        }
        Ok(self.series.omega_layer(*m_hat.numer()))
    }
}

/// Fourier expansion of phi | T_-(m): index multiplied by m, coefficients
/// c'(n, l) = sum over a | (m, n, l), (a, N q) = 1 of a^(k-1) chi(sigma_a)
/// c(m n / a^2, l / a), on the same (n/q, l/2) grid.
pub fn hecke_tminus(input: &LiftInput, m: i64, max_n: i64) -> Result<BTreeMap<(i64, i64), BigRational>> {
    if m < 1 || gcd(m, input.q) != 1 {
        return Err(Error::LiftPrecondition(format!("m = {m} is not coprime to q = {}", input.q)));
    }
    if input.t_x2 % 2 == 1 && m % 2 == 0 {
        return Err(Error::LiftPrecondition("m must be odd for half-integral index".into()));
    }
    let mut out = BTreeMap::new();
    let l_bound = 2 + (2.0 * (max_n.max(1) as f64 * m as f64 * 2.0).sqrt()) as i64;
    for n in 0..=max_n {
        for l in -l_bound..=l_bound {
            if (l - input.t_x2).rem_euclid(2) != 0 {
                continue;
            }
            let mut c = BigRational::zero();
            for a in divisors(gcd3(m, n.max(1), l.abs().max(if n == 0 && l == 0 { m } else { 1 }))) {
                // a must divide all of m, n, l (with gcd conventions for zeros)
                if n % a != 0 && n != 0 {
                    continue;
                }
                if l % a != 0 {
                    continue;
                }
                if gcd(a, input.level * input.q) != 1 {
                    continue;
                }
                let twist = input.sigma_twist(a)?;
                let val = input.coeff(m * n / (a * a), l / a);
                if !val.is_zero() {
                    c += big_rat(a).pow((input.k - 1) as i32) * twist * val;
                }
            }
            if !c.is_zero() {
                out.insert((n, l), c);
            }
        }
    }
    Ok(out)
}

/// Window for a Siegel table: symmetric tau/omega box with a z bound derived
/// from the hyperbolic norm.
pub fn siegel_window(max_tau: Rat64, max_omega: Rat64) -> TruncationPolicy {
    let prod = (max_tau * max_omega * Rat64::from_integer(16)).ceil().to_integer();
    let l_bound = 2 + (prod.max(1) as f64).sqrt() as i64;
    TruncationPolicy::box_window(max_tau, max_omega, Rat64::from_integer(l_bound))
}

/// The arithmetic lift: coefficient at (n/q, l/2, m t) for n, m > 0 congruent
/// to mu mod q is sum over a | (n, l, m), (a, N) = 1 of a^(k-1) chi(sigma_a)
/// c(n m / a^2, l / a). When c(0, 0) != 0 (only allowed for q = 1 with a
/// primitive Dirichlet character) the Eisenstein rows are added on both the
/// tau and omega axes.
pub fn arithmetic_lift(input: &LiftInput, window: &TruncationPolicy) -> Result<SiegelForm> {
    let q = input.q;
    let t_x2 = input.t_x2;
    let c00 = input.c00();
    if !c00.is_zero() {
        if q != 1 {
            return Err(Error::LiftPrecondition(
                "nonzero constant term requires conductor one".into(),
            ));
        }
        match &input.chi {
            CharacterId::Dirichlet { .. } => {}
            _ => {
                return Err(Error::LiftPrecondition(
                    "nonzero constant term requires a Dirichlet character".into(),
                ))
            }
        }
    }
    let n_max = (window.max_tau * Rat64::from_integer(q)).floor().to_integer();
    let m_max = (window.max_omega * Rat64::from_integer(2) / Rat64::from_integer(t_x2))
        .floor()
        .to_integer();

    // Cache the sigma twists.
    let mut twists: BTreeMap<i64, BigRational> = BTreeMap::new();
    let mut twist = |a: i64| -> Result<BigRational> {
        if let Some(v) = twists.get(&a) {
            return Ok(v.clone());
        }
        let v = input.sigma_twist(a)?;
        twists.insert(a, v.clone());
        Ok(v)
    };

    let den_tau = q;
    let den_z = 2;
    let den_omega = 2;
    let mut terms: Vec<(ExponentKey, BigRational)> = Vec::new();

    for n in 1..=n_max {
        if n.rem_euclid(q) != input.mu.rem_euclid(q) {
            continue;
        }
        for m in 1..=m_max {
            if m.rem_euclid(q) != input.mu.rem_euclid(q) {
                continue;
            }
            // 4 (n/q)(m t) - (l/2)^2 >= 0 bounds l for holomorphic inputs.
            let norm_bound = Rat64::new(16 * n * m * t_x2, 2 * q);
            let l_max = isqrt_ratio(norm_bound);
            for l in -l_max..=l_max {
                if (l - t_x2).rem_euclid(2) != 0 {
                    continue;
                }
                let mut c = BigRational::zero();
                for a in divisors(gcd3(n, l.abs().max(n * m), m)) {
                    if l % a != 0 || gcd(a, input.level) != 1 {
                        continue;
                    }
                    let val = input.coeff(n * m / (a * a), l / a);
                    if !val.is_zero() {
                        c += big_rat(a).pow((input.k - 1) as i32) * twist(a)? * val;
                    }
                }
                if !c.is_zero() {
                    terms.push((ExponentKey::new(n, l, m * t_x2), c));
                }
            }
        }
    }

    if !c00.is_zero() {
        let eis = eisenstein_qexpansion(
            input.k,
            &input.chi,
            &TruncationPolicy::tau_only(Rat64::from_integer(n_max.max(m_max))),
        )?;
        // Constant term, tau rows and the mirrored omega rows.
        let const_coeff = eis.coeff_at(Rat64::from_integer(0), 0.into(), 0.into());
        terms.push((ExponentKey::new(0, 0, 0), &c00 * const_coeff));
        for x in 1..=n_max.max(m_max) {
            let e = eis.coeff_at(Rat64::from_integer(x), 0.into(), 0.into());
            if e.is_zero() {
                continue;
            }
            if x <= n_max {
                terms.push((ExponentKey::new(x, 0, 0), &c00 * &e));
            }
            if x <= m_max {
                terms.push((ExponentKey::new(0, 0, x * t_x2), &c00 * &e));
            }
        }
    }

    let series = TriSeries::from_terms(terms, den_tau, den_z, den_omega, *window);
    Ok(SiegelForm {
        id: format!("lift({})", input.id),
        t_group: q * t_x2 / 2,
        level: input.level,
        plus_ext: true,
        weight_x2: 2 * input.k,
        character_tag: format!("{}_lifted", input.chi.tag()),
        series,
    })
}

fn isqrt_ratio(r: Rat64) -> i64 {
    if r < Rat64::from_integer(0) {
        return -1;
    }
    let approx = (*r.numer() as f64 / *r.denom() as f64).sqrt() as i64 + 2;
    let mut l = approx;
    while Rat64::from_integer(l * l) > r {
        l -= 1;
    }
    l
}

/// Direct evaluation of the printed double-sum formulas.
pub fn closed_form_oracle(which: &str, window: &TruncationPolicy) -> Result<SiegelForm> {
    match which {
        "nabla2" => {
            // sum over odd n, m > 0 and odd l with 3 U^2 = 4 m n - l^2:
            // U (-4 | U l) sum_(a | (n, l, m)) a (a | 3), at q^(n/2) r^(l/2) s^(m/2).
            let n_max = (window.max_tau * Rat64::from_integer(2)).floor().to_integer();
            let m_max = (window.max_omega * Rat64::from_integer(2)).floor().to_integer();
            let mut terms = Vec::new();
            for n in (1..=n_max).step_by(2) {
                for m in (1..=m_max).step_by(2) {
                    let l_max = isqrt_ratio(Rat64::from_integer(4 * m * n));
                    for l in -l_max..=l_max {
                        if l.rem_euclid(2) != 1 {
                            continue;
                        }
                        let d = 4 * m * n - l * l;
                        if d <= 0 || d % 3 != 0 {
                            continue;
                        }
                        let u = isqrt_exact(d / 3);
                        if u <= 0 {
                            continue;
                        }
                        let kron = kronecker_minus4(u * l);
                        if kron == 0 {
                            continue;
                        }
                        let mut dsum = 0i64;
                        for a in divisors(gcd3(n, l.abs(), m)) {
                            dsum += a * legendre3(a);
                        }
                        let c = big_rat(u * kron * dsum);
                        if !num::Zero::is_zero(&c) {
                            terms.push((ExponentKey::new(n, l, m), c));
                        }
                    }
                }
            }
            let series = TriSeries::from_terms(terms, 2, 2, 2, *window);
            Ok(SiegelForm {
                id: "oracle(nabla2)".into(),
                t_group: 1,
                level: 3,
                plus_ext: true,
                weight_x2: 4,
                character_tag: "chi2_3_lifted".into(),
                series,
            })
        }
        "q1" => {
            // sum over n, m = 1 mod 4, odd l with u^2 = 2 m n - l^2, u odd >= 1:
            // (-4 | l) sigma_0((n, l, m)), at q^(n/4) r^(l/2) s^(m/2).
            let n_max = (window.max_tau * Rat64::from_integer(4)).floor().to_integer();
            let m_max = (window.max_omega * Rat64::from_integer(2)).floor().to_integer();
            let mut terms = Vec::new();
            for n in (1..=n_max).step_by(4) {
                for m in (1..=m_max).step_by(4) {
                    let l_max = isqrt_ratio(Rat64::from_integer(2 * m * n));
                    for l in -l_max..=l_max {
                        if l.rem_euclid(2) != 1 {
                            continue;
                        }
                        let d = 2 * m * n - l * l;
                        if d <= 0 {
                            continue;
                        }
                        let u = isqrt_exact(d);
                        if u <= 0 || u % 2 == 0 {
                            continue;
                        }
                        let c = big_rat(kronecker_minus4(l) * sigma(0, gcd3(n, l.abs(), m)));
                        if !num::Zero::is_zero(&c) {
                            terms.push((ExponentKey::new(n, l, m), c));
                        }
                    }
                }
            }
            let series = TriSeries::from_terms(terms, 4, 2, 2, *window);
            Ok(SiegelForm {
                id: "oracle(q1)".into(),
                t_group: 2,
                level: 2,
                plus_ext: true,
                weight_x2: 2,
                character_tag: "chi4_2_lifted".into(),
                series,
            })
        }
        _ => Err(Error::Domain(format!("no closed-form oracle for {which}"))),
    }
}

fn isqrt_exact(d: i64) -> i64 {
    if d < 0 {
        return -1;
    }
    let r = (d as f64).sqrt().round() as i64;
    for c in [r - 1, r, r + 1] {
        if c >= 0 && c * c == d {
            return c;
        }
    }
    -1
}

/// True iff the coefficient table is invariant under the paramodular swap
/// (x, l, y) -> (y / P, l, x P) with P = t_group, within the symmetric part of
/// the window.
pub fn vt_symmetry_check(form: &SiegelForm) -> bool {
    let p = Rat64::from_integer(form.t_group);
    let s = &form.series;
    for (key, c) in s.iter() {
        let (x, l, y) = s.true_exponents(key);
        let (x2, y2) = (y / p, x * p);
        // partner inside the window?
        if x2 > s.trunc.max_tau || y2 > s.trunc.max_omega {
            continue;
        }
        let partner = s.coeff_at(x2, l, y2);
        if partner != *c {
            return false;
        }
    }
    true
}

/// Every stored index of a cusp-form table has positive hyperbolic norm
/// 4 * tau_exp * omega_exp - z_exp^2 > 0.
pub fn check_cusp_support(form: &SiegelForm) -> Result<()> {
    for (key, _) in form.series.iter() {
        let (x, l, y) = form.series.true_exponents(key);
        let norm = Rat64::from_integer(4) * x * y - l * l;
        if norm <= Rat64::from_integer(0) {
            return Err(Error::Domain(format!(
                "index (q^{x}, r^{l}, s^{y}) has non-positive norm {norm}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::lift_input_recipe;

    fn lift_of(id: &str, tau: i64, omega: i64) -> SiegelForm {
        let recipe = lift_input_recipe(id).unwrap();
        let window = siegel_window(Rat64::from_integer(tau), Rat64::from_integer(omega));
        let input = LiftInput::from_recipe(&recipe, window.max_tau, window.max_omega).unwrap();
        arithmetic_lift(&input, &window).unwrap()
    }

    #[test]
    fn nabla2_leading_coefficients() {
        let f = lift_of("nabla2_in", 2, 2);
        assert_eq!(
            f.series.coeff_at(Rat64::new(1, 2), Rat64::new(1, 2), Rat64::new(1, 2)),
            big_rat(1)
        );
        assert_eq!(
            f.series.coeff_at(Rat64::new(1, 2), Rat64::new(-1, 2), Rat64::new(1, 2)),
            big_rat(-1)
        );
    }

    #[test]
    fn q1_leading_coefficients() {
        let f = lift_of("q1_in", 2, 2);
        assert_eq!(
            f.series.coeff_at(Rat64::new(1, 4), Rat64::new(1, 2), Rat64::new(1, 2)),
            big_rat(1)
        );
        assert_eq!(
            f.series.coeff_at(Rat64::new(1, 4), Rat64::new(-1, 2), Rat64::new(1, 2)),
            big_rat(-1)
        );
    }

    #[test]
    fn oracle_matches_lift_small_window() {
        let window = siegel_window(Rat64::from_integer(3), Rat64::from_integer(3));
        let lhs = lift_of("nabla2_in", 3, 3);
        let rhs = closed_form_oracle("nabla2", &window).unwrap();
        assert!(lhs.series.agrees_with(&rhs.series, &window));

        let lhs = lift_of("q1_in", 3, 3);
        let rhs = closed_form_oracle("q1", &window).unwrap();
        assert!(lhs.series.agrees_with(&rhs.series, &window));
    }

    #[test]
    fn oracle_sign_rule() {
        // c(n, -l, m) = -c(n, l, m) for the q1 table.
        let window = siegel_window(Rat64::from_integer(3), Rat64::from_integer(3));
        let f = closed_form_oracle("q1", &window).unwrap();
        for (key, c) in f.series.iter() {
            let (x, l, y) = f.series.true_exponents(key);
            let mirrored = f.series.coeff_at(x, -l, y);
            assert_eq!(mirrored, -c.clone());
        }
    }

    #[test]
    fn hecke_identity_and_index_scaling() {
        let recipe = lift_input_recipe("nabla2_in").unwrap();
        let input = LiftInput::from_recipe(&recipe, Rat64::from_integer(30), Rat64::from_integer(1)).unwrap();
        // m = 1 is the identity on coefficients.
        let t1 = hecke_tminus(&input, 1, 12).unwrap();
        for (key, c) in &t1 {
            assert_eq!(input.coeff(key.0, key.1), c.clone());
        }
        // prime m = 5 coprime to N q: coefficient at (5 n0, 5 l0) includes
        // 5^(k-1) chi(sigma_5) c(n0, l0) plus the a = 1 term c(25 n0, 5 l0).
        let t5 = hecke_tminus(&input, 5, 30).unwrap();
        let (n0, l0) = (1i64, 1i64);
        let c_n0 = input.coeff(n0, l0);
        assert!(!num::Zero::is_zero(&c_n0));
        let twist = input.sigma_twist(5).unwrap();
        let expected = big_rat(5).pow((input.k - 1) as i32) * twist * c_n0
            + input.coeff(25 * n0, 5 * l0);
        assert_eq!(t5.get(&(5 * n0, 5 * l0)).cloned().unwrap_or_else(BigRational::zero), expected);
        // preconditions
        assert!(hecke_tminus(&input, 2, 4).is_err()); // even m, half-integral index
    }

    #[test]
    fn lift_linearity() {
        // Lift(alpha phi) = alpha Lift(phi) via scaled coefficient tables.
        let recipe = lift_input_recipe("nabla3_in").unwrap();
        let window = siegel_window(Rat64::from_integer(2), Rat64::from_integer(2));
        let input = LiftInput::from_recipe(&recipe, window.max_tau, window.max_omega).unwrap();
        let mut scaled = input.clone();
        for c in scaled.coeffs.values_mut() {
            *c = c.clone() * big_rat(7);
        }
        let a = arithmetic_lift(&input, &window).unwrap();
        let b = arithmetic_lift(&scaled, &window).unwrap();
        assert!(a
            .series
            .scale_rational(&big_rat(7))
            .agrees_with(&b.series, &window));
    }

    #[test]
    fn vt_symmetry_and_cusp_support() {
        for id in ["nabla3_in", "nabla2_in", "q1_in", "delta5_in", "delta2_in", "delta1_in"] {
            let f = lift_of(id, 3, 3);
            assert!(vt_symmetry_check(&f), "V_t symmetry fails for {id}");
            check_cusp_support(&f).unwrap();
        }
        // negative control: corrupt one coefficient
        let mut f = lift_of("nabla3_in", 3, 3);
        let key = *f.series.iter().next().unwrap().0;
        let mut broken = TriSeries::zero(f.series.den_tau, f.series.den_z, f.series.den_omega, f.series.trunc);
        for (k, c) in f.series.iter() {
            let v = if *k == key { c + big_rat(1) } else { c.clone() };
            broken = broken.add(&TriSeries::from_terms(
                [(*k, v)],
                f.series.den_tau,
                f.series.den_z,
                f.series.den_omega,
                f.series.trunc,
            ));
        }
        f.series = broken;
        assert!(!vt_symmetry_check(&f));
    }

    #[test]
    fn fj_slice_of_lift_is_input() {
        let recipe = lift_input_recipe("nabla3_in").unwrap();
        let window = siegel_window(Rat64::from_integer(4), Rat64::from_integer(2));
        let input = LiftInput::from_recipe(&recipe, window.max_tau, window.max_omega).unwrap();
        let f = arithmetic_lift(&input, &window).unwrap();
        let slice = f.fourier_jacobi_slice(Rat64::new(1, 2)).unwrap();
        // slice at minimal omega-exponent equals the input expansion
        let series = recipe
            .series(&TruncationPolicy::box_window(
                Rat64::from_integer(4),
                0.into(),
                Rat64::from_integer(12),
            ))
            .unwrap();
        let cmp = TruncationPolicy::box_window(Rat64::from_integer(4), 0.into(), Rat64::from_integer(10));
        assert!(slice.agrees_with(&series, &cmp));
        assert!(f.fourier_jacobi_slice(Rat64::from_integer(100)).is_err());
    }

    #[test]
    fn eisenstein_branch_synthetic() {
        // Synthetic weight-3 input at level 3 with c(0,0) = 2: rows must appear
        // on both axes and the table must be V_t symmetric.
        let chi = CharacterId::Dirichlet { modulus: 3, values: vec![0, 1, -1] };
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0i64, 0i64), big_rat(2));
        coeffs.insert((1i64, 0i64), big_rat(5));
        let input = LiftInput {
            id: "synthetic".into(),
            k: 3,
            t_x2: 2,
            level: 3,
            q: 1,
            chi,
            mu: 1,
            coeffs,
        };
        let window = siegel_window(Rat64::from_integer(4), Rat64::from_integer(4));
        let f = arithmetic_lift(&input, &window).unwrap();
        // tau row: c(0,0) * sum_(a|n) chi(a) a^2 at n = 2: 1 + chi(2) 4 = -3; doubled by c00 = 2.
        assert_eq!(f.series.coeff_at(Rat64::from_integer(2), 0.into(), 0.into()), big_rat(-6));
        assert_eq!(f.series.coeff_at(0.into(), 0.into(), Rat64::from_integer(2)), big_rat(-6));
        assert!(vt_symmetry_check(&f));
        // constant term: 2 * (-B_(3,chi)/6); B_(3,chi) = generalized Bernoulli.
        let b3 = crate::modular::generalized_bernoulli(3, &input.chi).unwrap();
        assert_eq!(
            f.series.coeff_at(0.into(), 0.into(), 0.into()),
            big_rat(2) * (-b3 / big_rat(6))
        );
    }

    #[test]
    fn rejects_eisenstein_with_conductor() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0i64, 0i64), big_rat(1));
        let input = LiftInput {
            id: "bad".into(),
            k: 2,
            t_x2: 2,
            level: 2,
            q: 2,
            chi: CharacterId::Chi2Level2,
            mu: 1,
            coeffs,
        };
        let window = siegel_window(Rat64::from_integer(2), Rat64::from_integer(2));
        assert!(arithmetic_lift(&input, &window).is_err());
    }
}
