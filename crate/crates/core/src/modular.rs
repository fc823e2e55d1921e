//! SL2 combinatorics for Hecke congruence subgroups: cusps and widths of
//! Gamma_0(N), coset representatives, the paramodular index formula, Dedekind
//! eta expansions and the eta multiplier system, finite-order characters,
//! sigma_a twist matrices, Eisenstein series and generalized Bernoulli numbers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::arith::{
    big_rat, big_rat_frac, divisors, egcd, euler_phi, gcd, legendre3, mod_inverse, prime_divisors,
    rat64_to_big, Rat64,
};
use crate::cyclotomic::Phase;
use crate::error::{Error, Result};
use crate::series::{ExponentKey, TriSeries, TruncationPolicy};

/// 2x2 integer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// S = [[0, -1], [1, 0]]
    pub const fn s() -> Self {
        Mat2::new(0, -1, 1, 0)
    }

    /// T = [[1, 1], [0, 1]]
    pub const fn t() -> Self {
        Mat2::new(1, 1, 0, 1)
    }

    pub fn t_pow(n: i64) -> Self {
        Mat2::new(1, n, 0, 1)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<Mat2> {
        if self.det() != 1 {
            return Err(Error::NonUnimodular);
        }
        Ok(Mat2::new(self.d, -self.b, -self.c, self.a))
    }

    pub fn in_gamma0(&self, n: i64) -> bool {
        self.det() == 1 && self.c.rem_euclid(n) == 0
    }
}

/// Generator alphabet for words in SL2(Z); -I is S^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    S,
    T(i64),
}

pub fn word_matrix(word: &[Gen]) -> Mat2 {
    let mut m = Mat2::identity();
    for g in word {
        m = match g {
            Gen::S => m.mul(&Mat2::s()),
            Gen::T(k) => m.mul(&Mat2::t_pow(*k)),
        };
    }
    m
}

/// Writes a unimodular matrix as a word in S and T^k whose product equals the
/// matrix exactly (including sign), by the continued-fraction algorithm.
pub fn st_decompose(m: &Mat2) -> Result<Vec<Gen>> {
    if m.det() != 1 {
        return Err(Error::NonUnimodular);
    }
    let mut word: Vec<Gen> = Vec::new();
    let mut cur = *m;
    // Peel generators from the left: cur = T^n S * rest.
    loop {
        if cur.c == 0 {
            if cur.a == 1 {
                if cur.b != 0 {
                    word.push(Gen::T(cur.b));
                }
            } else {
                // cur = -T^{-b'}; -I = S^2
                word.push(Gen::S);
                word.push(Gen::S);
                if cur.b != 0 {
                    word.push(Gen::T(-cur.b));
                }
            }
            break;
        }
        let n = cur.a.div_euclid(cur.c);
        if n != 0 {
            word.push(Gen::T(n));
        }
        word.push(Gen::S);
        // cur <- S^{-1} T^{-n} cur ; S^{-1} = -S^3, use explicit form
        let t_inv = Mat2::t_pow(-n);
        let tmp = t_inv.mul(&cur);
        // S^{-1} = [[0,1],[-1,0]]
        cur = Mat2::new(tmp.c, tmp.d, -tmp.a, -tmp.b);
    }
    debug_assert_eq!(word_matrix(&word), *m);
    Ok(word)
}

/// A cusp f/e of Gamma_0(N) with e | N, gcd(e, f) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cusp {
    pub f: i64,
    pub e: i64,
}

impl Cusp {
    pub fn width(&self, n: i64) -> i64 {
        n / gcd(self.e * self.e, n)
    }

    pub fn complementary_divisor(&self, n: i64) -> i64 {
        n / self.e
    }

    /// A matrix in SL2(Z) sending infinity to f/e.
    pub fn matrix(&self) -> Mat2 {
        // Columns (f, e) and (x, y) with f*y - e*x = 1.
        let (g, y, xneg) = egcd(self.f, self.e);
        assert_eq!(g, 1);
        let x = -xneg;
        let m = Mat2::new(self.f, x, self.e, y);
        debug_assert_eq!(m.det(), 1);
        m
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.f, self.e)
    }
}

/// The cusp set of Gamma_0(N).
#[derive(Debug, Clone)]
pub struct CuspSet {
    pub level: i64,
    pub cusps: Vec<Cusp>,
}

impl CuspSet {
    /// The class of the cusp at infinity (e = N).
    pub fn infinity(&self) -> Cusp {
        *self.cusps.iter().find(|c| c.e == self.level).unwrap()
    }

    pub fn width_sum(&self) -> i64 {
        self.cusps.iter().map(|c| c.width(self.level)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .cusps
            .iter()
            .map(|c| {
                serde_json::json!({
                    "f": c.f,
                    "e": c.e,
                    "width": c.width(self.level),
                    "N_e": c.complementary_divisor(self.level),
                })
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Cusps f/e, e | N, f mod gcd(e, N/e), each class represented by the smallest
/// nonnegative f coprime to e.
pub fn cusps_gamma0(n: i64) -> CuspSet {
    assert!(n >= 1);
    let mut cusps = Vec::new();
    for e in divisors(n) {
        let g = gcd(e, n / e);
        for class in 0..g {
            // classes are residues mod g = (e, N/e) coprime to g
            if gcd(class, g) != 1 {
                continue;
            }
            // smallest f >= 0 with f = class (mod g) and gcd(f, e) = 1
            let mut f = class;
            let mut found = false;
            for _ in 0..=(e * g + 1) {
                if gcd(f, e) == 1 {
                    found = true;
                    break;
                }
                f += g;
            }
            assert!(found, "no coprime representative in cusp class");
            cusps.push(Cusp { f, e });
        }
    }
    cusps.sort();
    CuspSet { level: n, cusps }
}

pub fn index_gamma0(n: i64) -> i64 {
    let mut idx = n;
    for p in prime_divisors(n) {
        idx = idx / p * (p + 1);
    }
    idx
}

/// Coset representatives of Gamma_0(src) \ Gamma_0(tgt) for tgt | src, using
/// the decomposition of SL2(Z) into M_{f/e} T^a classes. Gamma_0(1) = SL2(Z).
pub fn coset_reps(src: i64, tgt: i64) -> Result<Vec<Mat2>> {
    if src % tgt != 0 {
        return Err(Error::Domain(format!("{tgt} does not divide {src}")));
    }
    let set = cusps_gamma0(src);
    let mut reps = Vec::new();
    for cusp in &set.cusps {
        let m = cusp.matrix();
        for a in 0..cusp.width(src) {
            let r = m.mul(&Mat2::t_pow(a));
            if r.c.rem_euclid(tgt) == 0 {
                reps.push(r);
            }
        }
    }
    let expected = index_gamma0(src) / index_gamma0(tgt);
    if reps.len() as i64 != expected {
        return Err(Error::Domain(format!(
            "coset enumeration produced {} classes, expected {}",
            reps.len(),
            expected
        )));
    }
    Ok(reps)
}

/// Index of the integral paramodular subgroup of polarization (1, t) at level N
/// inside Sp_2(Z); always an integer.
pub fn index_paramodular(t: i64, n: i64) -> BigInt {
    let tn = t * n;
    let mut value = BigRational::from(BigInt::from(tn).pow(3));
    for p in prime_divisors(tn) {
        value *= big_rat(1) + big_rat_frac(1, p);
        value *= big_rat(1) + big_rat_frac(1, p * p);
    }
    for p in prime_divisors(gcd(t, n).max(1)) {
        value *= big_rat(1) + big_rat_frac(1, p);
    }
    assert!(value.denom().is_one(), "paramodular index must be integral");
    value.numer().clone()
}

/// Finite eta product prod eta(d tau)^e.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaProduct {
    pub factors: Vec<(i64, i64)>,
}

impl EtaProduct {
    pub fn new(factors: Vec<(i64, i64)>) -> Self {
        assert!(factors.iter().all(|&(d, _)| d >= 1));
        EtaProduct { factors }
    }

    pub fn weight_x2(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Order of vanishing at the cusp a/c (in the q = e^(2 pi i tau) scale):
    /// each eta(d tau)^e contributes e * gcd(c, d)^2 / (24 d). The cusp at
    /// infinity is c = 0, where gcd(0, d) = d.
    pub fn order_at_cusp(&self, _a: i64, c: i64) -> BigRational {
        let mut total = BigRational::zero();
        for &(d, e) in &self.factors {
            let g = gcd(c, d);
            total += big_rat_frac(e * g * g, 24 * d);
        }
        total
    }
}

/// Euler product prod_(n>=1) (1 - q^n) via the pentagonal number theorem,
/// as a pure q-series.
pub fn euler_product_series(max_tau: Rat64) -> TriSeries {
    let bound = max_tau.floor().to_integer();
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 > bound && e2 > bound && k > 0 {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if e1 <= bound {
            terms.push((ExponentKey::new(e1, 0, 0), big_rat(sign)));
        }
        if k > 0 && e2 <= bound {
            terms.push((ExponentKey::new(e2, 0, 0), big_rat(sign)));
        }
        if k == 0 {
            k = 1;
        } else {
            k += 1;
        }
    }
    TriSeries::from_terms(terms, 1, 1, 1, TruncationPolicy::tau_only(max_tau))
}

/// q-expansion of eta(d tau) = q^(d/24) prod (1 - q^(d n)); den_tau = 24.
pub fn eta_qexpansion(d: i64, trunc: &TruncationPolicy) -> TriSeries {
    let unit = eta_unit_series(d, trunc.max_tau);
    let shift = TriSeries::monomial(big_rat(1), d, 0, 0, 24, 1, 1, *trunc);
    shift.mul(&unit).expect("window excludes eta leading term")
}

/// The unit part prod (1 - q^(d n)) with window compensated for the q^(d/24) shift.
fn eta_unit_series(d: i64, max_tau: Rat64) -> TriSeries {
    let unit_window = max_tau - Rat64::new(d, 24) + Rat64::from_integer(1);
    euler_product_series(unit_window.max(Rat64::from_integer(0))).rescale(d, 1, 1)
}

/// Eta quotient prod eta(d tau)^(e_d) as monomial * unit-series powers.
pub fn eta_product_series(p: &EtaProduct, trunc: &TruncationPolicy) -> Result<TriSeries> {
    // Total leading exponent sum e_d * d / 24.
    let mut lead = Rat64::from_integer(0);
    for &(d, e) in &p.factors {
        lead += Rat64::new(d * e, 24);
    }
    let mut unit = TriSeries::one(TruncationPolicy::tau_only(trunc.max_tau - lead + Rat64::from_integer(1)));
    for &(d, e) in &p.factors {
        let u = eta_unit_series(d, unit.trunc.max_tau);
        let powered = u.pow_rational(Rat64::from_integer(e))?;
        unit = unit.mul(&powered)?;
    }
    let den = 24;
    let lead_scaled = lead * Rat64::from_integer(den);
    assert!(*lead_scaled.denom() == 1);
    let shift = TriSeries::monomial(big_rat(1), *lead_scaled.numer(), 0, 0, den, 1, 1, *trunc);
    let out = shift.mul(&unit)?;
    Ok(out.truncate_to(*trunc))
}

/// Dedekind sum s(d, c) for c > 0.
pub fn dedekind_sum(d: i64, c: i64) -> BigRational {
    assert!(c > 0);
    let saw = |num: i64, den: i64| -> BigRational {
        if num.rem_euclid(den) == 0 {
            BigRational::zero()
        } else {
            big_rat_frac(num.rem_euclid(den), den) - big_rat_frac(1, 2)
        }
    };
    let mut s = BigRational::zero();
    for k in 1..c {
        s += saw(k, c) * saw(k * d, c);
    }
    s
}

/// Exponent x modulo 24 with v_eta(M) = e^(2 pi i x / 24), via the classical
/// closed formula with Dedekind sums for c > 0; c = 0 and c < 0 reduce to it
/// with the principal branch of the square root.
pub fn eta_multiplier(m: &Mat2) -> Result<i64> {
    if m.det() != 1 {
        return Err(Error::NonUnimodular);
    }
    if m.c == 0 {
        // (1 b; 0 1) -> b; (-1 b; 0 -1) = -T^{-b} -> 18 - b
        return Ok(if m.a == 1 {
            m.b.rem_euclid(24)
        } else {
            (18 - (-m.b)).rem_euclid(24)
        });
    }
    if m.c < 0 {
        // v(M) = i * v(-M) for c < 0
        let x = eta_multiplier(&m.neg())?;
        return Ok((x + 6).rem_euclid(24));
    }
    // x = (a + d)/(24 c) - s(d, c)/2 - 1/8, as a fraction with denominator 24.
    let x = big_rat_frac(m.a + m.d, 24 * m.c) - dedekind_sum(m.d, m.c) / big_rat(2) - big_rat_frac(1, 8);
    let scaled = x * big_rat(24);
    if !scaled.denom().is_one() {
        return Err(Error::Domain(format!("eta multiplier exponent {} is not in Z/24", scaled)));
    }
    let num: BigInt = scaled.numer().clone();
    let r: BigInt = ((num % 24i64) + 24i64) % 24i64;
    Ok(i64::try_from(r).unwrap())
}

/// Character and multiplier-system tags used by the lifting machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterId {
    /// (-1)^(b - c) on Gamma_0(2), order 2.
    Chi2Level2,
    /// i^(d (b - c)) on Gamma_0(2), order 4.
    Chi4Level2,
    /// Two-branch character of order 2 on Gamma_0(3).
    Chi2Level3,
    /// (-1)^((d-1)/2) on Gamma_0(4), order 2.
    Chi2Level4,
    /// i^(b d + d - 1) on Gamma_0(2), order 4.
    Chi4Q1,
    /// (-1)^b on Gamma_0(2), order 2.
    Chi2B,
    /// v_eta^n on SL2(Z).
    EtaPower(i64),
    /// Real Dirichlet character mod N acting through the lower-right entry.
    Dirichlet { modulus: i64, values: Vec<i64> },
}

impl CharacterId {
    /// Level of the domain group Gamma_0(N).
    pub fn level(&self) -> i64 {
        match self {
            CharacterId::Chi2Level2 | CharacterId::Chi4Level2 | CharacterId::Chi4Q1 | CharacterId::Chi2B => 2,
            CharacterId::Chi2Level3 => 3,
            CharacterId::Chi2Level4 => 4,
            CharacterId::EtaPower(_) => 1,
            CharacterId::Dirichlet { modulus, .. } => *modulus,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            CharacterId::Chi2Level2 => "chi2_2".into(),
            CharacterId::Chi4Level2 => "chi4_2".into(),
            CharacterId::Chi2Level3 => "chi2_3".into(),
            CharacterId::Chi2Level4 => "chi2_4".into(),
            CharacterId::Chi4Q1 => "chi4_level2_t2".into(),
            CharacterId::Chi2B => "chi2_b".into(),
            CharacterId::EtaPower(n) => format!("eta_power({n})"),
            CharacterId::Dirichlet { modulus, .. } => format!("dirichlet({modulus})"),
        }
    }

    pub fn dirichlet_value(&self, a: i64) -> Result<i64> {
        match self {
            CharacterId::Dirichlet { modulus, values } => {
                Ok(values[(a.rem_euclid(*modulus)) as usize])
            }
            _ => Err(Error::Domain("not a Dirichlet character".into())),
        }
    }

    pub fn trivial() -> Self {
        CharacterId::Dirichlet { modulus: 1, values: vec![1] }
    }
}

/// Exact value of the character at a matrix of its domain group.
pub fn character_value(chi: &CharacterId, m: &Mat2) -> Result<Phase> {
    let level = chi.level();
    if !m.in_gamma0(level) {
        return Err(Error::Domain(format!(
            "matrix with c = {} is outside Gamma_0({})",
            m.c, level
        )));
    }
    let phase = match chi {
        CharacterId::Chi2Level2 => {
            let c = m.c / 2;
            Phase::new(m.b - c, 2)
        }
        CharacterId::Chi4Level2 => {
            let c = m.c / 2;
            Phase::new(m.d * (m.b - c), 4)
        }
        CharacterId::Chi2Level3 => {
            let c = m.c / 3;
            let sign = if c.rem_euclid(2) == 1 {
                // (-1)^(a + d + 1) (d | 3)
                let s = if (m.a + m.d + 1).rem_euclid(2) == 0 { 1 } else { -1 };
                s * legendre3(m.d)
            } else {
                let s = if m.b.rem_euclid(2) == 0 { 1 } else { -1 };
                s * legendre3(m.d)
            };
            if sign == 0 {
                return Err(Error::Domain("character value vanishes; d not coprime to 3".into()));
            }
            if sign == 1 {
                Phase::one()
            } else {
                Phase::minus_one()
            }
        }
        CharacterId::Chi2Level4 => Phase::new((m.d - 1) / 2, 2),
        CharacterId::Chi4Q1 => Phase::new(m.b * m.d + m.d - 1, 4),
        CharacterId::Chi2B => Phase::new(m.b, 2),
        CharacterId::EtaPower(n) => {
            let x = eta_multiplier(m)?;
            Phase::new(n * x, 24)
        }
        CharacterId::Dirichlet { .. } => {
            let v = chi.dirichlet_value(m.d)?;
            match v {
                1 => Phase::one(),
                -1 => Phase::minus_one(),
                _ => return Err(Error::Domain("Dirichlet value vanishes on group element".into())),
            }
        }
    };
    Ok(phase)
}

/// A unimodular matrix congruent to diag(a^-1, a) modulo m.
pub fn sigma_a(a: i64, modulus: i64) -> Result<Mat2> {
    if modulus == 1 {
        return Ok(Mat2::identity());
    }
    let a_red = a.rem_euclid(modulus);
    let a_inv = mod_inverse(a_red, modulus).ok_or(Error::NotCoprime(a, modulus))?;
    // sigma = (x, m; d m, w) with x = a^-1 mod m, w = a + t m chosen so the
    // determinant closes up to a multiple of m^2 carried by the off entries.
    let x = if a_inv == 0 { modulus } else { a_inv };
    let w0 = a_red;
    let c_val = (x * w0 - 1) / modulus; // x w0 = 1 + c m
    debug_assert_eq!(x * w0 - 1, c_val * modulus);
    let t = (-c_val * mod_inverse(x, modulus).unwrap()).rem_euclid(modulus);
    let w = w0 + t * modulus;
    let d_val = (x * w - 1) / (modulus * modulus);
    debug_assert_eq!(x * w - 1, d_val * modulus * modulus);
    let sigma = Mat2::new(x, modulus, d_val * modulus, w);
    debug_assert_eq!(sigma.det(), 1);
    debug_assert_eq!(sigma.a.rem_euclid(modulus), a_inv.rem_euclid(modulus));
    debug_assert_eq!(sigma.d.rem_euclid(modulus), a_red);
    Ok(sigma)
}

/// Generalized Bernoulli number B_(k, chi) from the defining generating
/// function sum_(a=1..N) chi(a) t e^(a t) / (e^(N t) - 1).
pub fn generalized_bernoulli(k: i64, chi: &CharacterId) -> Result<BigRational> {
    let n = chi.level();
    let order = (k + 2) as usize;
    // Power series in t with rational coefficients, indexed 0..order.
    let mut num = vec![BigRational::zero(); order];
    for a in 1..=n {
        let v = chi.dirichlet_value(a)?;
        if v == 0 {
            continue;
        }
        // chi(a) * t * e^(a t): coefficient of t^j is chi(a) a^(j-1)/(j-1)!
        let mut fact = BigRational::one();
        for j in 1..order {
            if j > 1 {
                fact *= big_rat((j - 1) as i64);
            }
            let term = big_rat(v) * big_rat(a).pow((j - 1) as i32) / fact.clone();
            num[j] = &num[j] + &term;
        }
    }
    // denominator e^(N t) - 1 = sum_(j>=1) N^j t^j / j!
    let mut den = vec![BigRational::zero(); order];
    let mut fact = BigRational::one();
    for j in 1..order {
        fact *= big_rat(j as i64);
        den[j] = big_rat(n).pow(j as i32) / fact.clone();
    }
    // Divide num by den (den has valuation 1).
    let shifted_num = num[1..].to_vec();
    let shifted_den = den[1..].to_vec();
    let d0 = shifted_den[0].clone();
    let mut quot = vec![BigRational::zero(); order - 1];
    for i in 0..order - 1 {
        let mut acc = shifted_num[i].clone();
        for j in 0..i {
            acc -= &quot[j] * &shifted_den[i - j];
        }
        quot[i] = acc / d0.clone();
    }
    // B_(k, chi) = k! * [t^k] of the quotient series.
    let mut kfact = BigRational::one();
    for j in 1..=k {
        kfact *= big_rat(j);
    }
    Ok(quot[k as usize].clone() * kfact)
}

pub fn dirichlet_is_primitive(chi: &CharacterId) -> Result<bool> {
    let n = chi.level();
    if n == 1 {
        return Ok(true);
    }
    for d in divisors(n) {
        if d == n {
            continue;
        }
        // chi is induced mod d iff chi(a) = 1 whenever a = 1 mod d, gcd(a, N) = 1.
        let mut trivial_on_kernel = true;
        for a in 1..n {
            if gcd(a, n) == 1 && (a - 1).rem_euclid(d) == 0 && chi.dirichlet_value(a)? != 1 {
                trivial_on_kernel = false;
                break;
            }
        }
        if trivial_on_kernel {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eisenstein series E_k(tau, chi) = 2^-1 L(1-k, chi) + sum sigma-type terms,
/// for a primitive Dirichlet character with chi(-1) = (-1)^k.
pub fn eisenstein_qexpansion(k: i64, chi: &CharacterId, trunc: &TruncationPolicy) -> Result<TriSeries> {
    let n = chi.level();
    if !dirichlet_is_primitive(chi)? {
        return Err(Error::Domain("character must be primitive".into()));
    }
    let parity = chi.dirichlet_value(n - 1)?; // chi(-1)
    let expected = if k % 2 == 0 { 1 } else { -1 };
    if n > 1 && parity != expected {
        return Err(Error::ParityMismatch);
    }
    if n == 1 && k % 2 != 0 {
        return Err(Error::ParityMismatch);
    }
    let bk = generalized_bernoulli(k, chi)?;
    let constant = -bk / big_rat(2 * k); // 2^-1 L(1-k, chi)
    let bound = trunc.max_tau.floor().to_integer();
    let mut terms = vec![(ExponentKey::new(0, 0, 0), constant)];
    for m in 1..=bound {
        let mut c = BigRational::zero();
        for a in divisors(m) {
            let v = chi.dirichlet_value(a)?;
            if v != 0 {
                c += big_rat(v) * big_rat(a).pow((k - 1) as i32);
            }
        }
        terms.push((ExponentKey::new(m, 0, 0), c));
    }
    Ok(TriSeries::from_terms(terms, 1, 1, 1, *trunc))
}

/// Reidemeister-Schreier generating set for Gamma_0(N) from the standard coset
/// representatives and the generators S, T of SL2(Z). Includes -I.
pub fn gamma0_generators(n: i64) -> Result<Vec<Mat2>> {
    let reps = coset_reps(n, 1)?;
    let find_rep = |m: &Mat2| -> Mat2 {
        for r in &reps {
            let cand = m.mul(&r.inverse().unwrap());
            if cand.in_gamma0(n) || cand.neg().in_gamma0(n) {
                return *r;
            }
        }
        unreachable!("coset representative must exist");
    };
    let mut gens = vec![Mat2::identity().neg()];
    for r in &reps {
        for g in [Mat2::s(), Mat2::t()] {
            let rg = r.mul(&g);
            let rep = find_rep(&rg);
            let gen = rg.mul(&rep.inverse()?);
            let gen = if gen.in_gamma0(n) { gen } else { gen.neg() };
            assert!(gen.in_gamma0(n));
            if gen != Mat2::identity() && !gens.contains(&gen) {
                gens.push(gen);
            }
        }
    }
    Ok(gens)
}

/// Euler phi, re-exported for cusp counting.
pub fn cusp_count(n: i64) -> i64 {
    divisors(n).into_iter().map(|e| euler_phi(gcd(e, n / e).max(1))).sum()
}

pub fn rat64(n: i64, d: i64) -> Rat64 {
    Rat64::new(n, d)
}

pub fn rat64_int(n: i64) -> Rat64 {
    Rat64::from_integer(n)
}

pub fn big_from_rat64(r: Rat64) -> BigRational {
    rat64_to_big(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_tables() {
        let c2 = cusps_gamma0(2);
        let mut widths: Vec<i64> = c2.cusps.iter().map(|c| c.width(2)).collect();
        widths.sort();
        assert_eq!(widths, vec![1, 2]);

        let c4 = cusps_gamma0(4);
        assert_eq!(c4.cusps.len(), 3);
        let mut widths: Vec<i64> = c4.cusps.iter().map(|c| c.width(4)).collect();
        widths.sort();
        assert_eq!(widths, vec![1, 1, 4]);

        let c1 = cusps_gamma0(1);
        assert_eq!(c1.cusps.len(), 1);
        assert_eq!(c1.cusps[0].width(1), 1);
    }

    #[test]
    fn width_sum_is_index() {
        for n in 1..=40 {
            assert_eq!(cusps_gamma0(n).width_sum(), index_gamma0(n), "level {n}");
            assert_eq!(cusps_gamma0(n).cusps.len() as i64, cusp_count(n));
        }
    }

    #[test]
    fn coset_counts() {
        assert_eq!(coset_reps(2, 1).unwrap().len(), 3);
        assert_eq!(coset_reps(4, 2).unwrap().len(), 2);
        assert_eq!(coset_reps(1, 1).unwrap().len(), 1);
        // membership
        for r in coset_reps(4, 2).unwrap() {
            assert!(r.in_gamma0(2));
        }
    }

    #[test]
    fn paramodular_index_values() {
        assert_eq!(index_paramodular(1, 1), BigInt::from(1));
        assert_eq!(index_paramodular(1, 2), BigInt::from(15));
        assert_eq!(index_paramodular(2, 2), BigInt::from(180));
    }

    #[test]
    fn eta_multiplier_values() {
        assert_eq!(eta_multiplier(&Mat2::t()).unwrap(), 1);
        assert_eq!(eta_multiplier(&Mat2::s()).unwrap(), 21);
        // v(S)^2 = v(-I)
        assert_eq!(eta_multiplier(&Mat2::identity().neg()).unwrap(), 18);
        // v(S T) = e^(-2 pi i/12)
        assert_eq!(eta_multiplier(&Mat2::s().mul(&Mat2::t())).unwrap(), 22);
    }

    #[test]
    fn sigma_a_structure() {
        let s = sigma_a(5, 12).unwrap();
        assert_eq!(s.det(), 1);
        assert_eq!(s.a.rem_euclid(12), mod_inverse(5, 12).unwrap());
        assert_eq!(s.d.rem_euclid(12), 5);
        assert_eq!(s.b.rem_euclid(12), 0);
        assert_eq!(s.c.rem_euclid(12), 0);
        assert_eq!(sigma_a(1, 8).unwrap().det(), 1);
        assert!(sigma_a(3, 9).is_err());
        assert_eq!(sigma_a(7, 1).unwrap(), Mat2::identity());
    }

    #[test]
    fn character_table_values() {
        let t = Mat2::t();
        assert_eq!(character_value(&CharacterId::Chi2Level2, &t).unwrap(), Phase::minus_one());
        assert_eq!(character_value(&CharacterId::Chi4Level2, &t).unwrap(), Phase::new(1, 4));
        assert_eq!(character_value(&CharacterId::Chi2Level3, &t).unwrap(), Phase::minus_one());
        assert_eq!(character_value(&CharacterId::Chi2Level4, &t).unwrap(), Phase::one());
        assert_eq!(character_value(&CharacterId::Chi4Q1, &t).unwrap(), Phase::new(1, 4));
        // domain check
        assert!(character_value(&CharacterId::Chi2Level2, &Mat2::s()).is_err());
    }

    #[test]
    fn st_words_reconstruct() {
        for m in [
            Mat2::s(),
            Mat2::t(),
            Mat2::new(1, -1, 2, -1),
            Mat2::new(5, 12, 12, 29),
            Mat2::new(-3, -1, 7, 2),
            Mat2::identity().neg(),
        ] {
            let w = st_decompose(&m).unwrap();
            assert_eq!(word_matrix(&w), m, "word failed for {:?}", m);
        }
    }

    #[test]
    fn eta_series_pentagonal() {
        let trunc = TruncationPolicy::tau_only(Rat64::from_integer(8));
        let e = eta_qexpansion(1, &trunc);
        // q^(1/24) (1 - q - q^2 + q^5 + q^7 - ...)
        let at = |n24: i64| e.coeff_at(Rat64::new(n24, 24), 0.into(), 0.into());
        assert_eq!(at(1), big_rat(1));
        assert_eq!(at(25), big_rat(-1));
        assert_eq!(at(49), big_rat(-1));
        assert_eq!(at(121), big_rat(1));
        assert_eq!(at(169), big_rat(1));
        assert_eq!(at(73), big_rat(0));
    }

    #[test]
    fn eta_cube_is_odd_theta_like() {
        // eta(tau)^3 = sum_(n>0) (-4|n) n q^(n^2/8)
        let trunc = TruncationPolicy::tau_only(Rat64::from_integer(7));
        let p = EtaProduct::new(vec![(1, 3)]);
        let e3 = eta_product_series(&p, &trunc).unwrap();
        for n in 1..8i64 {
            let expect = big_rat(crate::arith::kronecker_minus4(n) * n);
            let got = e3.coeff_at(Rat64::new(n * n, 8), 0.into(), 0.into());
            assert_eq!(got, expect, "n = {n}");
        }
    }

    #[test]
    fn eta_orders_at_cusps() {
        let p = EtaProduct::new(vec![(2, 2), (1, -1)]);
        assert_eq!(p.order_at_cusp(1, 0), big_rat_frac(1, 8));
        assert_eq!(p.order_at_cusp(0, 1), BigRational::zero());
        let h = EtaProduct::new(vec![(2, 1), (4, 2), (1, -1)]);
        assert_eq!(h.order_at_cusp(1, 0), big_rat_frac(3, 8));
    }

    #[test]
    fn bernoulli_and_eisenstein() {
        // chi = quadratic character mod 4: B_(k,chi) with known small values.
        let chi4 = CharacterId::Dirichlet { modulus: 4, values: vec![0, 1, 0, -1] };
        assert_eq!(generalized_bernoulli(1, &chi4).unwrap(), big_rat_frac(-1, 2));
        let trunc = TruncationPolicy::tau_only(Rat64::from_integer(6));
        let e = eisenstein_qexpansion(1, &chi4, &trunc).unwrap();
        assert_eq!(e.coeff_at(Rat64::from_integer(1), 0.into(), 0.into()), big_rat(1));
        // q^2 coefficient: 1 + chi(2) 2^0 = 1
        assert_eq!(e.coeff_at(Rat64::from_integer(2), 0.into(), 0.into()), big_rat(1));
        // q^5: divisors 1, 5, chi(5) = 1 -> 2
        assert_eq!(e.coeff_at(Rat64::from_integer(5), 0.into(), 0.into()), big_rat(2));
        // constant term = -B_(1,chi)/2 = 1/4
        assert_eq!(e.coeff_at(Rat64::from_integer(0), 0.into(), 0.into()), big_rat_frac(1, 4));
        // parity mismatch rejected
        assert!(eisenstein_qexpansion(2, &chi4, &trunc).is_err());
    }

    #[test]
    fn generators_exist() {
        for n in [1i64, 2, 3, 4, 6] {
            let gens = gamma0_generators(n).unwrap();
            assert!(gens.iter().all(|g| g.in_gamma0(n)));
            assert!(gens.len() >= 2);
        }
    }
}
