//! Diophantine classification of the candidate (t, N; k) triplets for modular
//! forms vanishing exactly on the diagonal, via the weight identity obtained
//! from multiplicative symmetrization.

use crate::arith::{prime_divisors, Rat64};

/// A solution (t, N, 2k, m) of the weight identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub t: i64,
    pub n: i64,
    pub k_x2: i64,
    pub m: i64,
}

impl Candidate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"t": self.t, "N": self.n, "k_x2": self.k_x2, "m": self.m})
    }
}

/// Left-hand side of the weight identity:
/// (k N prod_(p | N, p not| t) (p^2+1)/(p(p+1))) * t^2 prod_(p | t) (p^2+1)/p^2.
pub fn weight_identity_lhs(t: i64, n: i64, k_x2: i64) -> Rat64 {
    let k = Rat64::new(k_x2, 2);
    let mut lhs = k * Rat64::from_integer(n);
    for p in prime_divisors(n) {
        if t % p != 0 {
            lhs *= Rat64::new(p * p + 1, p * (p + 1));
        }
    }
    lhs *= Rat64::from_integer(t * t);
    for p in prime_divisors(t) {
        lhs *= Rat64::new(p * p + 1, p * p);
    }
    lhs
}

fn delta(t: i64) -> u32 {
    if t > 1 {
        1
    } else {
        0
    }
}

/// All (t, N, k) with 2k a positive integer solving LHS = 2^delta(t) * 5 m,
/// for t, N up to the given bounds.
pub fn enumerate_dd_candidates(t_max: i64, n_max: i64, m: i64) -> Vec<Candidate> {
    assert!(t_max >= 1 && n_max >= 1 && m >= 1);
    let mut out = Vec::new();
    for t in 1..=t_max {
        for n in 1..=n_max {
            // The identity is linear in k; solve for k_x2 and keep integers.
            let unit = weight_identity_lhs(t, n, 2); // value at k = 1
            let target = Rat64::from_integer((1 << delta(t)) * 5 * m);
            let k_x2 = target / unit * Rat64::from_integer(2);
            if *k_x2.denom() == 1 && *k_x2.numer() > 0 {
                out.push(Candidate { t, n, k_x2: *k_x2.numer(), m });
            }
        }
    }
    out.sort();
    out
}
