//! Named constructors for the forms used throughout: the weak weight-0 Jacobi
//! forms built from xi quotients and the eta-theta blocks that feed the
//! arithmetic lift.

use num::rational::BigRational;

use crate::arith::{big_rat, Rat64};
use crate::error::{Error, Result};
use crate::modular::{eta_product_series, CharacterId, EtaProduct};
use crate::series::{TriSeries, TruncationPolicy};
use crate::theta::{theta_quotient_scaled, theta_series, WeightZeroForm, XiProduct, XiSymbol};

/// Weight-0 weak Jacobi forms given as scalar multiples of xi products.
pub fn weight_zero_form(id: &str) -> Result<WeightZeroForm> {
    let xi = |level, a, b| XiSymbol::new(level, a, b);
    match id {
        // 4 (xi^(2)_(1,0))^2, level 2, index 1
        "phi2" => Ok(WeightZeroForm::new(
            "phi2",
            2,
            vec![XiProduct::new(big_rat(4), vec![xi(2, 1, 0)?, xi(2, 1, 0)?])],
        )),
        // 3 xi^(6)_(3,1) xi^(6)_(3,5), level 3, index 1
        "phi3" => Ok(WeightZeroForm::new(
            "phi3",
            3,
            vec![XiProduct::new(big_rat(3), vec![xi(6, 3, 1)?, xi(6, 3, 5)?])],
        )),
        // 2 xi^(4)_(2,1) xi^(4)_(2,3), level 4, index 1
        "phi4" => Ok(WeightZeroForm::new(
            "phi4",
            4,
            vec![XiProduct::new(big_rat(2), vec![xi(4, 2, 1)?, xi(4, 2, 3)?])],
        )),
        // 2 xi^(2)_(1,0)(tau, 2z), level 2, index 2
        "psi" => Ok(WeightZeroForm::new(
            "psi",
            2,
            vec![XiProduct::new(big_rat(2), vec![XiSymbol::with_scale(2, 1, 0, 2)?])],
        )),
        // trace of phi2 to level 1, index 1
        "phi01" => {
            let f = weight_zero_form("phi2")?.trace_to(1)?;
            Ok(WeightZeroForm::new("phi01", 1, f.terms))
        }
        // trace of psi to level 1, index 2
        "phi02" => {
            let f = weight_zero_form("psi")?.trace_to(1)?;
            Ok(WeightZeroForm::new("phi02", 1, f.terms))
        }
        _ => Err(Error::Domain(format!("unknown weight-zero form {id}"))),
    }
}

/// Recipe for an eta-theta block: prod eta(d tau)^(e_d) * theta(tau, z)^p *
/// (theta(c tau, c z)/theta(tau, z))^q with full lift metadata.
#[derive(Debug, Clone)]
pub struct EtaThetaRecipe {
    pub id: &'static str,
    pub eta: Vec<(i64, i64)>,
    pub theta_pow: i64,
    pub theta_quot: Option<(i64, i64)>,
    pub weight_x2: i64,
    pub index_x2: i64,
    pub level: i64,
    pub q_chi: i64,
    pub character: CharacterId,
    /// Power of the binary Heisenberg character (= index_x2 mod 2).
    pub vh_pow: i64,
    /// True if nonzero coefficients satisfy 4 n t - l^2 > 0 at infinity.
    pub cusp_at_infinity: bool,
}

pub fn lift_input_recipe(id: &str) -> Result<EtaThetaRecipe> {
    let r = match id {
        "delta5_in" => EtaThetaRecipe {
            id: "delta5_in",
            eta: vec![(1, 9)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 10,
            index_x2: 1,
            level: 1,
            q_chi: 2,
            character: CharacterId::EtaPower(12),
            vh_pow: 1,
            cusp_at_infinity: true,
        },
        "delta2_in" => EtaThetaRecipe {
            id: "delta2_in",
            eta: vec![(1, 3)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 4,
            index_x2: 1,
            level: 1,
            q_chi: 4,
            character: CharacterId::EtaPower(6),
            vh_pow: 1,
            cusp_at_infinity: true,
        },
        "delta1_in" => EtaThetaRecipe {
            id: "delta1_in",
            eta: vec![(1, 1)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 2,
            index_x2: 1,
            level: 1,
            q_chi: 6,
            character: CharacterId::EtaPower(4),
            vh_pow: 1,
            cusp_at_infinity: true,
        },
        "nabla3_in" => EtaThetaRecipe {
            id: "nabla3_in",
            eta: vec![(1, 1), (2, 4)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 6,
            index_x2: 1,
            level: 2,
            q_chi: 2,
            character: CharacterId::Chi2Level2,
            vh_pow: 1,
            cusp_at_infinity: true,
        },
        "nabla2_in" => EtaThetaRecipe {
            id: "nabla2_in",
            eta: vec![(3, 3)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 4,
            index_x2: 1,
            level: 3,
            q_chi: 2,
            character: CharacterId::Chi2Level3,
            vh_pow: 1,
            cusp_at_infinity: true,
        },
        "q1_in" => EtaThetaRecipe {
            id: "q1_in",
            eta: vec![(2, 2), (1, -1)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 2,
            index_x2: 1,
            level: 2,
            q_chi: 4,
            character: CharacterId::Chi4Level2,
            vh_pow: 1,
            cusp_at_infinity: false,
        },
        // h_(3/2): weight 3/2, not liftable itself
        "h32" => EtaThetaRecipe {
            id: "h32",
            eta: vec![(2, 1), (4, 2), (1, -1)],
            theta_pow: 1,
            theta_quot: None,
            weight_x2: 3,
            index_x2: 1,
            level: 4,
            q_chi: 4,
            character: CharacterId::Chi2Level4, // placeholder tag; form is not lifted
            vh_pow: 1,
            cusp_at_infinity: false,
        },
        // h_(3/2)^2, the F_3 input
        "f3_in" => EtaThetaRecipe {
            id: "f3_in",
            eta: vec![(2, 2), (4, 4), (1, -2)],
            theta_pow: 2,
            theta_quot: None,
            weight_x2: 6,
            index_x2: 2,
            level: 4,
            q_chi: 1,
            character: CharacterId::Chi2Level4,
            vh_pow: 0,
            cusp_at_infinity: false,
        },
        "nabla3_sq_in" => EtaThetaRecipe {
            id: "nabla3_sq_in",
            eta: vec![(1, 2), (2, 8)],
            theta_pow: 2,
            theta_quot: None,
            weight_x2: 12,
            index_x2: 2,
            level: 2,
            q_chi: 1,
            character: CharacterId::trivial(),
            vh_pow: 0,
            cusp_at_infinity: true,
        },
        "nabla2_sq_in" => EtaThetaRecipe {
            id: "nabla2_sq_in",
            eta: vec![(3, 6)],
            theta_pow: 2,
            theta_quot: None,
            weight_x2: 8,
            index_x2: 2,
            level: 3,
            q_chi: 1,
            character: CharacterId::trivial(),
            vh_pow: 0,
            cusp_at_infinity: true,
        },
        "q1_sq_in" => EtaThetaRecipe {
            id: "q1_sq_in",
            eta: vec![(2, 4), (1, -2)],
            theta_pow: 2,
            theta_quot: None,
            weight_x2: 4,
            index_x2: 2,
            level: 2,
            q_chi: 2,
            character: CharacterId::Chi2Level2,
            vh_pow: 0,
            cusp_at_infinity: false,
        },
        "q1_4th_in" => EtaThetaRecipe {
            id: "q1_4th_in",
            eta: vec![(2, 8), (1, -4)],
            theta_pow: 4,
            theta_quot: None,
            weight_x2: 8,
            index_x2: 4,
            level: 2,
            q_chi: 1,
            character: CharacterId::trivial(),
            vh_pow: 0,
            cusp_at_infinity: false,
        },
        // eta(2)^5/eta * theta(2tau, 2z)/theta(tau, z)
        "phi2_half" => EtaThetaRecipe {
            id: "phi2_half",
            eta: vec![(2, 5), (1, -1)],
            theta_pow: 0,
            theta_quot: Some((2, 1)),
            weight_x2: 4,
            index_x2: 1,
            level: 2,
            q_chi: 2,
            character: CharacterId::Chi2B,
            vh_pow: 1,
            cusp_at_infinity: true,
        },
        "phi2_half_sq" => EtaThetaRecipe {
            id: "phi2_half_sq",
            eta: vec![(2, 10), (1, -2)],
            theta_pow: 0,
            theta_quot: Some((2, 2)),
            weight_x2: 8,
            index_x2: 2,
            level: 2,
            q_chi: 1,
            character: CharacterId::trivial(),
            vh_pow: 0,
            cusp_at_infinity: true,
        },
        // eta(3 tau)^6 theta(3 tau, 3 z)/theta(tau, z)
        "phi31" => EtaThetaRecipe {
            id: "phi31",
            eta: vec![(3, 6)],
            theta_pow: 0,
            theta_quot: Some((3, 1)),
            weight_x2: 6,
            index_x2: 2,
            level: 3,
            q_chi: 1,
            character: CharacterId::Dirichlet { modulus: 3, values: vec![0, 1, -1] },
            vh_pow: 0,
            cusp_at_infinity: true,
        },
        // eta(2 tau) eta(tau) theta(2 tau, 2 z)/theta(tau, z)
        "phi1_half" => EtaThetaRecipe {
            id: "phi1_half",
            eta: vec![(2, 1), (1, 1)],
            theta_pow: 0,
            theta_quot: Some((2, 1)),
            weight_x2: 2,
            index_x2: 1,
            level: 2,
            q_chi: 4,
            character: CharacterId::Chi4Q1,
            vh_pow: 1,
            cusp_at_infinity: false,
        },
        _ => return Err(Error::Domain(format!("unknown lift input {id}"))),
    };
    Ok(r)
}

impl EtaThetaRecipe {
    /// Expansion at infinity as an exact q-r series.
    pub fn series(&self, trunc: &TruncationPolicy) -> Result<TriSeries> {
        let mut out = eta_product_series(&EtaProduct::new(self.eta.clone()), trunc)?;
        if self.theta_pow > 0 {
            let th = theta_series(&TruncationPolicy::box_window(
                trunc.max_tau + Rat64::from_integer(1),
                trunc.max_omega,
                trunc.max_abs_z + Rat64::from_integer(2),
            ));
            out = out.mul(&th.pow_i64(self.theta_pow)?)?;
        }
        if let Some((c, p)) = self.theta_quot {
            let tq = theta_quotient_scaled(
                c,
                &TruncationPolicy::box_window(
                    trunc.max_tau + Rat64::from_integer(1),
                    trunc.max_omega,
                    trunc.max_abs_z + Rat64::from_integer(2 * c),
                ),
            )?;
            out = out.mul(&tq.pow_i64(p)?)?;
        }
        Ok(out.truncate_to(*trunc))
    }

    pub fn scalar(&self) -> BigRational {
        big_rat(1)
    }
}

pub fn all_weight_zero_ids() -> Vec<&'static str> {
    vec!["phi2", "phi3", "phi4", "psi", "phi01", "phi02"]
}

pub fn all_lift_input_ids() -> Vec<&'static str> {
    vec![
        "delta5_in",
        "delta2_in",
        "delta1_in",
        "nabla3_in",
        "nabla2_in",
        "q1_in",
        "h32",
        "f3_in",
        "nabla3_sq_in",
        "nabla2_sq_in",
        "q1_sq_in",
        "q1_4th_in",
        "phi2_half",
        "phi2_half_sq",
        "phi31",
        "phi1_half",
    ]
}

/// Registry metadata for one form id, for machine consumption.
pub fn registry_entry_json(id: &str) -> Result<serde_json::Value> {
    if all_weight_zero_ids().contains(&id) {
        let f = weight_zero_form(id)?;
        return Ok(serde_json::json!({
            "id": f.id,
            "kind": "weight_zero",
            "weight_x2": 0,
            "index_x2": f.index_x2,
            "level": f.level,
            "terms": f.terms.len(),
        }));
    }
    let r = lift_input_recipe(id)?;
    Ok(serde_json::json!({
        "id": r.id,
        "kind": "lift_input",
        "weight_x2": r.weight_x2,
        "index_x2": r.index_x2,
        "level": r.level,
        "q_chi": r.q_chi,
        "character": r.character.tag(),
        "heisenberg_pow": r.vh_pow,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big_rat_frac;
    use crate::modular::{character_value, Mat2};
    use crate::cyclotomic::Phase;

    fn win(t: i64) -> TruncationPolicy {
        TruncationPolicy::box_window(
            Rat64::from_integer(t),
            Rat64::from_integer(0),
            Rat64::from_integer(16),
        )
    }

    #[test]
    fn chi_of_t_matches_conductor() {
        for id in all_lift_input_ids() {
            let r = lift_input_recipe(id).unwrap();
            if r.id == "h32" {
                continue; // multiplier system of a half-integral-weight block
            }
            let v = character_value(&r.character, &Mat2::t()).unwrap();
            assert_eq!(
                v,
                Phase::new(1, r.q_chi),
                "chi(T) mismatch for {id}: got {v}, expected order {}",
                r.q_chi
            );
        }
    }

    #[test]
    fn q1_input_leading_row() {
        // (eta(2 tau)^2/eta) theta = sum over odd j, x of q^((j^2 + x^2)/8) ...
        let r = lift_input_recipe("q1_in").unwrap();
        let s = r.series(&win(2)).unwrap();
        assert_eq!(s.coeff_at(Rat64::new(2, 8), Rat64::new(1, 2), 0.into()), big_rat(1));
        assert_eq!(s.coeff_at(Rat64::new(2, 8), Rat64::new(-1, 2), 0.into()), big_rat(-1));
    }

    #[test]
    fn phi2_half_identity_with_theta_constant() {
        // phi_(1,1/2) = (1/2) theta^(2)_(1,0)(tau, z) theta^(2)_(1,0)(tau, 0)
        let r = lift_input_recipe("phi1_half").unwrap();
        let s = r.series(&win(3)).unwrap();
        let trunc = win(3);
        let tz = crate::theta::cyc_to_rational(&crate::theta::theta_char_series_cyc(2, 1, 0, 1, &trunc)).unwrap();
        let t0 = crate::theta::cyc_to_rational(&crate::theta::theta_char_series_cyc(2, 1, 0, 0, &trunc)).unwrap();
        let rhs = tz.mul(&t0).unwrap().scale_rational(&big_rat_frac(1, 2));
        assert!(s.agrees_with(&rhs, &win(2)));
    }

    #[test]
    fn registry_lists() {
        for id in all_weight_zero_ids() {
            registry_entry_json(id).unwrap();
        }
        for id in all_lift_input_ids() {
            registry_entry_json(id).unwrap();
        }
        assert!(registry_entry_json("nope").is_err());
    }
}
