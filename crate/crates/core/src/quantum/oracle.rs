//! Enumeration oracles for the matched correlations.
//!
//! These sum the factored densities over every ±1 assignment using only
//! `cond_prob` and `joint_prob`, independent of the closed forms they check.

use super::{cond_prob, joint_prob, AngleConfig3, AngleConfig4};
use crate::lists::Outcome;

/// `Σ A·A'·p(A|B)·p(A'|B)·p(B)` over all eight assignments.
pub fn brute_force_corr3(cfg: &AngleConfig3) -> f64 {
    let mut total = 0.0;
    for b in Outcome::BOTH {
        for a in Outcome::BOTH {
            for ap in Outcome::BOTH {
                total += (a.value() * ap.value()) as f64
                    * cond_prob(a, b, cfg.theta_a - cfg.theta_b)
                    * cond_prob(ap, b, cfg.theta_ap - cfg.theta_b)
                    * 0.5;
            }
        }
    }
    total
}

/// `Σ A'·B'·p(A'|B)·p(B'|A)·p(A,B)` over all sixteen assignments.
pub fn brute_force_corr4(cfg: &AngleConfig4) -> f64 {
    let mut total = 0.0;
    for a in Outcome::BOTH {
        for b in Outcome::BOTH {
            let p_ab = joint_prob(a, b, cfg.theta_a - cfg.theta_b);
            for ap in Outcome::BOTH {
                for bp in Outcome::BOTH {
                    total += (ap.value() * bp.value()) as f64
                        * cond_prob(ap, b, cfg.theta_ap - cfg.theta_b)
                        * cond_prob(bp, a, cfg.theta_bp - cfg.theta_a)
                        * p_ab;
                }
            }
        }
    }
    total
}
