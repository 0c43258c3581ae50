//! Closed-form singlet-state probabilities and correlations.
//!
//! Angles are radians and are never wrapped; every formula here is periodic
//! in the angle differences it uses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lists::Outcome;

pub mod oracle;

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteAngle { name, value })
    }
}

/// Settings for the three-correlation experiment: `A` and `A'` on one side,
/// both paired with a shared `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleConfig3 {
    pub theta_a: f64,
    pub theta_ap: f64,
    pub theta_b: f64,
}

impl AngleConfig3 {
    pub fn new(theta_a: f64, theta_ap: f64, theta_b: f64) -> Result<Self> {
        Ok(AngleConfig3 {
            theta_a: finite("theta_a", theta_a)?,
            theta_ap: finite("theta_ap", theta_ap)?,
            theta_b: finite("theta_b", theta_b)?,
        })
    }
}

/// Settings for the four-correlation (CHSH) experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleConfig4 {
    pub theta_a: f64,
    pub theta_ap: f64,
    pub theta_b: f64,
    pub theta_bp: f64,
}

impl AngleConfig4 {
    pub fn new(theta_a: f64, theta_ap: f64, theta_b: f64, theta_bp: f64) -> Result<Self> {
        Ok(AngleConfig4 {
            theta_a: finite("theta_a", theta_a)?,
            theta_ap: finite("theta_ap", theta_ap)?,
            theta_b: finite("theta_b", theta_b)?,
            theta_bp: finite("theta_bp", theta_bp)?,
        })
    }
}

/// How the correlation that needs shared lists is assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Lists are matched on the shared variable; conditional formulas apply.
    Matched,
    /// Every correlation gets its independent-run cosine value
    /// (and `⟨AA'⟩ = 0` in the three-correlation case).
    UnmatchedStationary,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Matched => "matched",
            Mode::UnmatchedStationary => "unmatched-stationary",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `p(A = -1 | B = +1)`, i.e. `cos²(δ/2)`, written as `(1 + cos δ)/2` so the
/// deterministic settings `δ = 0, π` give exactly 1 and 0.
#[inline]
pub(crate) fn prob_opposite(delta: f64) -> f64 {
    0.5 * (1.0 + delta.cos())
}

/// Probability that `A` reads `a_out` given `B` read `b_out`, with
/// `delta = θ_A − θ_B`.
pub fn cond_prob(a_out: Outcome, b_out: Outcome, delta: f64) -> f64 {
    let opposite = prob_opposite(delta);
    if a_out == b_out {
        1.0 - opposite
    } else {
        opposite
    }
}

/// Joint probability `p(A = a_out, B = b_out)` with `p(B = ±1) = 1/2`.
pub fn joint_prob(a_out: Outcome, b_out: Outcome, delta: f64) -> f64 {
    0.5 * cond_prob(a_out, b_out, delta)
}

/// Singlet correlation of two detectors whose settings differ by `delta`.
pub fn corr_pair(delta: f64) -> f64 {
    -delta.cos()
}

/// `⟨AA'⟩` for lists matched on `B`: `cos(θ_A − θ_B)·cos(θ_A' − θ_B)`.
pub fn corr_aa_matched(cfg: &AngleConfig3) -> f64 {
    (cfg.theta_a - cfg.theta_b).cos() * (cfg.theta_ap - cfg.theta_b).cos()
}

/// `⟨A'B'⟩` for lists matched on `B` and on `A`:
/// `−cos(θ_A' − θ_B)·cos(θ_B' − θ_A)·cos(θ_A − θ_B)`.
pub fn corr_apbp_matched(cfg: &AngleConfig4) -> f64 {
    -(cfg.theta_ap - cfg.theta_b).cos()
        * (cfg.theta_bp - cfg.theta_a).cos()
        * (cfg.theta_a - cfg.theta_b).cos()
}

/// `|⟨AB⟩ − ⟨A'B⟩| + ⟨AA'⟩`; bounded by 1 when matched.
pub fn bell3_lhs_theory(cfg: &AngleConfig3, mode: Mode) -> f64 {
    let ab = corr_pair(cfg.theta_a - cfg.theta_b);
    let apb = corr_pair(cfg.theta_ap - cfg.theta_b);
    let aap = match mode {
        Mode::Matched => corr_aa_matched(cfg),
        Mode::UnmatchedStationary => 0.0,
    };
    (ab - apb).abs() + aap
}

/// `|⟨AB⟩ + ⟨AB'⟩| + |⟨A'B⟩ − ⟨A'B'⟩|`; bounded by 2 when matched.
pub fn chsh4_lhs_theory(cfg: &AngleConfig4, mode: Mode) -> f64 {
    let ab = corr_pair(cfg.theta_a - cfg.theta_b);
    let abp = corr_pair(cfg.theta_a - cfg.theta_bp);
    let apb = corr_pair(cfg.theta_ap - cfg.theta_b);
    let apbp = match mode {
        Mode::Matched => corr_apbp_matched(cfg),
        Mode::UnmatchedStationary => corr_pair(cfg.theta_ap - cfg.theta_bp),
    };
    (ab + abp).abs() + (apb - apbp).abs()
}

pub const BELL3_BOUND: f64 = 1.0;
pub const CHSH4_BOUND: f64 = 2.0;
