//! Seeded Monte Carlo generation of singlet measurement runs.
//!
//! Every trial draws the conditioning outcome first (`p = 1/2` each) and then
//! each dependent outcome from its conditional probability, one uniform per
//! outcome, in a fixed order. Output is a pure function of the inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lists::{DataList, Outcome};
use crate::quantum::{prob_opposite, AngleConfig3, AngleConfig4};
use crate::rng::{Seed, Stream};

/// Label attached to gedanken output: outcomes on one side are drawn
/// independently given the shared outcome on the other.
pub const GEDANKEN_CONSTRUCTION: &str = "conditionally-independent-given-shared-outcome";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub theta_a: f64,
    pub theta_b: f64,
    pub n: usize,
    pub seed: Seed,
}

impl RunSpec {
    pub fn new(theta_a: f64, theta_b: f64, n: usize, seed: impl Into<Seed>) -> Self {
        RunSpec {
            theta_a,
            theta_b,
            n,
            seed: seed.into(),
        }
    }

    fn validate(&self) -> Result<()> {
        validate_n(self.n)?;
        for (name, value) in [("theta_a", self.theta_a), ("theta_b", self.theta_b)] {
            if !value.is_finite() {
                return Err(Error::NonFiniteAngle { name, value });
            }
        }
        Ok(())
    }
}

fn validate_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroTrials)
    } else {
        Ok(())
    }
}

/// One experimental run: `n` jointly measured `(A, B)` pairs at fixed settings.
///
/// `seed` is `None` for ingested data that was not produced here.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedRun {
    pub theta_a: f64,
    pub theta_b: f64,
    pub seed: Option<Seed>,
    pub a: DataList,
    pub b: DataList,
}

impl PairedRun {
    pub fn from_lists(
        theta_a: f64,
        theta_b: f64,
        seed: Option<Seed>,
        a: DataList,
        b: DataList,
    ) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        for (name, value) in [("theta_a", theta_a), ("theta_b", theta_b)] {
            if !value.is_finite() {
                return Err(Error::NonFiniteAngle { name, value });
            }
        }
        Ok(PairedRun {
            theta_a,
            theta_b,
            seed,
            a,
            b,
        })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `p(X = -1 | Y = +1)` and `p(X = -1 | Y = -1)` for a fixed angle difference.
#[derive(Debug, Clone, Copy)]
struct Conditional {
    minus_given_plus: f64,
    minus_given_minus: f64,
}

impl Conditional {
    fn new(delta: f64) -> Self {
        let opposite = prob_opposite(delta);
        Conditional {
            minus_given_plus: opposite,
            minus_given_minus: 1.0 - opposite,
        }
    }

    #[inline]
    fn draw(&self, given: Outcome, stream: &mut Stream) -> Outcome {
        let p_minus = match given {
            Outcome::Plus => self.minus_given_plus,
            Outcome::Minus => self.minus_given_minus,
        };
        if stream.uniform() < p_minus {
            Outcome::Minus
        } else {
            Outcome::Plus
        }
    }
}

#[inline]
fn draw_fair(stream: &mut Stream) -> Outcome {
    if stream.uniform() < 0.5 {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

fn into_list(items: Vec<Outcome>) -> DataList {
    DataList::new(items).expect("n >= 1 checked before sampling")
}

/// Samples `n` `(A, B)` pairs: `B` fair, then `A | B`.
pub fn sample_pair_run(spec: &RunSpec) -> Result<PairedRun> {
    spec.validate()?;
    let cond = Conditional::new(spec.theta_a - spec.theta_b);
    let mut stream = spec.seed.stream();
    let mut a = Vec::with_capacity(spec.n);
    let mut b = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let bi = draw_fair(&mut stream);
        a.push(cond.draw(bi, &mut stream));
        b.push(bi);
    }
    Ok(PairedRun {
        theta_a: spec.theta_a,
        theta_b: spec.theta_b,
        seed: Some(spec.seed),
        a: into_list(a),
        b: into_list(b),
    })
}

/// Three aligned lists generated per trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Gedanken3 {
    pub a: DataList,
    pub ap: DataList,
    pub b: DataList,
}

/// Four aligned lists generated per trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Gedanken4 {
    pub a: DataList,
    pub b: DataList,
    pub ap: DataList,
    pub bp: DataList,
}

/// Per trial: `B` fair, then `A | B` and `A' | B` independently.
pub fn sample_gedanken3(cfg: &AngleConfig3, n: usize, seed: Seed) -> Result<Gedanken3> {
    validate_n(n)?;
    AngleConfig3::new(cfg.theta_a, cfg.theta_ap, cfg.theta_b)?;
    let a_given_b = Conditional::new(cfg.theta_a - cfg.theta_b);
    let ap_given_b = Conditional::new(cfg.theta_ap - cfg.theta_b);
    let mut stream = seed.stream();
    let (mut a, mut ap, mut b) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for _ in 0..n {
        let bi = draw_fair(&mut stream);
        a.push(a_given_b.draw(bi, &mut stream));
        ap.push(ap_given_b.draw(bi, &mut stream));
        b.push(bi);
    }
    Ok(Gedanken3 {
        a: into_list(a),
        ap: into_list(ap),
        b: into_list(b),
    })
}

/// Per trial: `(A, B)` from the joint density (as `B` then `A | B`), then
/// `A' | B` and `B' | A` independently.
pub fn sample_gedanken4(cfg: &AngleConfig4, n: usize, seed: Seed) -> Result<Gedanken4> {
    validate_n(n)?;
    AngleConfig4::new(cfg.theta_a, cfg.theta_ap, cfg.theta_b, cfg.theta_bp)?;
    let a_given_b = Conditional::new(cfg.theta_a - cfg.theta_b);
    let ap_given_b = Conditional::new(cfg.theta_ap - cfg.theta_b);
    let bp_given_a = Conditional::new(cfg.theta_bp - cfg.theta_a);
    let mut stream = seed.stream();
    let mut lists: [Vec<Outcome>; 4] = Default::default();
    for list in lists.iter_mut() {
        list.reserve_exact(n);
    }
    for _ in 0..n {
        let bi = draw_fair(&mut stream);
        let ai = a_given_b.draw(bi, &mut stream);
        let api = ap_given_b.draw(bi, &mut stream);
        let bpi = bp_given_a.draw(ai, &mut stream);
        lists[0].push(ai);
        lists[1].push(bi);
        lists[2].push(api);
        lists[3].push(bpi);
    }
    let [a, b, ap, bp] = lists;
    Ok(Gedanken4 {
        a: into_list(a),
        b: into_list(b),
        ap: into_list(ap),
        bp: into_list(bp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lists::{chsh4_sides, correlation};
    use crate::quantum::{corr_aa_matched, corr_apbp_matched};
    use num_traits::ToPrimitive;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

    fn corr(x: &DataList, y: &DataList) -> f64 {
        correlation(x, y).unwrap().to_f64().unwrap()
    }

    #[test]
    fn equal_angles_anticorrelate_exactly() {
        let run = sample_pair_run(&RunSpec::new(0.8, 0.8, 1000, 5)).unwrap();
        assert!(run.a.iter().zip(run.b.iter()).all(|(a, b)| *a == b.flip()));
        assert_eq!(corr(&run.a, &run.b), -1.0);
    }

    #[test]
    fn opposite_angles_correlate_exactly() {
        let run = sample_pair_run(&RunSpec::new(PI, 0.0, 1000, 6)).unwrap();
        assert_eq!(corr(&run.a, &run.b), 1.0);
    }

    #[test]
    fn pair_run_converges_at_sixty_degrees() {
        let n = 100_000;
        let run = sample_pair_run(&RunSpec::new(FRAC_PI_3, 0.0, n, 7)).unwrap();
        let tol = 4.0 / (n as f64).sqrt();
        assert!((corr(&run.a, &run.b) + FRAC_PI_3.cos()).abs() < tol);
    }

    #[test]
    fn zero_trials_rejected() {
        assert_eq!(
            sample_pair_run(&RunSpec::new(0.0, 0.0, 0, 1)).unwrap_err(),
            Error::ZeroTrials
        );
        let c3 = AngleConfig3::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            sample_gedanken3(&c3, 0, Seed(1)).unwrap_err(),
            Error::ZeroTrials
        );
        let c4 = AngleConfig4::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            sample_gedanken4(&c4, 0, Seed(1)).unwrap_err(),
            Error::ZeroTrials
        );
    }

    #[test]
    fn same_seed_same_lists() {
        let spec = RunSpec::new(0.3, 1.1, 500, 99);
        assert_eq!(
            sample_pair_run(&spec).unwrap(),
            sample_pair_run(&spec).unwrap()
        );
        let other = RunSpec::new(0.3, 1.1, 500, 100);
        assert_ne!(
            sample_pair_run(&spec).unwrap(),
            sample_pair_run(&other).unwrap()
        );
    }

    #[test]
    fn gedanken3_deterministic_settings() {
        let equal = AngleConfig3::new(0.2, 0.2, 0.2).unwrap();
        let g = sample_gedanken3(&equal, 300, Seed(3)).unwrap();
        assert_eq!(g.a, g.b.negate());
        assert_eq!(g.ap, g.b.negate());
        assert_eq!(corr(&g.a, &g.ap), 1.0);

        let opposite = AngleConfig3::new(0.0, PI, 0.0).unwrap();
        let g = sample_gedanken3(&opposite, 300, Seed(3)).unwrap();
        assert_eq!(corr(&g.a, &g.ap), -1.0);
    }

    #[test]
    fn gedanken3_converges() {
        let n = 10_000;
        let cfg = AngleConfig3::new(0.4, 2.0, 0.9).unwrap();
        let g = sample_gedanken3(&cfg, n, Seed(11)).unwrap();
        assert!((corr(&g.a, &g.ap) - corr_aa_matched(&cfg)).abs() < 0.05);
    }

    #[test]
    fn gedanken4_all_equal_is_deterministic() {
        let cfg = AngleConfig4::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let g = sample_gedanken4(&cfg, 200, Seed(4)).unwrap();
        assert_eq!(corr(&g.ap, &g.bp), -1.0);
    }

    #[test]
    fn gedanken4_chsh_set_converges() {
        let n = 100_000;
        let cfg = AngleConfig4::new(0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4).unwrap();
        let g = sample_gedanken4(&cfg, n, Seed(12)).unwrap();
        let target = -SQRT_2 / 4.0;
        assert!((corr_apbp_matched(&cfg) - target).abs() < 1e-12);
        assert!((corr(&g.ap, &g.bp) - target).abs() < 0.013);
        assert!(chsh4_sides(&g.a, &g.b, &g.ap, &g.bp).unwrap().holds);
    }

    #[test]
    fn from_lists_checks_lengths() {
        let a = DataList::from_values([1, -1]).unwrap();
        let b = DataList::from_values([1]).unwrap();
        assert!(matches!(
            PairedRun::from_lists(0.0, 0.0, None, a, b),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
    }
}
