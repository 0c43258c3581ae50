//! Angle-grid experiments.
//!
//! Every cell owns an RNG stream derived from `(seed, row, col)`, so a scan
//! produces the same table under any thread count or cell ordering.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lists::{bell3_sides, chsh4_sides, correlation, Rational};
use crate::matching::{conditional_corr_estimate, match_four, match_three};
use crate::quantum::{
    bell3_lhs_theory, chsh4_lhs_theory, corr_aa_matched, AngleConfig3, AngleConfig4, Mode,
    BELL3_BOUND, CHSH4_BOUND,
};
use crate::rng::Seed;
use crate::sampler::{sample_gedanken3, sample_pair_run, RunSpec};

/// Slack allowed above a bound before a theoretical value counts as a violation.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

/// Seed used by the default conditional-estimator scan.
pub const DEFAULT_SEED: u64 = 20_240_611;

/// Evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Self {
        AxisRange { start, stop, steps }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidGrid(format!("{name}: bounds must be finite")));
        }
        if self.steps < 2 {
            return Err(Error::InvalidGrid(format!(
                "{name}: need at least 2 steps, got {}",
                self.steps
            )));
        }
        if self.start >= self.stop {
            return Err(Error::InvalidGrid(format!(
                "{name}: start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn value(&self, k: usize) -> f64 {
        let t = k as f64 / (self.steps - 1) as f64;
        self.start + (self.stop - self.start) * t
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(move |k| self.value(k))
    }
}

/// How each surface cell obtains its `(A, A', B)` lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fig2Source {
    /// One gedanken trial generates all three outcomes.
    Gedanken,
    /// Two independent pair runs, matched on `B`.
    MatchedRuns,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Fixed `θ_B`.
    pub beta: f64,
    pub alpha: AxisRange,
    pub alpha_prime: AxisRange,
    pub n_per_cell: usize,
    pub seed: Seed,
    pub source: Fig2Source,
}

impl GridSpec {
    /// 17×17 over `[0, π]²`, `β = 0`, 10⁴ trials per cell.
    pub fn fig2_default() -> Self {
        GridSpec {
            beta: 0.0,
            alpha: AxisRange::new(0.0, PI, 17),
            alpha_prime: AxisRange::new(0.0, PI, 17),
            n_per_cell: 10_000,
            seed: Seed(DEFAULT_SEED),
            source: Fig2Source::Gedanken,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta.is_finite() {
            return Err(Error::InvalidGrid("beta must be finite".into()));
        }
        self.alpha.validate("alpha")?;
        self.alpha_prime.validate("alpha_prime")?;
        if self.n_per_cell == 0 {
            return Err(Error::InvalidGrid("n per cell must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig2Row {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
    pub n: usize,
    pub empirical: f64,
    pub theoretical: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSummary {
    pub max_abs_error: f64,
    pub rms_error: f64,
}

impl ErrorSummary {
    pub fn from_rows(rows: &[Fig2Row]) -> Self {
        let max_abs_error = rows.iter().map(|r| r.abs_error).fold(0.0, f64::max);
        let sq: f64 = rows.iter().map(|r| r.abs_error * r.abs_error).sum();
        let rms_error = if rows.is_empty() {
            0.0
        } else {
            (sq / rows.len() as f64).sqrt()
        };
        ErrorSummary {
            max_abs_error,
            rms_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Table {
    pub grid: GridSpec,
    pub rows: Vec<Fig2Row>,
    pub summary: ErrorSummary,
}

fn collect_cells<T, F>(rows: usize, cols: usize, cell: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..rows * cols)
        .into_par_iter()
        .map(|idx| {
            let (row, col) = (idx / cols, idx % cols);
            cell(row, col).map_err(|e| Error::Cell {
                row,
                col,
                source: Box::new(e),
            })
        })
        .collect();
    // first failure in row-major order, independent of scheduling
    results.into_iter().collect()
}

fn fig2_cell(grid: &GridSpec, row: usize, col: usize) -> Result<Fig2Row> {
    let cfg = AngleConfig3::new(
        grid.alpha.value(row),
        grid.alpha_prime.value(col),
        grid.beta,
    )?;
    let cell_seed = grid.seed.derive(&[row as u64, col as u64]);
    let (n, empirical) = match grid.source {
        Fig2Source::Gedanken => {
            let g = sample_gedanken3(&cfg, grid.n_per_cell, cell_seed)?;
            (
                grid.n_per_cell,
                conditional_corr_estimate(&g.a, &g.ap, &g.b)?,
            )
        }
        Fig2Source::MatchedRuns => {
            let run_ab = sample_pair_run(&RunSpec::new(
                cfg.theta_a,
                cfg.theta_b,
                grid.n_per_cell,
                cell_seed.derive(&[0]),
            ))?;
            let run_apb = sample_pair_run(&RunSpec::new(
                cfg.theta_ap,
                cfg.theta_b,
                grid.n_per_cell,
                cell_seed.derive(&[1]),
            ))?;
            let m = match_three(&run_ab, &run_apb)?;
            (
                m.report.matched,
                conditional_corr_estimate(&m.a, &m.ap, &m.b)?,
            )
        }
    };
    let theoretical = corr_aa_matched(&cfg);
    Ok(Fig2Row {
        alpha: cfg.theta_a,
        alpha_prime: cfg.theta_ap,
        beta: cfg.theta_b,
        n,
        empirical,
        theoretical,
        abs_error: (empirical - theoretical).abs(),
    })
}

/// Conditional-correlation estimate of `⟨AA'⟩` against the matched closed
/// form over an `(α, α')` grid.
pub fn fig2_scan(grid: &GridSpec) -> Result<Fig2Table> {
    grid.validate()?;
    let rows = collect_cells(grid.alpha.steps, grid.alpha_prime.steps, |r, c| {
        fig2_cell(grid, r, c)
    })?;
    let summary = ErrorSummary::from_rows(&rows);
    Ok(Fig2Table {
        grid: *grid,
        rows,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Bell3,
    Chsh4,
}

impl Inequality {
    pub fn bound(self) -> f64 {
        match self {
            Inequality::Bell3 => BELL3_BOUND,
            Inequality::Chsh4 => CHSH4_BOUND,
        }
    }
}

/// Grid over the free angles of one inequality; one angle stays fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InequalityGrid {
    Bell3 {
        theta_b: f64,
        alpha: AxisRange,
        alpha_prime: AxisRange,
    },
    Chsh4 {
        theta_a: f64,
        theta_ap: AxisRange,
        theta_b: AxisRange,
        theta_bp: AxisRange,
    },
}

impl InequalityGrid {
    /// `θ_B = 0`, `α, α'` over `[−π, π]` in steps of π/60.
    pub fn bell3_default() -> Self {
        let axis = AxisRange::new(-PI, PI, 121);
        InequalityGrid::Bell3 {
            theta_b: 0.0,
            alpha: axis,
            alpha_prime: axis,
        }
    }

    /// `θ_A = 0`, the other three angles over `[−π, π]` in steps of π/60.
    pub fn chsh4_default() -> Self {
        let axis = AxisRange::new(-PI, PI, 121);
        InequalityGrid::Chsh4 {
            theta_a: 0.0,
            theta_ap: axis,
            theta_b: axis,
            theta_bp: axis,
        }
    }

    pub fn inequality(&self) -> Inequality {
        match self {
            InequalityGrid::Bell3 { .. } => Inequality::Bell3,
            InequalityGrid::Chsh4 { .. } => Inequality::Chsh4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InequalityGrid::Bell3 {
                theta_b,
                alpha,
                alpha_prime,
            } => {
                if !theta_b.is_finite() {
                    return Err(Error::InvalidGrid("theta_b must be finite".into()));
                }
                alpha.validate("alpha")?;
                alpha_prime.validate("alpha_prime")
            }
            InequalityGrid::Chsh4 {
                theta_a,
                theta_ap,
                theta_b,
                theta_bp,
            } => {
                if !theta_a.is_finite() {
                    return Err(Error::InvalidGrid("theta_a must be finite".into()));
                }
                theta_ap.validate("theta_ap")?;
                theta_b.validate("theta_b")?;
                theta_bp.validate("theta_bp")
            }
        }
    }

    pub fn cell_count(&self) -> usize {
        match self {
            InequalityGrid::Bell3 {
                alpha, alpha_prime, ..
            } => alpha.steps * alpha_prime.steps,
            InequalityGrid::Chsh4 {
                theta_ap,
                theta_b,
                theta_bp,
                ..
            } => theta_ap.steps * theta_b.steps * theta_bp.steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellAngles {
    Three(AngleConfig3),
    Four(AngleConfig4),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityRow {
    pub angles: CellAngles,
    pub mode: Mode,
    pub lhs: f64,
    pub bound: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhsSummary {
    pub max_lhs: f64,
    pub argmax: Option<CellAngles>,
    pub violations: usize,
}

impl LhsSummary {
    pub fn from_rows(rows: &[InequalityRow]) -> Self {
        let mut summary = LhsSummary {
            max_lhs: f64::NEG_INFINITY,
            argmax: None,
            violations: 0,
        };
        for row in rows {
            if row.lhs > summary.max_lhs {
                summary.max_lhs = row.lhs;
                summary.argmax = Some(row.angles);
            }
            if row.violated {
                summary.violations += 1;
            }
        }
        summary
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityTable {
    pub grid: InequalityGrid,
    pub mode: Mode,
    pub rows: Vec<InequalityRow>,
    pub summary: LhsSummary,
}

fn theory_row(angles: CellAngles, mode: Mode) -> InequalityRow {
    let (lhs, bound) = match &angles {
        CellAngles::Three(cfg) => (bell3_lhs_theory(cfg, mode), BELL3_BOUND),
        CellAngles::Four(cfg) => (chsh4_lhs_theory(cfg, mode), CHSH4_BOUND),
    };
    InequalityRow {
        angles,
        mode,
        lhs,
        bound,
        violated: lhs > bound + VIOLATION_TOLERANCE,
    }
}

/// Evaluates the theoretical left-hand side of one inequality on every cell.
pub fn inequality_scan(grid: &InequalityGrid, mode: Mode) -> Result<InequalityTable> {
    grid.validate()?;
    let rows: Vec<InequalityRow> = match *grid {
        InequalityGrid::Bell3 {
            theta_b,
            alpha,
            alpha_prime,
        } => (0..alpha.steps * alpha_prime.steps)
            .into_par_iter()
            .map(|idx| {
                let cfg = AngleConfig3 {
                    theta_a: alpha.value(idx / alpha_prime.steps),
                    theta_ap: alpha_prime.value(idx % alpha_prime.steps),
                    theta_b,
                };
                theory_row(CellAngles::Three(cfg), mode)
            })
            .collect(),
        InequalityGrid::Chsh4 {
            theta_a,
            theta_ap,
            theta_b,
            theta_bp,
        } => {
            let inner = theta_b.steps * theta_bp.steps;
            (0..theta_ap.steps * inner)
                .into_par_iter()
                .map(|idx| {
                    let rest = idx % inner;
                    let cfg = AngleConfig4 {
                        theta_a,
                        theta_ap: theta_ap.value(idx / inner),
                        theta_b: theta_b.value(rest / theta_bp.steps),
                        theta_bp: theta_bp.value(rest % theta_bp.steps),
                    };
                    theory_row(CellAngles::Four(cfg), mode)
                })
                .collect()
        }
    };
    let summary = LhsSummary::from_rows(&rows);
    Ok(InequalityTable {
        grid: *grid,
        mode,
        rows,
        summary,
    })
}

/// Left-hand side computed from aligned data lists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalLhs {
    pub n: usize,
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub lhs: Rational,
    pub bound: f64,
    pub holds: bool,
}

fn ser_rational<S: serde::Serializer>(
    value: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format!("{}/{}", value.numer(), value.denom()))
}

fn de_rational<'de, D: serde::Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<Rational, D::Error> {
    let raw = String::deserialize(deserializer)?;
    let (n, d) = raw
        .split_once('/')
        .ok_or_else(|| serde::de::Error::custom("expected numer/denom"))?;
    let numer = n.trim().parse::<i64>().map_err(serde::de::Error::custom)?;
    let denom = d.trim().parse::<i64>().map_err(serde::de::Error::custom)?;
    if denom == 0 {
        return Err(serde::de::Error::custom("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

impl EmpiricalLhs {
    pub fn lhs_f64(&self) -> f64 {
        self.lhs.to_f64().unwrap_or(f64::NAN)
    }
}

/// `|⟨AB⟩ − ⟨A'B⟩| + ⟨AA'⟩` on three aligned lists, exactly.
pub fn empirical_bell3(
    a: &crate::lists::DataList,
    b: &crate::lists::DataList,
    ap: &crate::lists::DataList,
) -> Result<EmpiricalLhs> {
    // the list identity with B as the shared list
    let sides = bell3_sides(b, a, ap)?;
    let lhs = sides.lhs + correlation(a, ap)?;
    Ok(EmpiricalLhs {
        n: a.len(),
        lhs,
        bound: BELL3_BOUND,
        holds: sides.holds,
    })
}

/// CHSH left-hand side on four aligned lists, exactly.
pub fn empirical_chsh4(
    a: &crate::lists::DataList,
    b: &crate::lists::DataList,
    ap: &crate::lists::DataList,
    bp: &crate::lists::DataList,
) -> Result<EmpiricalLhs> {
    let sides = chsh4_sides(a, b, ap, bp)?;
    Ok(EmpiricalLhs {
        n: a.len(),
        lhs: sides.lhs,
        bound: CHSH4_BOUND,
        holds: sides.holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub angles: CellAngles,
    pub bound: f64,
    pub matched_lhs: f64,
    pub unmatched_lhs: f64,
    pub unmatched_violates: bool,
    /// Matched lists built from independently sampled runs.
    pub empirical: EmpiricalLhs,
}

/// Matched against unmatched-stationary left-hand sides at one setting, plus
/// the left-hand side of finite matched data sampled with `n` trials per run.
pub fn violation_report(angles: CellAngles, n: usize, seed: Seed) -> Result<ViolationReport> {
    let run = |theta_a: f64, theta_b: f64, stream: u64| {
        sample_pair_run(&RunSpec::new(theta_a, theta_b, n, seed.derive(&[stream])))
    };
    let empirical = match &angles {
        CellAngles::Three(cfg) => {
            let cfg = AngleConfig3::new(cfg.theta_a, cfg.theta_ap, cfg.theta_b)?;
            let m = match_three(
                &run(cfg.theta_a, cfg.theta_b, 0)?,
                &run(cfg.theta_ap, cfg.theta_b, 1)?,
            )?;
            empirical_bell3(&m.a, &m.b, &m.ap)?
        }
        CellAngles::Four(cfg) => {
            let cfg = AngleConfig4::new(cfg.theta_a, cfg.theta_ap, cfg.theta_b, cfg.theta_bp)?;
            let q = match_four(
                &run(cfg.theta_a, cfg.theta_b, 0)?,
                &run(cfg.theta_ap, cfg.theta_b, 1)?,
                &run(cfg.theta_a, cfg.theta_bp, 2)?,
            )?;
            empirical_chsh4(&q.a, &q.b, &q.ap, &q.bp)?
        }
    };
    let matched = theory_row(angles, Mode::Matched);
    let unmatched = theory_row(angles, Mode::UnmatchedStationary);
    Ok(ViolationReport {
        angles,
        bound: matched.bound,
        matched_lhs: matched.lhs,
        unmatched_lhs: unmatched.lhs,
        unmatched_violates: unmatched.violated,
        empirical,
    })
}
