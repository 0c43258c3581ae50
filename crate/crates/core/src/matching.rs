//! Reordering independent runs so a shared variable's sequence coincides.
//!
//! The reference run fixes the order. For each reference position the next
//! unused candidate pair whose shared value is equal is taken, so within each
//! value class the candidate's pairs keep their experimental order. When a
//! class runs out, the remaining reference positions of that class are
//! dropped from every output list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lists::{DataList, Outcome};
use crate::quantum::{AngleConfig3, AngleConfig4};
use crate::sampler::PairedRun;

/// Bookkeeping for one alignment stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    /// Length of the reference sequence.
    pub requested: usize,
    pub matched: usize,
    pub dropped_reference: usize,
    pub dropped_candidate: usize,
    /// Candidate index used at each aligned position.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedTriple {
    pub a: DataList,
    pub b: DataList,
    pub ap: DataList,
    pub report: MatchReport,
    pub angles: AngleConfig3,
    /// Reference-run positions that survived.
    pub kept: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedQuad {
    pub a: DataList,
    pub b: DataList,
    pub ap: DataList,
    pub bp: DataList,
    /// Stage 1 aligns `(A', B)` on `B`; stage 2 aligns `(A, B')` on `A`.
    pub reports: [MatchReport; 2],
    pub angles: AngleConfig4,
    /// Reference-run positions that survived both stages.
    pub kept: Vec<usize>,
}

struct Alignment {
    /// Positions in the reference sequence that found a partner.
    kept: Vec<usize>,
    /// Candidate index paired with each kept position.
    permutation: Vec<usize>,
}

fn align_by_class(reference: &[Outcome], candidate: &[Outcome]) -> Alignment {
    let mut queues: [Vec<usize>; 2] = Default::default();
    for (idx, value) in candidate.iter().enumerate() {
        queues[value.class_index()].push(idx);
    }
    let mut cursor = [0usize; 2];
    let mut kept = Vec::with_capacity(reference.len().min(candidate.len()));
    let mut permutation = Vec::with_capacity(kept.capacity());
    for (pos, value) in reference.iter().enumerate() {
        let class = value.class_index();
        if let Some(&idx) = queues[class].get(cursor[class]) {
            cursor[class] += 1;
            kept.push(pos);
            permutation.push(idx);
        }
    }
    Alignment { kept, permutation }
}

fn report(alignment: &Alignment, reference_len: usize, candidate_len: usize) -> MatchReport {
    let matched = alignment.kept.len();
    MatchReport {
        requested: reference_len,
        matched,
        dropped_reference: reference_len - matched,
        dropped_candidate: candidate_len - matched,
        permutation: alignment.permutation.clone(),
    }
}

fn require_same_setting(name: &'static str, reference: f64, candidate: f64) -> Result<()> {
    if reference == candidate {
        Ok(())
    } else {
        Err(Error::SettingMismatch {
            name,
            reference,
            candidate,
        })
    }
}

fn pick(list: &DataList, indices: &[usize]) -> Result<DataList> {
    list.select(indices).map_err(|_| Error::EmptyOverlap)
}

/// Aligns the `(A', B)` run to the `(A, B)` run on their shared `B` values.
pub fn match_three(run_ab: &PairedRun, run_apb: &PairedRun) -> Result<MatchedTriple> {
    require_same_setting("theta_b", run_ab.theta_b, run_apb.theta_b)?;
    let alignment = align_by_class(run_ab.b.as_slice(), run_apb.b.as_slice());
    if alignment.kept.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    Ok(MatchedTriple {
        a: pick(&run_ab.a, &alignment.kept)?,
        b: pick(&run_ab.b, &alignment.kept)?,
        ap: pick(&run_apb.a, &alignment.permutation)?,
        report: report(&alignment, run_ab.len(), run_apb.len()),
        angles: AngleConfig3 {
            theta_a: run_ab.theta_a,
            theta_ap: run_apb.theta_a,
            theta_b: run_ab.theta_b,
        },
        kept: alignment.kept,
    })
}

/// Two-stage alignment producing four lists.
///
/// `run_abp` holds `(A, B')` pairs in its `(a, b)` fields and must share
/// `θ_A` with `run_ab`.
pub fn match_four(
    run_ab: &PairedRun,
    run_apb: &PairedRun,
    run_abp: &PairedRun,
) -> Result<MatchedQuad> {
    require_same_setting("theta_b", run_ab.theta_b, run_apb.theta_b)?;
    require_same_setting("theta_a", run_ab.theta_a, run_abp.theta_a)?;

    let stage1 = align_by_class(run_ab.b.as_slice(), run_apb.b.as_slice());
    if stage1.kept.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    let report1 = report(&stage1, run_ab.len(), run_apb.len());

    let survivors: Vec<Outcome> = stage1
        .kept
        .iter()
        .map(|&i| run_ab.a.as_slice()[i])
        .collect();
    let stage2 = align_by_class(&survivors, run_abp.a.as_slice());
    if stage2.kept.is_empty() {
        return Err(Error::EmptyOverlap);
    }
    let report2 = report(&stage2, survivors.len(), run_abp.len());

    let kept: Vec<usize> = stage2.kept.iter().map(|&j| stage1.kept[j]).collect();
    let ap_source: Vec<usize> = stage2.kept.iter().map(|&j| stage1.permutation[j]).collect();

    Ok(MatchedQuad {
        a: pick(&run_ab.a, &kept)?,
        b: pick(&run_ab.b, &kept)?,
        ap: pick(&run_apb.a, &ap_source)?,
        bp: pick(&run_abp.b, &stage2.permutation)?,
        reports: [report1, report2],
        angles: AngleConfig4 {
            theta_a: run_ab.theta_a,
            theta_ap: run_apb.theta_a,
            theta_b: run_ab.theta_b,
            theta_bp: run_abp.theta_b,
        },
        kept,
    })
}

/// Average of the `B = +1` and `B = -1` conditional means of `a·a'`,
/// weighted 1/2 each.
pub fn conditional_corr_estimate(a: &DataList, ap: &DataList, b: &DataList) -> Result<f64> {
    for other in [ap, b] {
        if other.len() != a.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: other.len(),
            });
        }
    }
    let mut sums = [0i64; 2];
    let mut counts = [0usize; 2];
    for ((x, y), z) in a.iter().zip(ap.iter()).zip(b.iter()) {
        let class = z.class_index();
        sums[class] += x.value() * y.value();
        counts[class] += 1;
    }
    for b_value in Outcome::BOTH {
        if counts[b_value.class_index()] == 0 {
            return Err(Error::EmptyClass(b_value));
        }
    }
    let mean = |c: usize| sums[c] as f64 / counts[c] as f64;
    Ok(0.5 * mean(0) + 0.5 * mean(1))
}
