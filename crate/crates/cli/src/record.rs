//! On-disk formats: run records, matched output and raw ±1 list files.

use std::fs;
use std::path::Path;

use bellmatch::{
    AngleConfig3, AngleConfig4, DataList, MatchReport, MatchedQuad, MatchedTriple, Outcome,
    PairedRun, Seed,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// One run of `(a, b)` pairs. Outcomes are stored as the integers `1` and `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecordFile {
    pub format_version: u32,
    pub theta_a: f64,
    pub theta_b: f64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pairs: Vec<(Outcome, Outcome)>,
}

impl RunRecordFile {
    pub fn from_run(run: &PairedRun) -> Self {
        RunRecordFile {
            format_version: FORMAT_VERSION,
            theta_a: run.theta_a,
            theta_b: run.theta_b,
            n: run.len(),
            seed: run.seed.map(|s| s.0),
            pairs: run.a.iter().copied().zip(run.b.iter().copied()).collect(),
        }
    }

    /// Checks the record's own invariants and converts it to a run.
    pub fn into_run(self) -> Result<PairedRun, String> {
        if self.format_version != FORMAT_VERSION {
            return Err(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            ));
        }
        if self.pairs.len() != self.n {
            return Err(format!(
                "n is {} but {} pairs are present",
                self.n,
                self.pairs.len()
            ));
        }
        let (a, b): (Vec<Outcome>, Vec<Outcome>) = self.pairs.into_iter().unzip();
        let a = DataList::new(a).map_err(|e| e.to_string())?;
        let b = DataList::new(b).map_err(|e| e.to_string())?;
        PairedRun::from_lists(self.theta_a, self.theta_b, self.seed.map(Seed), a, b)
            .map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("run record serializes");
        s.push('\n');
        s
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_run(path: &Path) -> Result<PairedRun, CliError> {
    let text = read_text(path)?;
    let record: RunRecordFile =
        serde_json::from_str(&text).map_err(|e| CliError::format(path, e))?;
    record.into_run().map_err(|e| CliError::format(path, e))
}

pub fn write_run(path: &Path, run: &PairedRun) -> Result<(), CliError> {
    write_text(path, &RunRecordFile::from_run(run).to_json())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedTripleFile {
    pub format_version: u32,
    pub kind: String,
    pub angles: AngleConfig3,
    pub report: MatchReport,
    pub a: DataList,
    pub b: DataList,
    pub ap: DataList,
}

impl From<&MatchedTriple> for MatchedTripleFile {
    fn from(m: &MatchedTriple) -> Self {
        MatchedTripleFile {
            format_version: FORMAT_VERSION,
            kind: "matched-triple".into(),
            angles: m.angles,
            report: m.report.clone(),
            a: m.a.clone(),
            b: m.b.clone(),
            ap: m.ap.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedQuadFile {
    pub format_version: u32,
    pub kind: String,
    pub angles: AngleConfig4,
    pub reports: [MatchReport; 2],
    pub a: DataList,
    pub b: DataList,
    pub ap: DataList,
    pub bp: DataList,
}

impl From<&MatchedQuad> for MatchedQuadFile {
    fn from(q: &MatchedQuad) -> Self {
        MatchedQuadFile {
            format_version: FORMAT_VERSION,
            kind: "matched-quad".into(),
            angles: q.angles,
            reports: q.reports.clone(),
            a: q.a.clone(),
            b: q.b.clone(),
            ap: q.ap.clone(),
            bp: q.bp.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

/// Parses a raw list: a JSON array of integers, or integers separated by
/// whitespace or commas. Tokens that are not integers are a format error;
/// integers other than ±1 are invalid input.
pub fn read_list(path: &Path) -> Result<DataList, CliError> {
    let text = read_text(path)?;
    let trimmed = text.trim();
    let values: Vec<i64> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| CliError::format(path, e))?
    } else {
        trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim_start_matches('+')
                    .parse::<i64>()
                    .map_err(|e| CliError::format(path, format!("{t:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    DataList::from_values(values).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}
