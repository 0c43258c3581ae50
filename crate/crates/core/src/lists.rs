//! Exact arithmetic on lists of ±1 outcomes.
//!
//! Correlations are integer sums divided by the list length and are returned
//! as exact rationals, so the three- and four-list inequalities can be checked
//! with no tolerance at all. For ±1 data both inequalities hold term by term:
//! `|x·y − x·z| = |y − z| = 1 − y·z`, and summing then taking the absolute
//! value can only shrink the left side.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact correlation value, `sum / N`.
pub type Rational = Ratio<i64>;

/// A single spin measurement in units of ħ/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum Outcome {
    Minus = -1,
    Plus = 1,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    #[inline]
    pub fn value(self) -> i64 {
        self as i8 as i64
    }

    #[inline]
    pub fn flip(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    #[inline]
    pub(crate) fn class_index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

impl TryFrom<i64> for Outcome {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        match value {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::InvalidOutcome(other)),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Plus => f.write_str("+1"),
            Outcome::Minus => f.write_str("-1"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i8(*self as i8)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = i64::deserialize(deserializer)?;
        Outcome::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// A non-empty ordered list of outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DataList(Vec<Outcome>);

impl DataList {
    pub fn new(items: Vec<Outcome>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(DataList(items))
    }

    /// Builds a list from raw integers, rejecting anything other than ±1.
    pub fn from_values<I>(values: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let items = values
            .into_iter()
            .map(Outcome::try_from)
            .collect::<Result<Vec<_>>>()?;
        DataList::new(items)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Outcome] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Outcome> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Outcome> {
        self.0
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().map(|o| o.value())
    }

    pub fn negate(&self) -> DataList {
        DataList(self.0.iter().map(|o| o.flip()).collect())
    }

    /// `result[i] = self[indices[i]]`.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn select(&self, indices: &[usize]) -> Result<DataList> {
        DataList::new(indices.iter().map(|&i| self.0[i]).collect())
    }
}

impl<'de> Deserialize<'de> for DataList {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<Outcome>::deserialize(deserializer)?;
        DataList::new(items).map_err(serde::de::Error::custom)
    }
}

impl<'a> IntoIterator for &'a DataList {
    type Item = &'a Outcome;
    type IntoIter = std::slice::Iter<'a, Outcome>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

fn check_lengths(lists: &[&DataList]) -> Result<usize> {
    let n = lists[0].len();
    for list in &lists[1..] {
        if list.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: list.len(),
            });
        }
    }
    if n == 0 {
        return Err(Error::EmptyList);
    }
    Ok(n)
}

/// Integer cross sum `Σ xᵢ·yᵢ`.
pub fn cross_sum(x: &DataList, y: &DataList) -> Result<i64> {
    check_lengths(&[x, y])?;
    Ok(raw_cross_sum(x, y))
}

fn raw_cross_sum(x: &DataList, y: &DataList) -> i64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a.value() * b.value())
        .sum()
}

fn ratio(sum: i64, n: usize) -> Rational {
    Ratio::new(sum, n as i64)
}

/// `(1/N)·Σ xᵢ·yᵢ`, exactly.
pub fn correlation(x: &DataList, y: &DataList) -> Result<Rational> {
    let n = check_lengths(&[x, y])?;
    Ok(ratio(raw_cross_sum(x, y), n))
}

/// Sides of the three-list inequality `|⟨ab⟩ − ⟨ab'⟩| ≤ 1 − ⟨bb'⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bell3Sides {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// Left side of the four-list CHSH inequality against its bound of 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chsh4Sides {
    pub lhs: Rational,
    pub bound: Rational,
    pub holds: bool,
}

pub fn bell3_sides(a: &DataList, b: &DataList, bp: &DataList) -> Result<Bell3Sides> {
    let n = check_lengths(&[a, b, bp])?;
    let ab = raw_cross_sum(a, b);
    let abp = raw_cross_sum(a, bp);
    let bbp = raw_cross_sum(b, bp);
    let lhs = ratio((ab - abp).abs(), n);
    let rhs = ratio(n as i64 - bbp, n);
    Ok(Bell3Sides {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

pub fn chsh4_sides(a: &DataList, b: &DataList, ap: &DataList, bp: &DataList) -> Result<Chsh4Sides> {
    let n = check_lengths(&[a, b, ap, bp])?;
    let ab = correlation_unchecked(a, b, n);
    let abp = correlation_unchecked(a, bp, n);
    let apb = correlation_unchecked(ap, b, n);
    let apbp = correlation_unchecked(ap, bp, n);
    let lhs = (ab + abp).abs() + (apb - apbp).abs();
    let bound = Rational::one() + Rational::one();
    Ok(Chsh4Sides {
        lhs,
        bound,
        holds: lhs <= bound,
    })
}

fn correlation_unchecked(x: &DataList, y: &DataList, n: usize) -> Rational {
    ratio(raw_cross_sum(x, y), n)
}

/// Fraction of `+1` entries.
pub fn fraction_positive(x: &DataList) -> Result<Rational> {
    if x.is_empty() {
        return Err(Error::EmptyList);
    }
    let plus = x.iter().filter(|&&o| o == Outcome::Plus).count();
    Ok(ratio(plus as i64, x.len()))
}
