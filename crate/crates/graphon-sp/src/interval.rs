use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite union of disjoint half-open intervals [a, b) inside [0,1],
/// kept sorted with touching intervals merged.
///
/// The half-open convention makes containment and intersection tests free of
/// measure-zero ambiguity: a cell touching the set only at a boundary point
/// neither intersects it nor is contained in it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Builds a set from arbitrary [a, b) pairs; overlapping or touching
    /// intervals are merged and the result sorted.
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &pairs {
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a >= b {
                return Err(Error::InvalidIntervalSet(format!(
                    "interval [{a}, {b}) must satisfy 0 <= a < b <= 1"
                )));
            }
        }
        let mut sorted = pairs;
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut intervals: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (a, b) in sorted {
            match intervals.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => intervals.push((a, b)),
            }
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self { intervals: vec![] }
    }

    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length of the union.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| b - a).sum()
    }

    /// Complement within [0,1], again as half-open intervals.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(a, b) in &self.intervals {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        IntervalSet { intervals: out }
    }

    /// True when [a, b) is contained in the union. Because touching
    /// intervals are merged, containment in the union equals containment in
    /// a single member interval.
    pub fn contains_interval(&self, a: f64, b: f64) -> bool {
        self.intervals.iter().any(|&(s, e)| s <= a && b <= e)
    }

    /// True when [a, b) meets the set in a set of positive length.
    pub fn intersects(&self, a: f64, b: f64) -> bool {
        self.intervals.iter().any(|&(s, e)| a < e && s < b)
    }

    /// True when `u` lies in the set (half-open convention).
    pub fn contains_point(&self, u: f64) -> bool {
        self.intervals.iter().any(|&(s, e)| s <= u && u < e)
    }

    /// Length of [a, b) ∩ set.
    pub fn overlap_len(&self, a: f64, b: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(s, e)| (b.min(e) - a.max(s)).max(0.0))
            .sum()
    }

    /// Measure of the symmetric difference with another set.
    pub fn symmetric_difference_measure(&self, other: &IntervalSet) -> f64 {
        // |A Δ B| = |A| + |B| - 2 |A ∩ B|
        let inter: f64 = self
            .intervals
            .iter()
            .map(|&(a, b)| other.overlap_len(a, b))
            .sum();
        self.measure() + other.measure() - 2.0 * inter
    }

    /// All interval endpoints, for partition refinement.
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect()
    }
}

impl TryFrom<Vec<(f64, f64)>> for IntervalSet {
    type Error = Error;
    fn try_from(pairs: Vec<(f64, f64)>) -> Result<Self> {
        IntervalSet::new(pairs)
    }
}

impl From<IntervalSet> for Vec<(f64, f64)> {
    fn from(set: IntervalSet) -> Self {
        set.intervals
    }
}

impl std::fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(a, b)| format!("[{a},{b})"))
            .collect();
        write!(f, "{}", parts.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_touching_and_overlapping() {
        let s = IntervalSet::new(vec![(0.5, 0.75), (0.0, 0.25), (0.25, 0.5)]).unwrap();
        assert_eq!(s.intervals(), &[(0.0, 0.75)]);
        let t = IntervalSet::new(vec![(0.0, 0.3), (0.2, 0.4)]).unwrap();
        assert_eq!(t.intervals(), &[(0.0, 0.4)]);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(IntervalSet::new(vec![(0.5, 0.5)]).is_err());
        assert!(IntervalSet::new(vec![(0.5, 0.2)]).is_err());
        assert!(IntervalSet::new(vec![(-0.1, 0.2)]).is_err());
        assert!(IntervalSet::new(vec![(0.9, 1.1)]).is_err());
    }

    #[test]
    fn complement_round_trip() {
        let s = IntervalSet::new(vec![(0.25, 0.5), (0.75, 1.0)]).unwrap();
        let c = s.complement();
        assert_eq!(c.intervals(), &[(0.0, 0.25), (0.5, 0.75)]);
        assert_eq!(c.complement(), s);
        assert!((s.measure() + c.measure() - 1.0).abs() < 1e-15);
        assert!(IntervalSet::full().complement().is_empty());
    }

    #[test]
    fn half_open_boundary_semantics() {
        let s = IntervalSet::new(vec![(0.25, 0.5)]).unwrap();
        // a cell touching only at the right endpoint does not intersect
        assert!(!s.intersects(0.5, 0.75));
        assert!(s.intersects(0.4, 0.75));
        assert!(s.contains_interval(0.25, 0.5));
        assert!(!s.contains_interval(0.2, 0.5));
        assert!(s.contains_point(0.25));
        assert!(!s.contains_point(0.5));
    }

    #[test]
    fn overlap_and_symmetric_difference() {
        let s = IntervalSet::new(vec![(0.0, 0.5)]).unwrap();
        let t = IntervalSet::new(vec![(0.25, 0.75)]).unwrap();
        assert!((s.overlap_len(0.25, 0.75) - 0.25).abs() < 1e-15);
        assert!((s.symmetric_difference_measure(&t) - 0.5).abs() < 1e-15);
        assert!((s.symmetric_difference_measure(&s)).abs() < 1e-15);
    }
}
