use crate::{Error, Result};

/// Breakpoints closer than this are treated as the same point when merging
/// partitions; prevents sliver cells whose sqrt-width weighting would inject
/// spurious mass into spectral computations.
const MERGE_TOL: f64 = 1e-12;

/// A partition of [0,1] into half-open cells [b_i, b_{i+1}), the last cell
/// closed at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    breakpoints: Vec<f64>,
}

impl Partition {
    /// Builds a partition from strictly increasing breakpoints spanning 0 to 1.
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidPartition(
                "need at least two breakpoints".into(),
            ));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidPartition("first breakpoint must be 0".into()));
        }
        if *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidPartition("last breakpoint must be 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { breakpoints })
    }

    /// The regular partition into `n` equal cells.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "uniform partition needs n >= 1");
        let breakpoints = (0..=n).map(|i| i as f64 / n as f64).collect();
        Self { breakpoints }
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Cell bounds [a, b) for cell `i`.
    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.breakpoints[i], self.breakpoints[i + 1])
    }

    pub fn width(&self, i: usize) -> f64 {
        self.breakpoints[i + 1] - self.breakpoints[i]
    }

    /// Index of the cell containing `u` under the half-open convention;
    /// u = 1 belongs to the last cell.
    pub fn locate(&self, u: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::OutOfDomain { value: u });
        }
        // first breakpoint strictly greater than u, minus one
        let idx = self.breakpoints.partition_point(|&b| b <= u);
        Ok(if idx >= self.breakpoints.len() {
            self.len() - 1
        } else {
            idx - 1
        })
    }

    /// True when every breakpoint of `self` appears in `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        other
            .breakpoints
            .iter()
            .all(|&b| self.locate_breakpoint(b))
    }

    fn locate_breakpoint(&self, b: f64) -> bool {
        self.breakpoints
            .binary_search_by(|x| x.partial_cmp(&b).unwrap())
            .map(|_| true)
            .unwrap_or_else(|i| {
                (i < self.breakpoints.len() && (self.breakpoints[i] - b).abs() <= MERGE_TOL)
                    || (i > 0 && (b - self.breakpoints[i - 1]).abs() <= MERGE_TOL)
            })
    }

    /// Common refinement: the partition whose breakpoints are the merged,
    /// deduplicated breakpoints of both inputs.
    pub fn merge(&self, other: &Partition) -> Partition {
        self.merge_points(&other.breakpoints)
    }

    /// Refinement of `self` with extra points inserted as breakpoints.
    /// Points outside (0,1) or within `MERGE_TOL` of an existing breakpoint
    /// are dropped.
    pub fn merge_points(&self, points: &[f64]) -> Partition {
        let mut all: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(points.iter())
            .copied()
            .filter(|&p| (0.0..=1.0).contains(&p))
            .collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut merged: Vec<f64> = Vec::with_capacity(all.len());
        for p in all {
            match merged.last() {
                Some(&last) if p - last <= MERGE_TOL => {}
                _ => merged.push(p),
            }
        }
        // endpoints are pinned exactly
        merged[0] = 0.0;
        let last = merged.len() - 1;
        merged[last] = 1.0;
        Partition {
            breakpoints: merged,
        }
    }

    /// Splits every cell into `factor` equal sub-cells.
    pub fn refine_by(&self, factor: usize) -> Partition {
        assert!(factor >= 1);
        let mut breakpoints = Vec::with_capacity(self.len() * factor + 1);
        for i in 0..self.len() {
            let (a, b) = self.cell(i);
            for k in 0..factor {
                breakpoints.push(a + (b - a) * k as f64 / factor as f64);
            }
        }
        breakpoints.push(1.0);
        Partition { breakpoints }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_cells_are_half_open() {
        let p = Partition::uniform(4);
        assert_eq!(p.len(), 4);
        assert_eq!(p.locate(0.0).unwrap(), 0);
        assert_eq!(p.locate(0.25).unwrap(), 1);
        assert_eq!(p.locate(0.24999).unwrap(), 0);
        // 1 belongs to the last (closed) cell
        assert_eq!(p.locate(1.0).unwrap(), 3);
        assert!(p.locate(1.5).is_err());
        assert!(p.locate(-0.1).is_err());
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(Partition::new(vec![0.0, 0.5]).is_err());
        assert!(Partition::new(vec![0.1, 1.0]).is_err());
        assert!(Partition::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(Partition::new(vec![0.0, 0.7, 0.3, 1.0]).is_err());
        assert!(Partition::new(vec![0.0, 0.5, 1.0]).is_ok());
    }

    #[test]
    fn merge_dedups_shared_breakpoints() {
        let a = Partition::uniform(2);
        let b = Partition::uniform(4);
        let m = a.merge(&b);
        assert_eq!(m.breakpoints(), Partition::uniform(4).breakpoints());

        let c = Partition::uniform(3);
        let m2 = a.merge(&c);
        assert_eq!(m2.len(), 4); // {0, 1/3, 1/2, 2/3, 1}
    }

    #[test]
    fn merge_points_keeps_range() {
        let p = Partition::uniform(2);
        let q = p.merge_points(&[0.25, 0.5, 1.0]);
        assert_eq!(q.len(), 3);
        assert_eq!(q.breakpoints(), &[0.0, 0.25, 0.5, 1.0]);
    }

    #[test]
    fn refine_by_splits_evenly() {
        let p = Partition::uniform(3).refine_by(2);
        assert_eq!(p.len(), 6);
        for i in 0..6 {
            assert!((p.width(i) - 1.0 / 6.0).abs() < 1e-15);
        }
    }
}
