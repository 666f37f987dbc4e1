use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::{Error, Result};

/// An undirected weighted graph given by its symmetric adjacency matrix,
/// entries in [0,1]. The adjacency matrix is the shift operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DMatrix<f64>,
}

impl Graph {
    /// Validates exact symmetry and the [0,1] entry range.
    pub fn from_adjacency(adjacency: DMatrix<f64>) -> Result<Self> {
        let (r, c) = adjacency.shape();
        if r != c || r == 0 {
            return Err(Error::InvalidGraph(format!(
                "adjacency must be square and nonempty, got {r}x{c}"
            )));
        }
        for i in 0..r {
            for j in 0..r {
                let a = adjacency[(i, j)];
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::InvalidGraph(format!(
                        "entry ({i},{j}) = {a} outside [0,1]"
                    )));
                }
                if a != adjacency[(j, i)] {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    /// Writes the full symmetric grid as CSV, one row per node, 17
    /// significant digits per entry.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| format!("{:.16e}", self.adjacency[(i, j)]))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> = line
                .split(',')
                .map(|tok| tok.trim().parse::<f64>())
                .collect();
            rows.push(row.map_err(|e| Error::InvalidGraph(format!("bad CSV entry: {e}")))?);
        }
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGraph(
                "adjacency CSV must be a nonempty square grid".into(),
            ));
        }
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::from_adjacency(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_adjacency() {
        assert!(Graph::from_adjacency(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]))
            .is_err());
        assert!(Graph::from_adjacency(DMatrix::from_row_slice(1, 1, &[1.5])).is_err());
        assert!(Graph::from_adjacency(DMatrix::from_row_slice(1, 1, &[-0.1])).is_err());
        assert!(Graph::from_adjacency(DMatrix::zeros(0, 0)).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[0.12345678901234567, 1.0 / 3.0, 1.0 / 3.0, 0.9999999999999999],
        );
        let g = Graph::from_adjacency(a).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let g2 = Graph::read_csv(buf.as_slice()).unwrap();
        assert_eq!(g.adjacency(), g2.adjacency());
    }
}
