use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

/// A signal on a graph: one real value per node.
pub type GraphSignal = DVector<f64>;

/// Magnitude below which a vector entry is treated as zero when fixing the
/// sign of an eigenvector.
const SIGN_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric shift operator in canonical form:
///
/// * eigenvalues ordered by |λ| descending, ties broken by signed value
///   descending and then by the solver's original index ascending;
/// * within numerically degenerate eigenspaces the basis is rebuilt by
///   projecting standard basis vectors in index order, so the span is
///   reproducible no matter what basis the solver happened to return;
/// * each eigenvector's first entry of magnitude above 1e-12 is positive.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    permutation: Vec<usize>,
}

impl SpectralBasis {
    pub fn new(graph: &Graph) -> Self {
        let (eigenvalues, eigenvectors, permutation) =
            ordered_symmetric_eigen(graph.adjacency());
        Self {
            eigenvalues,
            eigenvectors,
            permutation,
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in the canonical |λ|-descending order.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// For each canonical position, the solver's original eigenpair index.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Frequency representation of `x`: coefficients against the
    /// eigenvector basis.
    pub fn gft(&self, x: &GraphSignal) -> Result<DVector<f64>> {
        self.check_len(x.len())?;
        Ok(self.eigenvectors.transpose() * x)
    }

    /// Inverse transform: signal with the given frequency coefficients.
    pub fn igft(&self, coefficients: &DVector<f64>) -> Result<GraphSignal> {
        self.check_len(coefficients.len())?;
        Ok(&self.eigenvectors * coefficients)
    }

    /// The bandwidth ω for which the leading `k_omega` eigenvectors span the
    /// bandlimited space: |λ_{k_omega}| (1-based index).
    pub fn bandwidth_omega(&self, k_omega: usize) -> Result<f64> {
        if k_omega < 1 || k_omega > self.n() {
            return Err(Error::InvalidBandwidth {
                k: k_omega,
                n: self.n(),
            });
        }
        Ok(self.eigenvalues[k_omega - 1].abs())
    }

    /// The leading `k` eigenvectors as an n x k matrix.
    pub fn leading(&self, k: usize) -> DMatrix<f64> {
        self.eigenvectors.columns(0, k).into_owned()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: len,
            });
        }
        Ok(())
    }
}

/// Full symmetric eigendecomposition of a graph's shift operator in the
/// canonical form described on [`SpectralBasis`].
pub fn spectral_decompose(graph: &Graph) -> SpectralBasis {
    SpectralBasis::new(graph)
}

/// Shared canonicalization for any symmetric operator grid (graph shift or
/// weighted step kernel).
pub(crate) fn ordered_symmetric_eigen(
    mat: &DMatrix<f64>,
) -> (DVector<f64>, DMatrix<f64>, Vec<usize>) {
    let n = mat.nrows();
    let eig = SymmetricEigen::new(mat.clone());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        lb.abs()
            .partial_cmp(&la.abs())
            .unwrap()
            .then(lb.partial_cmp(&la).unwrap())
            .then(a.cmp(&b))
    });

    let eigenvalues = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let mut eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    canonicalize_degenerate_spaces(&eigenvalues, &mut eigenvectors);
    for c in 0..n {
        fix_column_sign(&mut eigenvectors, c);
    }
    (eigenvalues, eigenvectors, order)
}

/// Groups consecutive eigenvalues that agree within a small absolute
/// tolerance and rebuilds each multi-dimensional group's basis
/// deterministically: project standard basis vectors onto the eigenspace in
/// index order and orthonormalize.
fn canonicalize_degenerate_spaces(eigenvalues: &DVector<f64>, vectors: &mut DMatrix<f64>) {
    let n = eigenvalues.len();
    if n == 0 {
        return;
    }
    let scale = eigenvalues[0].abs().max(1.0);
    let tol = 1e-10 * scale;

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end] - eigenvalues[end - 1]).abs() <= tol {
            end += 1;
        }
        let dim = end - start;
        if dim > 1 {
            rebuild_group(vectors, start, dim);
        }
        start = end;
    }
}

fn rebuild_group(vectors: &mut DMatrix<f64>, start: usize, dim: usize) {
    let n = vectors.nrows();
    let q = vectors.columns(start, dim).into_owned(); // n x dim, orthonormal
    let mut accepted: Vec<DVector<f64>> = Vec::with_capacity(dim);
    for j in 0..n {
        if accepted.len() == dim {
            break;
        }
        // projection of e_j onto the eigenspace: q (q^T e_j)
        let mut w = &q * q.row(j).transpose();
        // orthogonalize against vectors already accepted, twice for stability
        for _ in 0..2 {
            for u in &accepted {
                let coef = u.dot(&w);
                w -= u * coef;
            }
        }
        let norm = w.norm();
        if norm > 1e-8 {
            accepted.push(w / norm);
        }
    }
    debug_assert_eq!(accepted.len(), dim, "eigenspace projection lost rank");
    for (c, u) in accepted.iter().enumerate() {
        vectors.set_column(start + c, u);
    }
}

fn fix_column_sign(vectors: &mut DMatrix<f64>, col: usize) {
    let n = vectors.nrows();
    for r in 0..n {
        let v = vectors[(r, col)];
        if v.abs() > SIGN_TOL {
            if v < 0.0 {
                for rr in 0..n {
                    vectors[(rr, col)] = -vectors[(rr, col)];
                }
            }
            return;
        }
    }
}

/// Applies the polynomial filter sum_k h_k S^k to `x` by Horner evaluation
/// in the shift operator.
pub fn graph_filter(graph: &Graph, coefficients: &[f64], x: &GraphSignal) -> Result<GraphSignal> {
    if x.len() != graph.n() {
        return Err(Error::DimensionMismatch {
            expected: graph.n(),
            got: x.len(),
        });
    }
    let Some((&last, rest)) = coefficients.split_last() else {
        return Ok(DVector::zeros(graph.n()));
    };
    let mut y = x * last;
    for &h in rest.iter().rev() {
        y = graph.adjacency() * y + x * h;
    }
    Ok(y)
}

/// Bandwidth models tying the number of retained frequencies to the sample
/// budget m: equal to m, 90% of m, 85% of m, or 90% of m with exponential
/// attenuation of the out-of-band coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthModel {
    Bwm1,
    Bwm2,
    Bwm3,
    Bwm4,
}

impl BandwidthModel {
    /// Count of retained leading frequencies for sample budget `m`.
    /// Fractional counts round half to even.
    pub fn k_omega(&self, m: usize) -> Result<usize> {
        let k = match self {
            BandwidthModel::Bwm1 => m as f64,
            BandwidthModel::Bwm2 | BandwidthModel::Bwm4 => (0.9 * m as f64).round_ties_even(),
            BandwidthModel::Bwm3 => (0.85 * m as f64).round_ties_even(),
        };
        if k < 1.0 {
            return Err(Error::InvalidBandwidth { k: 0, n: m });
        }
        Ok(k as usize)
    }

    pub fn id(&self) -> &'static str {
        match self {
            BandwidthModel::Bwm1 => "bwm1",
            BandwidthModel::Bwm2 => "bwm2",
            BandwidthModel::Bwm3 => "bwm3",
            BandwidthModel::Bwm4 => "bwm4",
        }
    }
}

impl std::fmt::Display for BandwidthModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Out-of-band gain of the BWM4 frequency filter at 1-based frequency index
/// `k`: 1 inside the band, exp(-4 (k - k_omega)) beyond it.
pub(crate) fn bwm4_gain(k: usize, k_omega: usize) -> f64 {
    if k <= k_omega {
        1.0
    } else {
        (-4.0 * (k - k_omega) as f64).exp()
    }
}

/// Draws a random bandlimited signal: the leading k_omega frequency
/// coefficients are i.i.d. Gaussian with mean 1 and standard deviation 0.52,
/// the rest zero (BWM1-BWM3) or attenuated by the BWM4 filter. Deterministic
/// for a fixed seed.
pub fn generate_bandlimited(
    basis: &SpectralBasis,
    model: BandwidthModel,
    m: usize,
    seed: u64,
) -> Result<GraphSignal> {
    let n = basis.n();
    if m > n {
        return Err(Error::BudgetExceedsNodes { m, n });
    }
    let k_omega = model.k_omega(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(1.0, 0.52).expect("valid std dev");

    let mut coefficients = DVector::zeros(n);
    match model {
        BandwidthModel::Bwm1 | BandwidthModel::Bwm2 | BandwidthModel::Bwm3 => {
            for i in 0..k_omega {
                coefficients[i] = normal.sample(&mut rng);
            }
        }
        BandwidthModel::Bwm4 => {
            for i in 0..n {
                coefficients[i] = normal.sample(&mut rng) * bwm4_gain(i + 1, k_omega);
            }
        }
    }
    basis.igft(&coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    fn k2() -> Graph {
        Graph::from_adjacency(dmatrix![0.0, 1.0; 1.0, 0.0]).unwrap()
    }

    fn k3() -> Graph {
        Graph::from_adjacency(dmatrix![
            0.0, 1.0, 1.0;
            1.0, 0.0, 1.0;
            1.0, 1.0, 0.0
        ])
        .unwrap()
    }

    #[test]
    fn k2_spectrum_tie_broken_by_value() {
        let basis = SpectralBasis::new(&k2());
        assert_abs_diff_eq!(basis.eigenvalues()[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(basis.eigenvalues()[1], -1.0, epsilon = 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(basis.eigenvectors()[(0, 0)], s, epsilon = 1e-12);
        assert_abs_diff_eq!(basis.eigenvectors()[(1, 0)], s, epsilon = 1e-12);
        assert_abs_diff_eq!(basis.eigenvectors()[(0, 1)], s, epsilon = 1e-12);
        assert_abs_diff_eq!(basis.eigenvectors()[(1, 1)], -s, epsilon = 1e-12);
    }

    #[test]
    fn k3_spectrum() {
        let basis = SpectralBasis::new(&k3());
        let expected = [2.0, -1.0, -1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_abs_diff_eq!(basis.eigenvalues()[i], *e, epsilon = 1e-10);
        }
        // reconstruction U diag(l) U^T = A
        let u = basis.eigenvectors();
        let l = DMatrix::from_diagonal(basis.eigenvalues());
        let rec = u * l * u.transpose();
        assert!((rec - k3().adjacency()).norm() <= 1e-8 * 3.0);
    }

    #[test]
    fn empty_graph_gets_standard_basis() {
        let g = Graph::from_adjacency(DMatrix::zeros(4, 4)).unwrap();
        let basis = SpectralBasis::new(&g);
        assert_eq!(basis.eigenvalues().iter().filter(|l| **l == 0.0).count(), 4);
        assert!((basis.eigenvectors() - DMatrix::<f64>::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn decomposition_is_reproducible() {
        let g = k3();
        let a = SpectralBasis::new(&g);
        let b = SpectralBasis::new(&g);
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn gft_examples() {
        let basis = SpectralBasis::new(&k2());
        let x = DVector::from_vec(vec![1.0, 0.0]);
        let xhat = basis.gft(&x).unwrap();
        let s = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(xhat[0], s, epsilon = 1e-12);
        assert_abs_diff_eq!(xhat[1], s, epsilon = 1e-12);

        // transforming an eigenvector yields a standard basis coefficient
        let v1: DVector<f64> = basis.eigenvectors().column(1).into_owned();
        let vhat = basis.gft(&v1).unwrap();
        assert_abs_diff_eq!(vhat[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vhat[1], 1.0, epsilon = 1e-12);

        let zero = DVector::zeros(2);
        assert_eq!(basis.gft(&zero).unwrap(), DVector::zeros(2));

        // round trip
        let back = basis.igft(&xhat).unwrap();
        assert!((back - x).norm() < 1e-10);

        assert!(basis.gft(&DVector::zeros(3)).is_err());
    }

    #[test]
    fn filter_examples() {
        let g = k2();
        let x = DVector::from_vec(vec![1.0, 0.0]);
        let id = graph_filter(&g, &[1.0], &x).unwrap();
        assert_eq!(id, x);

        let shift = graph_filter(&g, &[0.0, 1.0], &x).unwrap();
        assert_eq!(shift, DVector::from_vec(vec![0.0, 1.0]));

        // x + A^2 x with A^2 = I
        let y = graph_filter(&g, &[1.0, 0.0, 1.0], &x).unwrap();
        assert_eq!(y, DVector::from_vec(vec![2.0, 0.0]));

        let empty = graph_filter(&g, &[], &x).unwrap();
        assert_eq!(empty, DVector::zeros(2));
    }

    #[test]
    fn bandwidth_omega_examples() {
        let b2 = SpectralBasis::new(&k2());
        assert_abs_diff_eq!(b2.bandwidth_omega(1).unwrap(), 1.0, epsilon = 1e-12);
        let b3 = SpectralBasis::new(&k3());
        assert_abs_diff_eq!(b3.bandwidth_omega(2).unwrap(), 1.0, epsilon = 1e-10);
        assert!(b2.bandwidth_omega(0).is_err());
        assert!(b2.bandwidth_omega(3).is_err());
    }

    #[test]
    fn k_omega_rounding() {
        assert_eq!(BandwidthModel::Bwm1.k_omega(3).unwrap(), 3);
        assert_eq!(BandwidthModel::Bwm2.k_omega(3).unwrap(), 3); // 2.7 -> 3
        assert_eq!(BandwidthModel::Bwm2.k_omega(5).unwrap(), 4); // 4.5 -> 4 (half to even)
        assert_eq!(BandwidthModel::Bwm3.k_omega(10).unwrap(), 8); // 8.5 -> 8
        assert_eq!(BandwidthModel::Bwm3.k_omega(2).unwrap(), 2); // 1.7 -> 2
        assert!(BandwidthModel::Bwm2.k_omega(0).is_err());
    }

    #[test]
    fn bwm4_gain_matches_filter_formula() {
        assert_eq!(bwm4_gain(2, 2), 1.0);
        assert_abs_diff_eq!(bwm4_gain(4, 2), (-8.0_f64).exp(), epsilon = 1e-300);
        assert_eq!(bwm4_gain(1, 3), 1.0);
    }

    #[test]
    fn bandlimited_band_support_and_determinism() {
        let g = rand_graph(8, 7);
        let basis = SpectralBasis::new(&g);
        let x = generate_bandlimited(&basis, BandwidthModel::Bwm1, 3, 99).unwrap();
        let xhat = basis.gft(&x).unwrap();
        for i in 3..8 {
            assert!(xhat[i].abs() < 1e-12, "trailing coefficient {i} not zero");
        }

        let y = generate_bandlimited(&basis, BandwidthModel::Bwm1, 3, 99).unwrap();
        assert_eq!(x, y);

        let z = generate_bandlimited(&basis, BandwidthModel::Bwm1, 3, 100).unwrap();
        assert_ne!(x, z);

        assert!(generate_bandlimited(&basis, BandwidthModel::Bwm1, 9, 0).is_err());
    }

    #[test]
    fn bwm4_attenuates_tail() {
        let g = rand_graph(10, 3);
        let basis = SpectralBasis::new(&g);
        // m = 3 -> k_omega = 3 (2.7 rounds to 3)
        let x = generate_bandlimited(&basis, BandwidthModel::Bwm4, 3, 5).unwrap();
        let xhat = basis.gft(&x).unwrap();
        // beyond the band the coefficients fall under the filter envelope;
        // draws are N(1, 0.52) so |draw| < 5 with overwhelming margin
        for i in 3..10 {
            assert!(xhat[i].abs() <= 5.0 * bwm4_gain(i + 1, 3));
        }
        assert!(xhat[9].abs() < 1e-10); // e^{-28} scale
    }

    // small deterministic pseudo-random symmetric graph for tests
    fn rand_graph(n: usize, seed: u64) -> Graph {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = next();
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        Graph::from_adjacency(a).unwrap()
    }

    #[test]
    fn parseval_and_ordering_properties() {
        for seed in 0..20 {
            let g = rand_graph(12, seed);
            let basis = SpectralBasis::new(&g);
            for i in 1..12 {
                assert!(
                    basis.eigenvalues()[i - 1].abs() >= basis.eigenvalues()[i].abs() - 1e-12
                );
            }
            let x = DVector::from_fn(12, |i, _| ((i * 7 + seed as usize) % 5) as f64 - 2.0);
            let xhat = basis.gft(&x).unwrap();
            assert_abs_diff_eq!(xhat.norm(), x.norm(), epsilon = 1e-10);
        }
    }

    #[test]
    fn filter_diagonalization_property() {
        for seed in 0..10 {
            let g = rand_graph(10, seed + 100);
            let basis = SpectralBasis::new(&g);
            let h = [0.3, -0.5, 0.2, 0.1];
            let x = DVector::from_fn(10, |i, _| (i as f64 * 0.37 + seed as f64).sin());
            let filtered = graph_filter(&g, &h, &x).unwrap();
            let lhs = basis.gft(&filtered).unwrap();
            let xhat = basis.gft(&x).unwrap();
            for i in 0..10 {
                let l = basis.eigenvalues()[i];
                let response: f64 = h
                    .iter()
                    .enumerate()
                    .map(|(k, hk)| hk * l.powi(k as i32))
                    .sum();
                assert_abs_diff_eq!(lhs[i], response * xhat[i], epsilon = 1e-8);
            }
        }
    }
}
