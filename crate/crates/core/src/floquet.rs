//! Floquet matrices of the normalised discrete Laplacian and their spectra.
//!
//! For a quasi-momentum `k`, the Floquet operator acts on functions over
//! one cell: a shift-0 edge `{u, v}` contributes `1/sqrt(d_u d_v)` to the
//! `(u, v)` and `(v, u)` entries, and a connecting edge `(u, v)`
//! contributes `e^{ik}/sqrt(d_u d_v)` with the phase attached to the row
//! of the earlier-cell endpoint `u`. A connecting edge with `u = v` is the
//! one permitted diagonal term, `2 cos(k)/d_u`. The matrix is Hermitian by
//! construction, entrywise exactly.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::PeriodicChainGraph;

/// Iteration budget for the Hermitian eigensolver. Matrices here are tiny
/// (a few dozen rows at most), so exhausting it indicates a bug.
const EIGEN_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FloquetError {
    #[error("eigensolver failed to converge on the {n}x{n} Floquet matrix at k = {k}")]
    EigensolverFailure { n: usize, k: f64 },
}

/// The Floquet operator at one quasi-momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetMatrix {
    k: f64,
    matrix: DMatrix<Complex64>,
}

impl FloquetMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn entry(&self, u: usize, v: usize) -> Complex64 {
        self.matrix[(u, v)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Eigenvalues of the Floquet operator at one quasi-momentum, ascending
/// with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct BandValues {
    pub k: f64,
    pub lambdas: Vec<f64>,
}

/// Band values sampled over a quasi-momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BandTable {
    grid: Vec<f64>,
    values: Vec<Vec<f64>>,
}

/// Assemble the Floquet matrix of the normalised discrete Laplacian.
///
/// Accepts any real `k`; entries are 2π-periodic in `k` up to rounding.
pub fn assemble_floquet_matrix(g: &PeriodicChainGraph, k: f64) -> FloquetMatrix {
    let n = g.vertex_count();
    let degrees = g.degrees();
    let phase = Complex64::from_polar(1.0, k);
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for e in g.edges() {
        let w = 1.0 / ((degrees[e.u] * degrees[e.v]) as f64).sqrt();
        let entry = if e.shift == 0 { Complex64::ONE * w } else { phase * w };
        matrix[(e.u, e.v)] += entry;
        matrix[(e.v, e.u)] += entry.conj();
    }
    FloquetMatrix { k, matrix }
}

/// All eigenvalues of the Floquet matrix at `k`, ascending with
/// multiplicity.
pub fn band_functions(g: &PeriodicChainGraph, k: f64) -> Result<BandValues, FloquetError> {
    let m = assemble_floquet_matrix(g, k);
    let lambdas = hermitian_eigenvalues(m.as_matrix()).ok_or(FloquetError::EigensolverFailure {
        n: g.vertex_count(),
        k,
    })?;
    Ok(BandValues { k, lambdas })
}

/// Sorted eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Option<Vec<f64>> {
    let eig = m.clone().try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_ITER)?;
    let mut lambdas: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    lambdas.sort_by(f64::total_cmp);
    Some(lambdas)
}

/// Sorted eigenpairs of a Hermitian matrix; column `j` of the returned
/// matrix is the eigenvector of the `j`-th eigenvalue.
pub(crate) fn hermitian_eigenpairs(
    m: &DMatrix<Complex64>,
) -> Option<(Vec<f64>, DMatrix<Complex64>)> {
    let eig = m.clone().try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_ITER)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lambdas: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Some((lambdas, vectors))
}

/// Uniform grid of `samples` quasi-momenta on `[0, π]`, endpoints included.
pub fn k_grid(samples: usize) -> Vec<f64> {
    assert!(samples >= 2, "a grid needs at least its two endpoints");
    let step = PI / (samples - 1) as f64;
    (0..samples).map(|i| i as f64 * step).collect()
}

/// Sample all band functions over a quasi-momentum grid.
///
/// Grid points are evaluated concurrently; the output rows keep the grid
/// order, so results are deterministic.
pub fn sample_bands(g: &PeriodicChainGraph, grid: &[f64]) -> Result<BandTable, FloquetError> {
    assert!(!grid.is_empty(), "grid must be non-empty");
    assert!(
        grid.windows(2).all(|w| w[0] < w[1]),
        "grid must be strictly increasing"
    );
    let values: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&k| band_functions(g, k).map(|b| b.lambdas))
        .collect::<Result<_, _>>()?;
    Ok(BandTable {
        grid: grid.to_vec(),
        values,
    })
}

impl BandTable {
    pub fn new(grid: Vec<f64>, values: Vec<Vec<f64>>) -> Self {
        assert_eq!(grid.len(), values.len());
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        if let Some(first) = values.first() {
            assert!(values.iter().all(|row| row.len() == first.len()));
        }
        BandTable { grid, values }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// One row of ascending band values per grid point.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn band_count(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Values of one band along the grid (0-based band index).
    pub fn band(&self, band: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[band]).collect()
    }

    /// CSV serialisation: header `k,lambda_1,...,lambda_n`, one row per
    /// grid point, full-precision values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k");
        for j in 1..=self.band_count() {
            out.push_str(&format!(",lambda_{j}"));
        }
        out.push('\n');
        for (k, row) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{k:.16e}"));
            for v in row {
                out.push_str(&format!(",{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use approx::assert_abs_diff_eq;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn folded_matrix_matches_the_reference_entries() {
        let g = builders::folded_hksw_graph();
        for &k in &[0.0, 0.3, PI / 2.0, PI, -1.2] {
            let m = assemble_floquet_matrix(&g, k);
            let phase = Complex64::from_polar(1.0, k);
            // paper rows 1..5 are 0..4 here
            let third = Complex64::new(1.0 / 3.0, 0.0);
            let half_sqrt3 = 1.0 / (2.0 * SQRT3);
            assert_eq!(m.entry(0, 1), third);
            assert_eq!(m.entry(0, 4), third);
            assert_eq!(m.entry(3, 4), third);
            assert_abs_diff_eq!((m.entry(0, 2) - phase * half_sqrt3).norm(), 0.0, epsilon = 1e-16);
            assert_abs_diff_eq!((m.entry(1, 3) - phase / 3.0).norm(), 0.0, epsilon = 1e-16);
            for col in [1usize, 3, 4] {
                assert_abs_diff_eq!((m.entry(2, col) - Complex64::new(half_sqrt3, 0.0)).norm(), 0.0, epsilon = 1e-16);
            }
            assert_eq!(m.entry(0, 3), Complex64::ZERO);
            assert_eq!(m.entry(1, 4), Complex64::ZERO);
            for u in 0..5 {
                assert_eq!(m.entry(u, u), Complex64::ZERO);
            }
        }
    }

    #[test]
    fn line_graph_matrix_is_cos_k() {
        let g = builders::line_graph();
        for &k in &[0.0, 0.4, PI / 3.0, PI] {
            let m = assemble_floquet_matrix(&g, k);
            assert_eq!(m.dim(), 1);
            assert_abs_diff_eq!(m.entry(0, 0).re, k.cos(), epsilon = 1e-15);
            assert_eq!(m.entry(0, 0).im, 0.0);
        }
    }

    #[test]
    fn matrix_at_zero_is_real_symmetric() {
        for g in builders::all_example_graphs() {
            let m = assemble_floquet_matrix(&g, 0.0);
            for u in 0..m.dim() {
                for v in 0..m.dim() {
                    assert_eq!(m.entry(u, v).im, 0.0);
                    assert_eq!(m.entry(u, v), m.entry(v, u));
                }
            }
        }
    }

    #[test]
    fn hermitian_exactly_by_construction() {
        for g in builders::all_example_graphs() {
            for &k in &[0.17, 1.0, 2.9, -0.6] {
                let m = assemble_floquet_matrix(&g, k);
                for u in 0..m.dim() {
                    for v in 0..m.dim() {
                        assert_eq!(m.entry(u, v), m.entry(v, u).conj());
                    }
                }
            }
        }
    }

    #[test]
    fn line_band_is_cos_k() {
        let g = builders::line_graph();
        let b = band_functions(&g, PI / 3.0).unwrap();
        assert_eq!(b.lambdas.len(), 1);
        assert_abs_diff_eq!(b.lambdas[0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn folded_bands_at_zero_hit_exact_values() {
        // charpoly at k = 0 factors as lam^2 (lam-1)(3lam+1)(3lam+2)/(-9)
        let g = builders::folded_hksw_graph();
        let b = band_functions(&g, 0.0).unwrap();
        let expected = [-2.0 / 3.0, -1.0 / 3.0, 0.0, 0.0, 1.0];
        for (have, want) in b.lambdas.iter().zip(expected) {
            assert_abs_diff_eq!(have, &want, epsilon = 1e-12);
        }
    }

    #[test]
    fn perron_eigenvalue_is_one_at_zero() {
        for g in builders::all_example_graphs() {
            let b = band_functions(&g, 0.0).unwrap();
            assert_abs_diff_eq!(*b.lambdas.last().unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn sample_bands_single_point_matches_band_functions() {
        let g = builders::triangle_chain();
        let table = sample_bands(&g, &[0.0]).unwrap();
        assert_eq!(table.rows()[0], band_functions(&g, 0.0).unwrap().lambdas);
    }

    #[test]
    fn paper_grid_shows_interior_extrema_of_bands_two_and_three() {
        let g = builders::folded_hksw_graph();
        let table = sample_bands(&g, &k_grid(21)).unwrap();
        assert_eq!(table.band_count(), 5);
        assert_eq!(table.grid().len(), 21);
        let band2 = table.band(1);
        let band3 = table.band(2);
        let argmax2 = (0..21).max_by(|&a, &b| band2[a].total_cmp(&band2[b])).unwrap();
        let argmin3 = (0..21).min_by(|&a, &b| band3[a].total_cmp(&band3[b])).unwrap();
        assert!(argmax2 > 0 && argmax2 < 20, "band 2 max should be interior");
        assert!(argmin3 > 0 && argmin3 < 20, "band 3 min should be interior");
    }

    #[test]
    fn csv_layout_and_determinism() {
        let g = builders::line_graph();
        let table = sample_bands(&g, &k_grid(5)).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,lambda_1"));
        assert_eq!(csv.lines().count(), 6);
        let again = sample_bands(&g, &k_grid(5)).unwrap().to_csv();
        assert_eq!(csv, again);
    }

    #[test]
    fn gauge_invariance_under_recutting_the_cell() {
        // The folded cell with vertex 2 moved forward one period describes
        // the same infinite graph, so the bands must agree.
        let g = builders::folded_hksw_graph();
        let recut = crate::graph::validate(&crate::graph::CellDescription {
            vertices: 5,
            edges: vec![
                [0, 1, 0],
                [0, 4, 0],
                [3, 4, 0],
                [0, 2, 0],
                [2, 1, 1],
                [2, 3, 1],
                [2, 4, 1],
                [1, 3, 1],
            ],
        })
        .unwrap();
        assert_eq!(recut.degrees(), g.degrees());
        for &k in &[0.0, 0.4, 1.3, 2.2, PI] {
            let a = band_functions(&g, k).unwrap().lambdas;
            let b = band_functions(&recut, k).unwrap().lambdas;
            for (x, y) in a.iter().zip(&b) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }
}
