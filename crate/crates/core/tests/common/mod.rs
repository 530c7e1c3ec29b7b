//! Independent oracles shared by the integration suites.
//!
//! Nothing here calls into the band-edge search or classification code:
//! eigenvalues are cross-checked through characteristic polynomials and
//! bisection, and band edges through a dense grid with its own
//! golden-section refinement.

// not every test binary uses every oracle
#![allow(dead_code)]

use std::f64::consts::PI;

use chainband::floquet::{band_functions, sample_bands};
use chainband::graph::PeriodicChainGraph;

// ---------------------------------------------------------------------------
// Characteristic-polynomial eigenvalue oracle (real symmetric matrices)
// ---------------------------------------------------------------------------

/// Monic characteristic polynomial coefficients of a real matrix by the
/// Faddeev–LeVerrier recursion: returns `c` with
/// `det(λI − A) = Σ c[i] λ^i` and `c[n] = 1`.
pub fn charpoly_monic(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m: Vec<Vec<f64>> = identity(n);
    for k in 1..=n {
        m = mat_mul(a, &m);
        let t: f64 = (0..n).map(|i| m[i][i]).sum();
        c[n - k] = -t / k as f64;
        if k < n {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += c[n - k];
            }
        }
    }
    c
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for l in 0..n {
            let ail = a[i][l];
            for j in 0..n {
                out[i][j] += ail * b[l][j];
            }
        }
    }
    out
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// All simple roots of the polynomial in `[lo, hi]`: scan for sign changes
/// on a fine grid, then bisect each bracket down to width 1e-13.
pub fn poly_roots_bisect(c: &[f64], lo: f64, hi: f64, scan: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / scan as f64;
    let mut x0 = lo;
    let mut f0 = poly_eval(c, x0);
    for i in 1..=scan {
        let x1 = lo + i as f64 * step;
        let f1 = poly_eval(c, x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, fa) = (x0, x1, f0);
            while b - a > 1e-13 {
                let mid = 0.5 * (a + b);
                let fm = poly_eval(c, mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                } else if (fm > 0.0) == (fa > 0.0) {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// The folded-graph Floquet matrix at `k = π`, written out from the closed
/// forms of the reference 5×5 matrix with `e^{±iπ} = −1`. Hand-coded on
/// purpose: this must not depend on the assembly code under test.
pub fn folded_matrix_at_pi() -> Vec<Vec<f64>> {
    let s = 1.0 / 3f64.sqrt();
    let rows = [
        [0.0, s, -0.5, 0.0, s],
        [s, 0.0, 0.5, -s, 0.0],
        [-0.5, 0.5, 0.0, 0.5, 0.5],
        [0.0, -s, 0.5, 0.0, s],
        [s, 0.0, 0.5, s, 0.0],
    ];
    rows.iter()
        .map(|row| row.iter().map(|&x| x * s).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Dense-grid band-edge oracle
// ---------------------------------------------------------------------------

pub const ORACLE_GRID: usize = 4001;

pub struct OracleEdge {
    pub value: f64,
    pub attained: Vec<f64>,
}

/// Brute-force band edges: 4001-point grid on `[0, π]` plus golden-section
/// refinement of every bracket to 1e-10.
pub fn oracle_band_edges(g: &PeriodicChainGraph, band0: usize) -> (OracleEdge, OracleEdge) {
    let grid: Vec<f64> = (0..ORACLE_GRID)
        .map(|i| PI * i as f64 / (ORACLE_GRID - 1) as f64)
        .collect();
    let spacing = PI / (ORACLE_GRID - 1) as f64;
    let vals = sample_bands(g, &grid).unwrap().band(band0);
    let eval = |k: f64| band_functions(g, k).unwrap().lambdas[band0];

    let mut min_cands = vec![(0.0, vals[0]), (PI, vals[ORACLE_GRID - 1])];
    let mut max_cands = min_cands.clone();
    for i in 1..ORACLE_GRID - 1 {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            min_cands.push(golden_min(eval, grid[i - 1], grid[i + 1], 1e-10));
        }
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            let (k, v) = golden_min(|k| -eval(k), grid[i - 1], grid[i + 1], 1e-10);
            max_cands.push((k, -v));
        }
    }

    let pick = |cands: Vec<(f64, f64)>, maximise: bool| {
        let best = cands
            .iter()
            .map(|c| c.1)
            .fold(if maximise { f64::NEG_INFINITY } else { f64::INFINITY }, |a, b| {
                if maximise {
                    a.max(b)
                } else {
                    a.min(b)
                }
            });
        let mut ks: Vec<f64> = cands
            .into_iter()
            .filter(|&(_, v)| (v - best).abs() <= 1e-9)
            .map(|(k, _)| k)
            .collect();
        ks.sort_by(f64::total_cmp);
        ks.dedup_by(|a, b| (*a - *b).abs() < 0.5 * spacing);
        OracleEdge {
            value: best,
            attained: ks,
        }
    };
    (pick(min_cands, false), pick(max_cands, true))
}

pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 0.381_966_011_250_105_15;
    let mut h = b - a;
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut fc = f(c);
    let mut fd = f(d);
    while h > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INVPHI2 * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INVPHI * h;
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
