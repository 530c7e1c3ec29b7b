//! Band-edge location and classification, flat-band detection, Fermi sets
//! and the spectrum as a union of bands.
//!
//! Band functions are even in `k` and 2π-periodic, so all searches run
//! over `[0, π]`. Extrema are bracketed on a coarse grid and refined by
//! golden-section search; band functions are only piecewise analytic, so
//! no derivative information is assumed.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::floquet::{
    assemble_floquet_matrix, band_functions, hermitian_eigenpairs, k_grid, sample_bands,
    FloquetError,
};
use crate::graph::PeriodicChainGraph;

/// Quasi-momentum tolerance for deciding that an extremum sits on a
/// symmetry point, and the default golden-section refinement width.
pub const TOL_K: f64 = 1e-6;
/// Two extremal values within this distance count as the same attained
/// value.
pub const TOL_VAL: f64 = 1e-10;
/// A band whose total spread stays below this is flat.
pub const TOL_FLAT: f64 = 1e-9;
/// Default number of coarse samples on `[0, π]`.
pub const DEFAULT_COARSE_SAMPLES: usize = 401;
/// Residual bound for the eigenvector certificate of a flat-band value.
pub const FLAT_CERT_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Min,
    Max,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Min => "min",
            EdgeKind::Max => "max",
        })
    }
}

/// Where a band edge is attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClassification {
    /// Attained at `k = 0` or `k = π` (possibly at interior points too).
    SymmetryPoint,
    /// Attained only at interior quasi-momenta.
    Interior,
    /// The band is constant; its value is attained everywhere.
    FlatBand,
}

impl fmt::Display for EdgeClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClassification::SymmetryPoint => "SymmetryPoint",
            EdgeClassification::Interior => "Interior",
            EdgeClassification::FlatBand => "FlatBand",
        })
    }
}

/// One extremum of one band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandEdge {
    /// 1-based band index.
    pub band: usize,
    pub kind: EdgeKind,
    /// The extremal value.
    pub value: f64,
    /// Quasi-momenta in `[0, π]` attaining the extremal value (within
    /// [`TOL_VAL`]). For a flat band the value is attained everywhere and
    /// the symmetry points stand in for the whole segment.
    pub attained_at: Vec<f64>,
    /// Total spread of the band over the coarse grid.
    pub band_spread: f64,
    pub classification: EdgeClassification,
}

/// Disjoint closed intervals, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumIntervals(Vec<(f64, f64)>);

impl SpectrumIntervals {
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.0
    }
}

/// Level set of the dispersion relation at a fixed value.
#[derive(Debug, Clone, PartialEq)]
pub enum FermiSet {
    /// Finitely many quasi-momenta in `(-π, π]`, ascending.
    Points(Vec<f64>),
    /// The value belongs to a flat band and is attained everywhere.
    AllOfTorus,
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("band index {band} is out of range 1..={bands}")]
    BadBandIndex { band: usize, bands: usize },
    #[error("window [{lo}, {hi}] intersects the flat-band value {value}")]
    WindowIntersectsFlatBand { lo: f64, hi: f64, value: f64 },
    #[error(transparent)]
    Floquet(#[from] FloquetError),
}

// ---------------------------------------------------------------------------
// Golden-section refinement
// ---------------------------------------------------------------------------

/// Minimise `f` on `[a, b]` down to interval width `tol`. The closure may
/// fail (eigensolver), so errors are threaded through.
fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64), FloquetError>
where
    F: FnMut(f64) -> Result<f64, FloquetError>,
{
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 0.381_966_011_250_105_15;
    let mut h = b - a;
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while h > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = a + INVPHI2 * h;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + INVPHI * h;
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

// ---------------------------------------------------------------------------
// Band edges
// ---------------------------------------------------------------------------

/// Locate the global minimum and maximum of band `band` (1-based).
///
/// The band is coarse-sampled on `n_coarse` uniform points of `[0, π]`,
/// every local-extremum bracket is refined by golden-section search to
/// quasi-momentum width `tol`, and all quasi-momenta attaining the global
/// extremum (within [`TOL_VAL`]) are reported. Extrema living in features
/// narrower than the coarse spacing can be missed; raise `n_coarse` when
/// in doubt.
pub fn locate_band_edges(
    g: &PeriodicChainGraph,
    band: usize,
    n_coarse: usize,
    tol: f64,
) -> Result<(BandEdge, BandEdge), AnalysisError> {
    locate_band_edges_with_tols(g, band, n_coarse, tol, TOL_K, TOL_FLAT)
}

/// [`locate_band_edges`] for every band, with explicit classification
/// tolerances.
pub fn band_edge_report(
    g: &PeriodicChainGraph,
    n_coarse: usize,
    tol: f64,
    tol_k: f64,
    tol_flat: f64,
) -> Result<Vec<(BandEdge, BandEdge)>, AnalysisError> {
    (1..=g.vertex_count())
        .map(|band| locate_band_edges_with_tols(g, band, n_coarse, tol, tol_k, tol_flat))
        .collect()
}

fn locate_band_edges_with_tols(
    g: &PeriodicChainGraph,
    band: usize,
    n_coarse: usize,
    tol: f64,
    tol_k: f64,
    tol_flat: f64,
) -> Result<(BandEdge, BandEdge), AnalysisError> {
    let bands = g.vertex_count();
    if band == 0 || band > bands {
        return Err(AnalysisError::BadBandIndex { band, bands });
    }
    assert!(n_coarse >= 41, "coarse grid must have at least 41 points");
    assert!(tol > 0.0, "refinement tolerance must be positive");

    let j = band - 1;
    let grid = k_grid(n_coarse);
    let spacing = PI / (n_coarse - 1) as f64;
    let vals = sample_bands(g, &grid)?.band(j);

    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;

    if spread < tol_flat {
        // Constant branch: skip refinement, the value is attained
        // everywhere. The symmetry points represent the segment.
        let edge = |kind, value| BandEdge {
            band,
            kind,
            value,
            attained_at: vec![0.0, PI],
            band_spread: spread,
            classification: EdgeClassification::FlatBand,
        };
        return Ok((edge(EdgeKind::Min, lo), edge(EdgeKind::Max, hi)));
    }

    let mut eval = |k: f64| band_functions(g, k).map(|b| b.lambdas[j]);

    // Candidate minima/maxima: both symmetry endpoints (always critical
    // points, by evenness and periodicity) plus every refined interior
    // bracket.
    let mut min_cands: Vec<(f64, f64)> = vec![(0.0, vals[0]), (PI, vals[n_coarse - 1])];
    let mut max_cands = min_cands.clone();
    for i in 1..n_coarse - 1 {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            min_cands.push(golden_min(&mut eval, grid[i - 1], grid[i + 1], tol)?);
        }
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            let (k, v) = golden_min(|k| eval(k).map(|v| -v), grid[i - 1], grid[i + 1], tol)?;
            max_cands.push((k, -v));
        }
    }

    let min_edge = build_edge(band, EdgeKind::Min, min_cands, spacing, spread, tol_k, tol_flat);
    let max_edge = build_edge(band, EdgeKind::Max, max_cands, spacing, spread, tol_k, tol_flat);
    Ok((min_edge, max_edge))
}

fn build_edge(
    band: usize,
    kind: EdgeKind,
    candidates: Vec<(f64, f64)>,
    spacing: f64,
    band_spread: f64,
    tol_k: f64,
    tol_flat: f64,
) -> BandEdge {
    let better = |a: f64, b: f64| match kind {
        EdgeKind::Min => a < b,
        EdgeKind::Max => a > b,
    };
    let mut value = candidates[0].1;
    for &(_, v) in &candidates {
        if better(v, value) {
            value = v;
        }
    }
    let mut attained: Vec<(f64, f64)> = candidates
        .into_iter()
        .filter(|&(_, v)| (v - value).abs() <= TOL_VAL)
        .collect();
    attained.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Refinements from adjacent brackets can land on the same extremum;
    // collapse anything closer than half a grid spacing.
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (k, v) in attained {
        match merged.last_mut() {
            Some(last) if k - last.0 < 0.5 * spacing => {
                if better(v, last.1) {
                    *last = (k, v);
                }
            }
            _ => merged.push((k, v)),
        }
    }
    let mut edge = BandEdge {
        band,
        kind,
        value,
        attained_at: merged.into_iter().map(|(k, _)| k).collect(),
        band_spread,
        classification: EdgeClassification::Interior,
    };
    edge.classification = classify_edge(&edge, tol_k, tol_flat);
    edge
}

/// Classify a band edge.
///
/// A flat band (spread below `tol_flat`) wins outright; otherwise the edge
/// is a symmetry-point edge as soon as any attaining quasi-momentum lies
/// within `tol_k` of `0` or `π`, even if interior attainers exist as well.
pub fn classify_edge(edge: &BandEdge, tol_k: f64, tol_flat: f64) -> EdgeClassification {
    if edge.band_spread < tol_flat {
        return EdgeClassification::FlatBand;
    }
    let near_symmetry = edge
        .attained_at
        .iter()
        .any(|&k| k.abs() <= tol_k || (k - PI).abs() <= tol_k);
    if near_symmetry {
        EdgeClassification::SymmetryPoint
    } else {
        EdgeClassification::Interior
    }
}

// ---------------------------------------------------------------------------
// Flat bands
// ---------------------------------------------------------------------------

/// Default probe set: three generic quasi-momenta plus the full coarse
/// grid.
pub fn default_probe_ks(n_coarse: usize) -> Vec<f64> {
    let mut ks = vec![0.0, 0.5, PI * (5f64.sqrt() - 1.0) / 2.0];
    ks.extend(k_grid(n_coarse));
    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    ks
}

/// Detect the set `D` of flat-band values.
///
/// A sorted-band index whose spread over all probes stays below `tol_flat`
/// yields a candidate value; each candidate is certified by an eigenvector
/// residual check at three independent quasi-momenta before it is
/// reported. The empty set is a perfectly good answer.
pub fn detect_flat_bands(
    g: &PeriodicChainGraph,
    probe_ks: &[f64],
    tol_flat: f64,
) -> Result<Vec<f64>, FloquetError> {
    let mut ks = probe_ks.to_vec();
    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    assert!(ks.len() >= 3, "need at least three distinct probe points");

    let table = sample_bands(g, &ks)?;
    let mut values = Vec::new();
    for j in 0..table.band_count() {
        let col = table.band(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo < tol_flat {
            let value = 0.5 * (lo + hi);
            if certify_flat_value(g, value)? <= FLAT_CERT_RESIDUAL {
                values.push(value);
            }
        }
    }
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() <= FLAT_CERT_RESIDUAL);
    Ok(values)
}

/// Worst eigenvector residual `‖Δ(k)x − λx‖` over three independent
/// quasi-momenta, taking at each the eigenpair nearest `value`.
///
/// Three distinct quasi-momenta attaining the same value force a constant
/// branch, so a small residual at all three certifies flatness.
pub fn certify_flat_value(g: &PeriodicChainGraph, value: f64) -> Result<f64, FloquetError> {
    const CERT_KS: [f64; 3] = [0.5, 1.941_611_038_725_466_5, 2.7];
    let mut worst: f64 = 0.0;
    for k in CERT_KS {
        let m = assemble_floquet_matrix(g, k);
        let (lambdas, vectors) =
            hermitian_eigenpairs(m.as_matrix()).ok_or(FloquetError::EigensolverFailure {
                n: g.vertex_count(),
                k,
            })?;
        let nearest = (0..lambdas.len())
            .min_by(|&a, &b| (lambdas[a] - value).abs().total_cmp(&(lambdas[b] - value).abs()))
            .expect("at least one eigenvalue");
        let x = vectors.column(nearest);
        let residual = (m.as_matrix() * x - x * num_complex::Complex64::from(value)).norm();
        worst = worst.max(residual);
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Fermi sets
// ---------------------------------------------------------------------------

const FERMI_SAMPLES: usize = 2001;

/// All quasi-momenta in `(-π, π]` where some band equals `lambda` within
/// `tol`. Flat-band values are attained everywhere and return
/// [`FermiSet::AllOfTorus`].
///
/// Transversal crossings are found by sign changes on a fine grid plus
/// bisection; tangential contacts (a band extremum touching the level) by
/// refining the local extrema of `λ_j(k) − lambda`.
pub fn fermi_set(
    g: &PeriodicChainGraph,
    lambda: f64,
    tol: f64,
) -> Result<FermiSet, FloquetError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let flats = detect_flat_bands(g, &default_probe_ks(DEFAULT_COARSE_SAMPLES), TOL_FLAT)?;
    if flats.iter().any(|&v| (v - lambda).abs() <= tol.max(TOL_FLAT)) {
        return Ok(FermiSet::AllOfTorus);
    }

    let grid = k_grid(FERMI_SAMPLES);
    let spacing = PI / (FERMI_SAMPLES - 1) as f64;
    let table = sample_bands(g, &grid)?;

    let mut roots: Vec<f64> = Vec::new();
    for j in 0..table.band_count() {
        let mut eval = |k: f64| band_functions(g, k).map(|b| b.lambdas[j] - lambda);
        let f: Vec<f64> = table.band(j).iter().map(|v| v - lambda).collect();

        for i in 0..f.len() - 1 {
            if f[i] == 0.0 {
                roots.push(grid[i]);
            } else if f[i] * f[i + 1] < 0.0 {
                roots.push(bisect_root(&mut eval, grid[i], grid[i + 1], f[i] > 0.0)?);
            }
        }
        if f[f.len() - 1] == 0.0 {
            roots.push(PI);
        }

        // Endpoints are critical points. Accept one as a contact point
        // only when |f| is smallest at the endpoint itself; otherwise the
        // genuine crossing sits further in and is found transversally.
        let last = f.len() - 1;
        if f[0] != 0.0 && f[0].abs() <= tol && f[0].abs() <= f[1].abs() {
            roots.push(0.0);
        }
        if f[last] != 0.0 && f[last].abs() <= tol && f[last].abs() <= f[last - 1].abs() {
            roots.push(PI);
        }

        // tangential contacts at interior extrema
        for i in 1..f.len() - 1 {
            if f[i] > 0.0 && f[i] <= f[i - 1] && f[i] <= f[i + 1] {
                let (k, v) = golden_min(&mut eval, grid[i - 1], grid[i + 1], 1e-10)?;
                if v < 0.0 {
                    // the grid stepped over a double crossing
                    roots.push(bisect_root(&mut eval, grid[i - 1], k, true)?);
                    roots.push(bisect_root(&mut eval, k, grid[i + 1], false)?);
                } else if v <= tol {
                    roots.push(k);
                }
            } else if f[i] < 0.0 && f[i] >= f[i - 1] && f[i] >= f[i + 1] {
                let (k, v) = golden_min(|k| eval(k).map(|v| -v), grid[i - 1], grid[i + 1], 1e-10)?;
                let v = -v;
                if v > 0.0 {
                    roots.push(bisect_root(&mut eval, grid[i - 1], k, false)?);
                    roots.push(bisect_root(&mut eval, k, grid[i + 1], true)?);
                } else if -v <= tol {
                    roots.push(k);
                }
            }
        }
    }

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 0.5 * spacing);

    // reflect to (-π, π]: interior points pair with their negatives, the
    // symmetry points are attained once
    let mut points = Vec::new();
    for &r in &roots {
        if r < 0.5 * spacing {
            points.push(0.0);
        } else if r > PI - 0.5 * spacing {
            points.push(PI);
        } else {
            points.push(-r);
            points.push(r);
        }
    }
    points.sort_by(f64::total_cmp);
    Ok(FermiSet::Points(points))
}

fn bisect_root<F>(eval: &mut F, mut a: f64, mut b: f64, decreasing: bool) -> Result<f64, FloquetError>
where
    F: FnMut(f64) -> Result<f64, FloquetError>,
{
    // f(a) and f(b) straddle zero; `decreasing` records sign(f(a)) > 0
    while b - a > 1e-12 {
        let mid = 0.5 * (a + b);
        let fm = eval(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == decreasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

// ---------------------------------------------------------------------------
// Spectrum union and monotonicity
// ---------------------------------------------------------------------------

/// Merge per-band ranges into the spectrum: sorted disjoint closed
/// intervals, with touching intervals merged.
pub fn spectrum_union(band_ranges: &[(f64, f64)]) -> SpectrumIntervals {
    for &(lo, hi) in band_ranges {
        assert!(lo <= hi, "band range [{lo}, {hi}] is inverted");
    }
    let mut sorted = band_ranges.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in sorted {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    SpectrumIntervals(merged)
}

/// Is band `band` strictly monotonic where its values fall inside the
/// window `(λ_lo, λ_hi)`?
///
/// The window must avoid the flat-band set `D`; that is checked here and
/// violations are reported rather than silently producing `false`.
pub fn check_monotonic(
    g: &PeriodicChainGraph,
    band: usize,
    window: (f64, f64),
) -> Result<bool, AnalysisError> {
    let bands = g.vertex_count();
    if band == 0 || band > bands {
        return Err(AnalysisError::BadBandIndex { band, bands });
    }
    let (lo, hi) = window;
    assert!(lo < hi, "window must be a proper interval");
    let flats = detect_flat_bands(g, &default_probe_ks(DEFAULT_COARSE_SAMPLES), TOL_FLAT)?;
    if let Some(&value) = flats.iter().find(|&&v| v >= lo && v <= hi) {
        return Err(AnalysisError::WindowIntersectsFlatBand { lo, hi, value });
    }

    let grid = k_grid(DEFAULT_COARSE_SAMPLES);
    let vals = sample_bands(g, &grid)?.band(band - 1);
    let inside: Vec<f64> = vals.into_iter().filter(|v| *v > lo && *v < hi).collect();
    if inside.len() < 2 {
        return Ok(true);
    }
    let increasing = inside.windows(2).all(|w| w[1] > w[0]);
    let decreasing = inside.windows(2).all(|w| w[1] < w[0]);
    Ok(increasing || decreasing)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// CSV edge report: `band,kind,value,k_attained,classification`, one min
/// and one max row per band. Multiple attaining quasi-momenta are joined
/// with `;`.
pub fn edge_report_csv(edges: &[(BandEdge, BandEdge)]) -> String {
    let mut out = String::from("band,kind,value,k_attained,classification\n");
    for (min_edge, max_edge) in edges {
        for edge in [min_edge, max_edge] {
            let ks = edge
                .attained_at
                .iter()
                .map(|k| format!("{k:.9}"))
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!(
                "{},{},{:.16e},{},{}\n",
                edge.band, edge.kind, edge.value, ks, edge.classification
            ));
        }
    }
    out
}

/// True when no edge in the report is classified `Interior`.
pub fn all_edges_at_symmetry_points(edges: &[(BandEdge, BandEdge)]) -> bool {
    edges.iter().all(|(min_edge, max_edge)| {
        min_edge.classification != EdgeClassification::Interior
            && max_edge.classification != EdgeClassification::Interior
    })
}

/// Flat-band report: one value per line.
pub fn flat_report(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&format!("{v:.12}\n"));
    }
    out
}
