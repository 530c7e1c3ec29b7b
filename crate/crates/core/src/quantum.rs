//! Lift of discrete band data to the equilateral quantum graph.
//!
//! For unit edge lengths and Kirchhoff vertex conditions, an energy
//! `E ≥ 0` away from the Dirichlet values `(nπ)²`, `n ≥ 1`, belongs to the
//! Floquet spectrum at `k` exactly when `cos(√E)` is an eigenvalue of the
//! discrete Floquet matrix there. This module enumerates the lift
//! `λ → {E : cos(√E) = λ}` inside an energy window; whether the Dirichlet
//! values themselves belong to the spectrum is not decided here — hits are
//! reported as explicit annotations instead.

use std::f64::consts::PI;

use thiserror::Error;

use crate::floquet::{band_functions, FloquetError};
use crate::graph::PeriodicChainGraph;

/// Slack absorbing eigensolver noise at `λ = ±1`.
const LAMBDA_CLAMP: f64 = 1e-12;
/// An energy this close to some `(nπ)²`, `n ≥ 1`, counts as a Dirichlet
/// hit.
const DIRICHLET_TOL: f64 = 1e-9;

/// The energy window `[0, E_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    e_max: f64,
}

impl EnergyWindow {
    pub fn new(e_max: f64) -> Self {
        assert!(e_max.is_finite() && e_max >= 0.0, "E_max must be a finite non-negative real");
        EnergyWindow { e_max }
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("lambda = {lambda} lies outside [-1, 1]")]
    LambdaOutOfRange { lambda: f64 },
    #[error(transparent)]
    Floquet(#[from] FloquetError),
}

/// Quantum-graph energies lifted from the discrete bands at one
/// quasi-momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumBandPoint {
    pub k: f64,
    /// Lifted energies in the window, ascending, Dirichlet values removed.
    pub energies: Vec<f64>,
    /// Lifted energies that landed on a Dirichlet value `(nπ)²`; the
    /// correspondence is silent there, so they are reported separately.
    pub dirichlet_hits: Vec<f64>,
}

/// All energies `E` in the window with `cos(√E) = lambda`, ascending.
///
/// These are `E = (±arccos(lambda) + 2πn)²` over the integers;
/// `lambda` may overshoot `[-1, 1]` by up to 1e-12 (solver noise) and is
/// clamped.
pub fn discrete_to_quantum(lambda: f64, window: &EnergyWindow) -> Result<Vec<f64>, QuantumError> {
    if lambda.abs() > 1.0 + LAMBDA_CLAMP {
        return Err(QuantumError::LambdaOutOfRange { lambda });
    }
    let a = lambda.clamp(-1.0, 1.0).acos();

    let mut energies = Vec::new();
    let mut n = 0u32;
    loop {
        // the square roots in ascending order: a, 2π−a, 2π+a, 4π−a, ...
        let base = 2.0 * PI * n as f64;
        let candidates = if n == 0 { [Some(a), None] } else { [Some(base - a), Some(base + a)] };
        let mut any_inside = false;
        for t in candidates.into_iter().flatten() {
            let e = t * t;
            if e <= window.e_max {
                any_inside = true;
                if energies.last().is_none_or(|&last: &f64| e - last > 1e-12) {
                    energies.push(e);
                }
            }
        }
        if !any_inside && base * base > window.e_max {
            break;
        }
        n += 1;
    }
    Ok(energies)
}

/// Lift every band value at `k` into the window.
///
/// The result is the union over the bands, sorted and deduplicated;
/// energies within 1e-9 of a Dirichlet value `(nπ)²`, `n ≥ 1`, are moved
/// into `dirichlet_hits`.
pub fn quantum_bands(
    g: &PeriodicChainGraph,
    k: f64,
    window: &EnergyWindow,
) -> Result<QuantumBandPoint, QuantumError> {
    let bands = band_functions(g, k)?;
    let mut all = Vec::new();
    for &lambda in &bands.lambdas {
        all.extend(discrete_to_quantum(lambda, window)?);
    }
    all.sort_by(f64::total_cmp);
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));

    let (dirichlet_hits, energies) = all.into_iter().partition(|&e| is_dirichlet(e));
    Ok(QuantumBandPoint {
        k,
        energies,
        dirichlet_hits,
    })
}

fn is_dirichlet(e: f64) -> bool {
    let n = (e.max(0.0).sqrt() / PI).round();
    n >= 1.0 && (e - (n * PI).powi(2)).abs() <= DIRICHLET_TOL
}

/// CSV serialisation of lifted energies: header `k,E`, one row per energy,
/// Dirichlet annotations as comment lines beginning with `#`.
pub fn quantum_table_csv(points: &[QuantumBandPoint]) -> String {
    let mut out = String::from("k,E\n");
    for p in points {
        for &e in &p.energies {
            out.push_str(&format!("{:.16e},{:.16e}\n", p.k, e));
        }
        for &e in &p.dirichlet_hits {
            let n = (e.sqrt() / PI).round() as i64;
            out.push_str(&format!(
                "# k={:.16e}: unresolved at E=({n}*pi)^2 ~ {:.16e}\n",
                p.k, e
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use approx::assert_abs_diff_eq;

    const TWO_PI_SQ: f64 = 39.478_417_604_357_434;
    const PI_SQ: f64 = 9.869_604_401_089_358;

    #[test]
    fn lift_of_plus_one() {
        let es = discrete_to_quantum(1.0, &EnergyWindow::new(50.0)).unwrap();
        assert_eq!(es.len(), 2);
        assert_abs_diff_eq!(es[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(es[1], TWO_PI_SQ, epsilon = 1e-9);
    }

    #[test]
    fn lift_of_minus_one() {
        let es = discrete_to_quantum(-1.0, &EnergyWindow::new(50.0)).unwrap();
        // (3π)² ≈ 88.8 falls outside the window
        assert_eq!(es.len(), 1);
        assert_abs_diff_eq!(es[0], PI_SQ, epsilon = 1e-9);
    }

    #[test]
    fn lift_of_zero() {
        let es = discrete_to_quantum(0.0, &EnergyWindow::new(50.0)).unwrap();
        let expected = [(PI / 2.0).powi(2), (1.5 * PI).powi(2)];
        assert_eq!(es.len(), 2);
        for (have, want) in es.iter().zip(expected) {
            assert_abs_diff_eq!(have, &want, epsilon = 1e-9);
        }
    }

    #[test]
    fn out_of_range_lambda_is_rejected_but_noise_is_clamped() {
        let window = EnergyWindow::new(10.0);
        assert!(matches!(
            discrete_to_quantum(1.1, &window),
            Err(QuantumError::LambdaOutOfRange { .. })
        ));
        let es = discrete_to_quantum(1.0 + 5e-13, &window).unwrap();
        assert_eq!(es[0], 0.0);
    }

    #[test]
    fn round_trip_reproduces_lambda() {
        let window = EnergyWindow::new(200.0);
        for i in 0..=40 {
            let lambda = -1.0 + 2.0 * i as f64 / 40.0;
            for e in discrete_to_quantum(lambda, &window).unwrap() {
                assert_abs_diff_eq!(e.sqrt().cos(), lambda, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn window_monotonicity() {
        for lambda in [-0.8, -0.3, 0.1, 0.9] {
            let small = discrete_to_quantum(lambda, &EnergyWindow::new(40.0)).unwrap();
            let large = discrete_to_quantum(lambda, &EnergyWindow::new(160.0)).unwrap();
            assert!(small.len() <= large.len());
            for (a, b) in small.iter().zip(&large) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn line_graph_lifts_to_the_folded_free_dispersion() {
        // H on the real line has E = k² bands; the second branch is
        // (2π − k)².
        let g = builders::line_graph();
        let window = EnergyWindow::new(15.0);
        for &k in &[0.3, 1.0, 2.5] {
            let p = quantum_bands(&g, k, &window).unwrap();
            assert_abs_diff_eq!(p.energies[0], k * k, epsilon = 1e-9);
            let second = (2.0 * PI - k).powi(2);
            if second <= 15.0 {
                assert_abs_diff_eq!(p.energies[1], second, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn dirichlet_hits_are_annotated_not_listed() {
        // at k = 0 the Perron value 1 lifts to {0, (2π)²}: 0 is a
        // legitimate energy, (2π)² is a Dirichlet point
        let g = builders::line_graph();
        let p = quantum_bands(&g, 0.0, &EnergyWindow::new(50.0)).unwrap();
        assert!(p.energies.contains(&0.0));
        assert!(p.energies.iter().all(|&e| !is_dirichlet(e)));
        assert_eq!(p.dirichlet_hits.len(), 1);
        assert_abs_diff_eq!(p.dirichlet_hits[0], TWO_PI_SQ, epsilon = 1e-9);

        let csv = quantum_table_csv(&[p]);
        assert!(csv.starts_with("k,E\n"));
        assert!(csv.contains("# k="));
        assert!(csv.contains("(2*pi)^2"));
    }

    #[test]
    fn empty_window_keeps_only_zero() {
        let g = builders::line_graph();
        let p = quantum_bands(&g, 0.0, &EnergyWindow::new(0.0)).unwrap();
        assert_eq!(p.energies, vec![0.0]);
        let p = quantum_bands(&g, 1.0, &EnergyWindow::new(0.0)).unwrap();
        assert!(p.energies.is_empty());
    }
}
