//! Band structures of Z-periodic chain graphs.
//!
//! A chain graph is an infinite graph built from translated copies of a
//! finite cell, consecutive copies joined by `m ≥ 1` connecting edges.
//! This crate assembles the Floquet matrices of the normalised discrete
//! Laplacian on such graphs, samples dispersion relations, locates and
//! classifies spectral band edges, detects flat bands, and lifts the
//! discrete data to equilateral quantum-graph energies through
//! `cos(√E) = λ`.
//!
//! The headline phenomenon: with a single connecting edge (`m = 1`) every
//! band edge is attained at the periodic or anti-periodic point (`k = 0`
//! or `k = π`), while for `m = 2` the bundled folded-lattice example has a
//! band maximum and a band minimum strictly inside `(0, π)`.
//!
//! ```
//! use chainband::{analysis, builders};
//!
//! let g = builders::folded_hksw_graph();
//! let (min_edge, _) = analysis::locate_band_edges(&g, 3, 401, 1e-6).unwrap();
//! assert_eq!(
//!     min_edge.classification,
//!     analysis::EdgeClassification::Interior
//! );
//! ```

pub mod analysis;
pub mod builders;
pub mod floquet;
pub mod graph;
pub mod quantum;

pub use analysis::{
    classify_edge, detect_flat_bands, fermi_set, locate_band_edges, spectrum_union, BandEdge,
    EdgeClassification, EdgeKind, FermiSet, SpectrumIntervals,
};
pub use floquet::{
    assemble_floquet_matrix, band_functions, k_grid, sample_bands, BandTable, BandValues,
    FloquetMatrix,
};
pub use graph::{validate, CellDescription, Edge, GraphError, GraphFileError, PeriodicChainGraph};
pub use quantum::{discrete_to_quantum, quantum_bands, EnergyWindow, QuantumBandPoint};
