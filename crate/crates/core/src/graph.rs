//! Z-periodic chain graphs described by a single fundamental cell.
//!
//! A chain graph is an infinite graph assembled from copies of a finite
//! cell, consecutive copies being joined by `shift = +1` edges. Everything
//! downstream (Floquet matrices, band analysis, the quantum lift) starts
//! from a validated [`PeriodicChainGraph`].

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An undirected edge of the fundamental cell.
///
/// `shift = 0` joins two vertices of the same cell; `shift = 1` joins `u`
/// in one cell to `v` in the next copy. An edge to the previous copy is
/// stored from the earlier cell's side, so only shifts 0 and 1 are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub shift: u8,
}

/// Raw, unvalidated cell description; this is also the schema of graph
/// description files (TOML).
///
/// `edges` entries are `[u, v, shift]` triples with 0-based vertex labels.
/// `shift` must be `-1`, `0` or `+1`; a `-1` edge is accepted on input and
/// normalised to the equivalent `+1` edge `[v, u, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDescription {
    pub vertices: usize,
    pub edges: Vec<[i64; 3]>,
}

/// Validation errors; each names the offending element.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {index} ([{u}, {v}, {shift}]) duplicates an earlier edge")]
    DuplicateEdge {
        index: usize,
        u: usize,
        v: usize,
        shift: i64,
    },
    #[error("edge {index} is an intra-cell self-loop at vertex {v}")]
    SelfLoopIntraCell { index: usize, v: usize },
    #[error("the periodic graph is disconnected: {detail}")]
    DisconnectedGraph { detail: String },
    #[error("no connecting edge: at least one shift +1 edge is required")]
    NoConnectingEdge,
    #[error("vertex id {id} is out of range for a cell with {vertices} vertices")]
    BadVertexId { id: i64, vertices: usize },
    #[error("edge {index} has shift {shift}; expected -1, 0 or +1")]
    BadShift { index: usize, shift: i64 },
}

/// Errors from reading a graph description file.
#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed graph description: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Invalid(#[from] GraphError),
}

/// A validated Z-periodic chain graph.
///
/// Immutable after validation; cheap to clone and safe to share across
/// threads. Degrees are those of the infinite graph: every connecting edge
/// contributes 1 to the degree of each endpoint in its own cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicChainGraph {
    n: usize,
    edges: Vec<Edge>,
    degrees: Vec<usize>,
}

/// Validate a raw cell description.
///
/// Checks vertex ids and shifts, rejects intra-cell self-loops and
/// multi-edges (the key `(min(u,v), max(u,v), shift)` must be unique),
/// requires at least one connecting edge, and requires the infinite graph
/// to be connected. Edges are stored in a canonical order so that equal
/// graphs have identical descriptions.
pub fn validate(desc: &CellDescription) -> Result<PeriodicChainGraph, GraphError> {
    let n = desc.vertices;
    let mut edges: Vec<Edge> = Vec::with_capacity(desc.edges.len());
    let mut seen: HashSet<(usize, usize, u8)> = HashSet::new();

    for (index, raw) in desc.edges.iter().enumerate() {
        let [u_raw, v_raw, shift_raw] = *raw;
        for id in [u_raw, v_raw] {
            if id < 0 || id as usize >= n {
                return Err(GraphError::BadVertexId { id, vertices: n });
            }
        }
        let (mut u, mut v) = (u_raw as usize, v_raw as usize);
        let shift = match shift_raw {
            0 => {
                if u == v {
                    return Err(GraphError::SelfLoopIntraCell { index, v: u });
                }
                if u > v {
                    std::mem::swap(&mut u, &mut v);
                }
                0
            }
            1 => 1,
            -1 => {
                // an edge to the previous copy, re-expressed from the
                // earlier cell's side
                std::mem::swap(&mut u, &mut v);
                1
            }
            shift => return Err(GraphError::BadShift { index, shift }),
        };
        if !seen.insert((u.min(v), u.max(v), shift)) {
            return Err(GraphError::DuplicateEdge {
                index,
                u: u_raw as usize,
                v: v_raw as usize,
                shift: shift_raw,
            });
        }
        edges.push(Edge { u, v, shift });
    }

    if !edges.iter().any(|e| e.shift == 1) {
        return Err(GraphError::NoConnectingEdge);
    }

    let mut degrees = vec![0usize; n];
    for e in &edges {
        degrees[e.u] += 1;
        degrees[e.v] += 1;
    }

    check_connected(n, &edges)?;

    edges.sort_by_key(|e| (e.shift, e.u, e.v));
    Ok(PeriodicChainGraph { n, edges, degrees })
}

/// Connectivity of the infinite graph.
///
/// The quotient (the cell with connecting edges identified across one
/// period) must be connected, and the net shifts accumulated around its
/// cycles must generate all of Z: otherwise the infinite graph splits into
/// several translation classes even though the quotient is connected.
fn check_connected(n: usize, edges: &[Edge]) -> Result<(), GraphError> {
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push((e.v, e.shift as i64));
        adj[e.v].push((e.u, -(e.shift as i64)));
    }

    // BFS assigning each vertex the net shift of its tree path from vertex
    // 0; every non-tree edge closes a cycle whose net shift feeds the gcd.
    let mut potential: Vec<Option<i64>> = vec![None; n];
    potential[0] = Some(0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut gcd: i64 = 0;
    while let Some(u) = queue.pop_front() {
        let xu = potential[u].unwrap();
        for &(v, s) in &adj[u] {
            match potential[v] {
                None => {
                    potential[v] = Some(xu + s);
                    queue.push_back(v);
                }
                Some(xv) => {
                    gcd = gcd_i64(gcd, (xu + s - xv).abs());
                }
            }
        }
    }

    if let Some(v) = potential.iter().position(Option::is_none) {
        return Err(GraphError::DisconnectedGraph {
            detail: format!("vertex {v} is unreachable from vertex 0"),
        });
    }
    if gcd != 1 {
        let detail = if gcd == 0 {
            "no cycle crosses the period boundary".to_string()
        } else {
            format!("translations connect only every {gcd}-th copy of the cell")
        };
        return Err(GraphError::DisconnectedGraph { detail });
    }
    Ok(())
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd_i64(b, a % b) }
}

impl PeriodicChainGraph {
    /// Number of vertices in the fundamental cell.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Canonically ordered edges.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Degrees of the cell vertices in the infinite graph.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Degree of vertex `v` in the infinite graph.
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.degrees.get(v).copied().ok_or(GraphError::BadVertexId {
            id: v as i64,
            vertices: self.n,
        })
    }

    /// Number of edges joining consecutive copies of the cell (`m`).
    pub fn connecting_multiplicity(&self) -> usize {
        self.edges.iter().filter(|e| e.shift == 1).count()
    }

    /// The canonical cell description of this graph; `validate` on it
    /// reproduces the graph exactly.
    pub fn description(&self) -> CellDescription {
        CellDescription {
            vertices: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| [e.u as i64, e.v as i64, e.shift as i64])
                .collect(),
        }
    }

    /// Serialise the canonical description as a graph file.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.description()).expect("cell description serialises")
    }

    /// Parse and validate a graph description from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self, GraphFileError> {
        let desc: CellDescription = toml::from_str(text)?;
        Ok(validate(&desc)?)
    }

    /// Read and validate a graph description file.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, GraphFileError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| GraphFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }
}
