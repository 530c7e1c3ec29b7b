//! Canonical constructors for the example graphs and the randomised test
//! fleet.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{validate, CellDescription, PeriodicChainGraph};

fn build(vertices: usize, edges: &[[i64; 3]]) -> PeriodicChainGraph {
    validate(&CellDescription {
        vertices,
        edges: edges.to_vec(),
    })
    .expect("builder cells are valid by construction")
}

/// The Z-periodic graph obtained by folding the square-lattice graph of
/// [HKSW] along one diagonal period: five vertices per cell, two skew
/// connecting edges (`m = 2`).
///
/// Vertices 0..4 carry the 1-based labels 1..5 of the original figure.
/// The connecting-edge orientation is fixed so that the assembled Floquet
/// matrix reproduces the reference 5×5 matrix entrywise, with `e^{+ik}`
/// on rows 1 and 2.
pub fn folded_hksw_graph() -> PeriodicChainGraph {
    build(
        5,
        &[
            [0, 1, 0],
            [0, 4, 0],
            [1, 2, 0],
            [2, 3, 0],
            [2, 4, 0],
            [3, 4, 0],
            [0, 2, 1],
            [1, 3, 1],
        ],
    )
}

/// A chain of triangles joined corner to corner: the simplest non-trivial
/// `m = 1` witness. Degrees (3, 2, 3).
pub fn triangle_chain() -> PeriodicChainGraph {
    build(3, &[[0, 1, 0], [1, 2, 0], [0, 2, 0], [2, 0, 1]])
}

/// Two parallel two-edge paths between consecutive hubs: vertex 0 is the
/// hub, vertices 1 and 2 are the midpoints, and both midpoints connect to
/// the next hub (`m = 2`). Degrees (4, 2, 2).
///
/// The vector (0, +1, -1) is an eigenvector with eigenvalue 0 at every
/// quasi-momentum — the two midpoint rows cancel — so the graph carries a
/// flat band at 0.
pub fn parallel_path_chain() -> PeriodicChainGraph {
    build(3, &[[0, 1, 0], [0, 2, 0], [1, 0, 1], [2, 0, 1]])
}

/// The integer line: one vertex per cell, one edge to its own translate.
/// Its single band function is `cos k`.
pub fn line_graph() -> PeriodicChainGraph {
    build(1, &[[0, 0, 1]])
}

/// A random connected cell with exactly one connecting edge (`m = 1`),
/// deterministic per seed.
///
/// Cells have 2..=`max_cell_vertices` vertices; intra-cell edges are
/// included independently with probability 0.6 and disconnected cells are
/// resampled. The connecting edge endpoints are uniform and may coincide.
pub fn random_m1_chain(seed: u64, max_cell_vertices: usize) -> PeriodicChainGraph {
    assert!(
        (2..=6).contains(&max_cell_vertices),
        "max_cell_vertices must be in 2..=6"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_cell_vertices);

    let intra = loop {
        let mut edges: Vec<[i64; 3]> = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(0.6) {
                    edges.push([u as i64, v as i64, 0]);
                }
            }
        }
        if cell_is_connected(n, &edges) {
            break edges;
        }
    };

    let mut edges = intra;
    let u = rng.random_range(0..n) as i64;
    let v = rng.random_range(0..n) as i64;
    edges.push([u, v, 1]);
    build(n, &edges)
}

fn cell_is_connected(n: usize, intra: &[[i64; 3]]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for e in intra {
        adj[e[0] as usize].push(e[1] as usize);
        adj[e[1] as usize].push(e[0] as usize);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The four named example graphs, handy for sweeping invariants.
pub fn all_example_graphs() -> Vec<PeriodicChainGraph> {
    vec![
        line_graph(),
        triangle_chain(),
        parallel_path_chain(),
        folded_hksw_graph(),
    ]
}
