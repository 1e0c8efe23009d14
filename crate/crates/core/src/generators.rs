//! Small graph families and random graphs, mostly for tests and examples.

use rand::Rng;

use crate::graph::{LabelId, LabeledGraph};

/// Path on `n` nodes, `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> LabeledGraph {
    LabeledGraph::unlabeled(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> LabeledGraph {
    LabeledGraph::unlabeled(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> LabeledGraph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    LabeledGraph::unlabeled(n, edges).expect("valid clique")
}

/// Star `K_{1,leaves}`; node 0 is the center.
pub fn star(leaves: usize) -> LabeledGraph {
    LabeledGraph::unlabeled(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
}

/// Erdős–Rényi graph with labels drawn uniformly from `0..num_labels`.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    edge_prob: f64,
    num_labels: u32,
) -> LabeledGraph {
    let labels = (0..n)
        .map(|_| LabelId(rng.random_range(0..num_labels.max(1))))
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::new(labels, edges).expect("valid random graph")
}

/// Random connected unlabeled graph: a random spanning tree plus extra edges.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, extra_prob: f64) -> LabeledGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(extra_prob) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::unlabeled(n, edges).expect("valid connected graph")
}
