//! Seeded graph generators shared by the integration tests.

#![allow(dead_code)]

use ctoqw::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random spanning tree on `n` vertices plus each remaining pair with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent, order[i]));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Circulant graph on `n` vertices with offset 1 plus a random subset of
/// the other offsets; always connected and regular.
pub fn random_circulant<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut offsets = vec![1];
    for s in 2..=n / 2 {
        if rng.random_bool(0.5) {
            offsets.push(s);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for &s in &offsets {
            edges.push((i, (i + s) % n));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// `k` disjoint edges `{2i, 2i+1}`.
pub fn disjoint_edges(k: usize) -> Graph {
    Graph::new(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1))).unwrap()
}

/// Row sums of `M = A D^-1` computed straight from the edge list.
pub fn transition_row_sums(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut deg = vec![0usize; n];
    for (a, b) in g.edges() {
        deg[a] += 1;
        deg[b] += 1;
    }
    let mut rows = vec![0.0; n];
    for (a, b) in g.edges() {
        rows[a] += 1.0 / deg[b] as f64;
        rows[b] += 1.0 / deg[a] as f64;
    }
    rows
}

pub fn is_doubly_stochastic(g: &Graph) -> bool {
    transition_row_sums(g).iter().all(|s| (s - 1.0).abs() < 1e-12)
}
