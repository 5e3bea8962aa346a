//! Deterministic graph generators for experiments and tests.

use crate::graph::{Graph, NodeId};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| ((i - 1) as NodeId, i as NodeId))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let edges = (0..n).map(|i| {
        let j = (i + 1) % n;
        (i.min(j) as NodeId, i.max(j) as NodeId)
    });
    Graph::from_edges(n, edges).unwrap()
}

/// Star on `n` nodes with center 0.
pub fn star(n: usize) -> Graph {
    assert!(n >= 1);
    Graph::from_edges(n, (1..n).map(|i| (0, i as NodeId))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u as NodeId, v as NodeId));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Complete bipartite graph; side A is `0..a`, side B is `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u as NodeId, (a + v) as NodeId));
        }
    }
    Graph::from_edges(a + b, edges).unwrap()
}

/// Erdos-Renyi graph with edge probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Uniform random spanning-tree-ish backbone plus `extra` random edges;
/// always connected for `n >= 1`.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    // Random recursive tree: each node attaches to a random predecessor.
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u as NodeId, v as NodeId));
    }
    let mut added = 0;
    let mut guard = 0;
    while added < extra && guard < 50 * extra + 100 {
        guard += 1;
        if n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v) as NodeId, u.max(v) as NodeId);
        if !edges.contains(&e) {
            edges.push(e);
            added += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Isomorphic copy of `g` under a uniformly random node-id permutation.
/// Supplies the "labeling chosen uniformly at random" scenario: the
/// structure is unchanged but all ids are reshuffled.
pub fn random_relabel(g: &Graph, seed: u64) -> (Graph, Vec<NodeId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<NodeId> = (0..g.node_count() as NodeId).collect();
    perm.shuffle(&mut rng);
    (g.relabel_nodes(&perm).unwrap(), perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_have_expected_shapes() {
        assert_eq!(path(5).edge_count(), 4);
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(star(5).max_degree(), 4);
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(complete_bipartite(2, 3).edge_count(), 6);
        assert!(random_connected(20, 10, 3).is_connected());
    }

    #[test]
    fn gnp_is_seed_deterministic() {
        assert_eq!(gnp(15, 0.3, 9), gnp(15, 0.3, 9));
        assert_ne!(gnp(15, 0.3, 9), gnp(15, 0.3, 10));
    }

    #[test]
    fn relabel_preserves_structure() {
        let g = gnp(12, 0.25, 4);
        let (h, _) = random_relabel(&g, 1);
        assert_eq!(g.edge_count(), h.edge_count());
        let mut dg: Vec<usize> = g.nodes().map(|v| g.degree(v)).collect();
        let mut dh: Vec<usize> = h.nodes().map(|v| h.degree(v)).collect();
        dg.sort_unstable();
        dh.sort_unstable();
        assert_eq!(dg, dh);
    }
}
