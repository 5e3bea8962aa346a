//! High-girth bipartite graphs from triangular incidence systems over a
//! prime field, and girth boosting of block instances.
//!
//! The family `D(r, q)` has two copies of the r-dimensional vectors over
//! `F_q` as nodes; a pair is adjacent when the first `r - 1` incidence
//! equations hold. Fixing one endpoint and the first coordinate of the
//! other determines the rest as a lower-triangular linear system, so
//! every node has degree exactly `q`, and for odd `r >= 3` the girth is
//! at least `r + 5`.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::par::{map_indexed, Execution};

pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    P,
    L,
}

fn fq_mul(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Right-hand side of the incidence equation fixing coordinate `j`:
/// always a product of one earlier-solved coordinate with a first
/// coordinate of the opposite side.
fn incidence_rhs(j: usize, l: &[u64], p: &[u64], q: u64) -> u64 {
    match j {
        0 => unreachable!("first coordinates are free"),
        1 => fq_mul(l[0], p[0], q),
        2 => fq_mul(l[1], p[0], q),
        3 => fq_mul(l[0], p[1], q),
        _ => match j % 4 {
            1 | 2 => fq_mul(l[j - 2], p[0], q),
            _ => fq_mul(l[0], p[j - 2], q),
        },
    }
}

/// The unique neighbor of `v` whose first coordinate is `first`.
/// Solves the first `r - 1` incidence equations as a lower-triangular
/// system for the unknown side.
pub fn dq_unique_neighbor(v: &[u64], first: u64, side: Side, q: u64) -> Vec<u64> {
    let r = v.len();
    let mut out = vec![0u64; r];
    out[0] = first;
    match side {
        // v is a point; solve for the line: l_j = p_j + rhs_j.
        Side::P => {
            for j in 1..r {
                out[j] = (v[j] + incidence_rhs(j, &out, v, q)) % q;
            }
        }
        // v is a line; solve for the point: p_j = l_j - rhs_j.
        Side::L => {
            for j in 1..r {
                let rhs = incidence_rhs(j, v, &out, q);
                out[j] = (v[j] + q - rhs) % q;
            }
        }
    }
    out
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64 with the standard witness set.
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = fq_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fq_mul(acc, base, modulus);
        }
        base = fq_mul(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Smallest prime at least `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

fn vector_of_index(mut idx: u64, r: u32, q: u64) -> Vec<u64> {
    (0..r)
        .map(|_| {
            let c = idx % q;
            idx /= q;
            c
        })
        .collect()
}

fn index_of_vector(v: &[u64], q: u64) -> u64 {
    v.iter().rev().fold(0u64, |acc, &c| acc * q + c)
}

/// The full incidence graph: `2 q^r` nodes (points first, lines second),
/// every node of degree `q`.
pub fn dq_graph(r: u32, q: u64) -> Result<Graph> {
    dq_graph_with_budget(r, q, DEFAULT_NODE_BUDGET)
}

pub fn dq_graph_with_budget(r: u32, q: u64, budget: usize) -> Result<Graph> {
    if r < 2 {
        return Err(Error::InvalidGraph("need r >= 2".into()));
    }
    if !is_prime_u64(q) {
        return Err(Error::InvalidGraph(format!("{q} is not prime")));
    }
    let qr = (q as u128).checked_pow(r).ok_or(Error::SizeGuard {
        need: u128::MAX,
        budget: budget as u128,
    })?;
    let need = 2 * qr;
    if need > budget as u128 {
        return Err(Error::SizeGuard {
            need,
            budget: budget as u128,
        });
    }
    let qr = qr as u64;
    let mut edges = Vec::with_capacity((qr * q) as usize);
    for p_idx in 0..qr {
        let p = vector_of_index(p_idx, r, q);
        for l1 in 0..q {
            let l = dq_unique_neighbor(&p, l1, Side::P, q);
            let l_idx = index_of_vector(&l, q);
            edges.push((p_idx as NodeId, (qr + l_idx) as NodeId));
        }
    }
    Graph::from_edges(2 * qr as usize, edges)
}

// ---------------------------------------------------------------------------
// Girth boosting
// ---------------------------------------------------------------------------

/// Replaces every node of a bipartite instance by `q^(r-1)` copies and
/// keeps exactly the incidence edges whose first coordinates encode an
/// input edge. Per-node degrees survive (one incidence neighbor per
/// original neighbor), cycles shorter than the incidence girth vanish.
///
/// `sides[v]` gives `v`'s partition. `q` is the smallest prime covering
/// the larger partition, `r = max(3, 2k - 3)` (odd), so the result has
/// girth at least `r + 5 >= 2k + 1` and at most `2 m q^(r-1)` nodes.
/// Labels are inherited from the input nodes.
pub fn girth_boost(g: &Graph, sides: &[bool], k: u32) -> Result<Graph> {
    girth_boost_with_budget(g, sides, k, DEFAULT_NODE_BUDGET, Execution::default())
}

pub fn girth_boost_with_budget(
    g: &Graph,
    sides: &[bool],
    k: u32,
    budget: usize,
    mode: Execution,
) -> Result<Graph> {
    if k < 2 {
        return Err(Error::InvalidGraph(
            "girth boosting starts at k = 2; smaller k needs no boost".into(),
        ));
    }
    if sides.len() != g.node_count() {
        return Err(Error::InvalidGraph("side assignment length mismatch".into()));
    }
    if g.edges().any(|(u, v)| sides[u as usize] == sides[v as usize]) {
        return Err(Error::InvalidGraph("side assignment is not a bipartition".into()));
    }
    let p_nodes: Vec<NodeId> = g.nodes().filter(|&v| !sides[v as usize]).collect();
    let l_nodes: Vec<NodeId> = g.nodes().filter(|&v| sides[v as usize]).collect();
    let m = p_nodes.len().max(l_nodes.len()) as u64;
    let q = next_prime(m);
    let r = 3.max(2 * k - 3);

    let cells = (q as u128)
        .checked_pow(r - 1)
        .ok_or(Error::SizeGuard {
            need: u128::MAX,
            budget: budget as u128,
        })?;
    let need = (g.node_count() as u128) * cells;
    if need > budget as u128 {
        return Err(Error::SizeGuard {
            need,
            budget: budget as u128,
        });
    }
    let cells = cells as u64;

    // Field labels: position within the partition.
    let mut code = vec![0u64; g.node_count()];
    let mut position = vec![0u64; g.node_count()];
    for (i, &v) in p_nodes.iter().enumerate() {
        code[v as usize] = i as u64;
        position[v as usize] = i as u64;
    }
    for (i, &v) in l_nodes.iter().enumerate() {
        code[v as usize] = i as u64;
        position[v as usize] = i as u64;
    }
    let p_total = p_nodes.len() as u64 * cells;
    // Boosted id of the copy `suffix` of original node `v`.
    let boosted_id = |v: NodeId, suffix: u64| -> NodeId {
        let base = position[v as usize] * cells + suffix;
        if sides[v as usize] {
            (p_total + base) as NodeId
        } else {
            base as NodeId
        }
    };

    // One incidence edge per (input edge, point-side copy).
    let edge_list: Vec<(NodeId, NodeId)> = g
        .edges()
        .map(|(u, v)| if sides[u as usize] { (v, u) } else { (u, v) })
        .collect();
    let chunks = map_indexed(mode, edge_list.len(), |idx| {
        let (pu, lv) = edge_list[idx];
        let mut out = Vec::with_capacity(cells as usize);
        let mut p_vec = vec![0u64; r as usize];
        p_vec[0] = code[pu as usize];
        for suffix in 0..cells {
            let mut s = suffix;
            for j in 1..r as usize {
                p_vec[j] = s % q;
                s /= q;
            }
            let l_vec = dq_unique_neighbor(&p_vec, code[lv as usize], Side::P, q);
            let l_suffix = l_vec[1..]
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc * q + c);
            out.push((boosted_id(pu, suffix), boosted_id(lv, l_suffix)));
        }
        out
    });

    let total = (p_nodes.len() + l_nodes.len()) as u64 * cells;
    let edges: Vec<(NodeId, NodeId)> = chunks.into_iter().flatten().collect();
    let mut boosted = Graph::from_edges(total as usize, edges)?;

    if let Some(labels) = g.labels() {
        let mut new_labels = vec![0i64; total as usize];
        for v in g.nodes() {
            for suffix in 0..cells {
                new_labels[boosted_id(v, suffix) as usize] = labels[v as usize];
            }
        }
        boosted = boosted.with_labels(new_labels)?;
    }
    Ok(boosted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn unique_neighbor_worked_example() {
        // r = 2, q = 3, point (1, 2), first line coordinate 2:
        // l_{1,1} = p_{1,1} + l_1 p_1 = 2 + 2 = 4 = 1 (mod 3).
        let l = dq_unique_neighbor(&[1, 2], 2, Side::P, 3);
        assert_eq!(l, vec![2, 1]);
    }

    #[test]
    fn unique_neighbor_round_trips() {
        let (r, q) = (3u32, 3u64);
        let qr = q.pow(r);
        for p_idx in 0..qr {
            let p = vector_of_index(p_idx, r, q);
            for l1 in 0..q {
                let l = dq_unique_neighbor(&p, l1, Side::P, q);
                let back = dq_unique_neighbor(&l, p[0], Side::L, q);
                assert_eq!(back, p, "p_idx {p_idx} l1 {l1}");
            }
        }
    }

    #[test]
    fn sweeping_first_coordinates_gives_distinct_neighbors() {
        let (_r, q) = (5u32, 5u64);
        let p = vec![1, 4, 2, 0, 3];
        let mut seen = std::collections::HashSet::new();
        for l1 in 0..q {
            seen.insert(dq_unique_neighbor(&p, l1, Side::P, q));
        }
        assert_eq!(seen.len(), q as usize);
    }

    #[test]
    fn d22_shape() {
        let g = dq_graph(2, 2).unwrap();
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.edge_count(), 8);
        assert!(g.nodes().all(|v| g.degree(v) == 2));
    }

    #[test]
    fn d33_girth_and_regularity() {
        let g = dq_graph(3, 3).unwrap();
        assert_eq!(g.node_count(), 54);
        assert_eq!(g.edge_count(), 81);
        assert!(g.nodes().all(|v| g.degree(v) == 3));
        assert!(g.bipartition().is_some());
        let girth = g.girth().unwrap();
        assert!(girth >= 8, "girth {girth} below r + 5");
    }

    #[test]
    fn primality_helpers() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(67));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert_eq!(next_prime(64), 67);
        assert_eq!(next_prime(13), 13);
    }

    #[test]
    fn boost_of_a_cycle_preserves_degrees_and_kills_short_cycles() {
        let g = gen::cycle(6).with_labels(vec![7, 8, 9, 10, 11, 12]).unwrap();
        let sides: Vec<bool> = (0..6).map(|v| v % 2 == 1).collect();
        let boosted = girth_boost(&g, &sides, 2).unwrap();
        // m = 3, q = 3, r = 3: six originals times q^2 copies.
        assert_eq!(boosted.node_count(), 6 * 9);
        assert!(boosted.nodes().all(|v| boosted.degree(v) == 2));
        // Original girth 6 disappears; the incidence girth takes over.
        assert!(boosted
            .shortest_cycle_at_most(7, Execution::default())
            .is_none());
        // Labels follow the originals: 9 copies each.
        let mut counts = std::collections::HashMap::new();
        for v in boosted.nodes() {
            *counts.entry(boosted.label(v).unwrap()).or_insert(0u32) += 1;
        }
        assert!(counts.values().all(|&c| c == 9));
    }

    #[test]
    fn boost_rejects_bad_inputs() {
        let g = gen::complete(3);
        let sides = vec![false, true, false];
        assert!(girth_boost(&g, &sides, 2).is_err()); // odd cycle
        let p = gen::path(4);
        assert!(girth_boost(&p, &[false, true, false, true], 1).is_err()); // k too small
    }
}
