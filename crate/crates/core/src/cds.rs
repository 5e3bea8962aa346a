//! Sparse spanning subgraphs and connected dominating sets.
//!
//! The spanning-subgraph rule removes an edge exactly when it is the
//! unique maximum-weight edge of some cycle of length at most `2k` in
//! the input graph, with all removal predicates evaluated against the
//! original graph and applied at once. Edge weights are the ordered id
//! pairs, so weights are unique and the result depends only on the graph
//! and its ids. The survivor keeps the minimum-weight edge of every cut
//! (hence stays connected) and contains no cycle shorter than `2k + 1`.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, UNREACHED};
use crate::lp::{mds_pipeline_with, MdsParams, MdsRun};
use crate::oracles::{induces_connected, is_dominating_set};
use crate::par::{map_slice, Execution};
use std::collections::VecDeque;

type Edge = (NodeId, NodeId);

/// Lexicographic edge weight: the ordered pair of endpoint ids.
fn weight(e: Edge) -> (NodeId, NodeId) {
    (e.0.min(e.1), e.0.max(e.1))
}

/// Keeps every edge except those closing a short cycle in which they are
/// the heaviest edge. `(V, E')` stays connected and has girth at least
/// `2k + 1`.
pub fn sparse_spanning_subgraph(g: &Graph, k: u32) -> Result<Vec<Edge>> {
    sparse_spanning_subgraph_with(g, k, Execution::default())
}

pub fn sparse_spanning_subgraph_with(g: &Graph, k: u32, mode: Execution) -> Result<Vec<Edge>> {
    if k == 0 {
        return Err(Error::InvalidGraph("k must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let edges: Vec<Edge> = g.edges().collect();
    // An edge is the unique maximum of a cycle of length <= 2k exactly
    // when its endpoints are joined by a path of at most 2k - 1 strictly
    // lighter edges; per-edge checks are independent.
    let removed = map_slice(mode, &edges, |&e| {
        lighter_path_within(g, e, 2 * k - 1)
    });
    Ok(edges
        .into_iter()
        .zip(removed)
        .filter(|(_, r)| !r)
        .map(|(e, _)| e)
        .collect())
}

/// BFS from `e.0` to `e.1` restricted to edges lighter than `e`, depth
/// capped at `limit`.
fn lighter_path_within(g: &Graph, e: Edge, limit: u32) -> bool {
    let w_e = weight(e);
    let (src, dst) = e;
    let mut dist = vec![UNREACHED; g.node_count()];
    dist[src as usize] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        if du == limit {
            continue;
        }
        for &v in g.neighbors(u) {
            if weight((u, v)) < w_e && dist[v as usize] == UNREACHED {
                if v == dst {
                    return true;
                }
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    false
}

/// Connected dominating set obtained from a dominating set `d_set`:
/// spanning tree of the distance-3 auxiliary graph on `d_set`, plus at
/// most two connector nodes per tree edge, giving `|D'| <= 3|D| - 2`.
pub fn connect_dominating_set(g: &Graph, d_set: &[NodeId]) -> Result<Vec<NodeId>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(v) = first_undominated(g, d_set) {
        return Err(Error::NotDominating(v));
    }
    let aux = g.distance_power(d_set, 3)?;
    if !aux.graph.is_connected() {
        // A dominating set of a connected graph always yields a
        // connected distance-3 auxiliary graph.
        return Err(Error::InternalInconsistency(
            "distance-3 auxiliary graph disconnected".into(),
        ));
    }
    let tree = bfs_tree_edges(&aux.graph, 0);
    let mut result: Vec<NodeId> = aux.nodes.clone();
    for (a, b) in tree {
        let u = aux.original(a);
        let v = aux.original(b);
        for w in shortest_path_interior(g, u, v) {
            result.push(w);
        }
    }
    result.sort_unstable();
    result.dedup();
    debug_assert!(result.len() <= 3 * d_set.len().saturating_sub(1) + 1);
    Ok(result)
}

fn first_undominated(g: &Graph, set: &[NodeId]) -> Option<NodeId> {
    let mut dominated = vec![false; g.node_count()];
    for &v in set {
        dominated[v as usize] = true;
        for &w in g.neighbors(v) {
            dominated[w as usize] = true;
        }
    }
    dominated.iter().position(|d| !d).map(|v| v as NodeId)
}

/// BFS tree of `g` rooted at the minimum id of the component; edges as
/// (parent, child).
fn bfs_tree_edges(g: &Graph, root: NodeId) -> Vec<Edge> {
    let mut seen = vec![false; g.node_count()];
    seen[root as usize] = true;
    let mut queue = VecDeque::new();
    queue.push_back(root);
    let mut edges = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !seen[v as usize] {
                seen[v as usize] = true;
                edges.push((u, v));
                queue.push_back(v);
            }
        }
    }
    edges
}

/// Interior nodes of the lexicographically smallest shortest path from
/// `u` to `v`: at each hop the smallest-id neighbor closer to `v`.
fn shortest_path_interior(g: &Graph, u: NodeId, v: NodeId) -> Vec<NodeId> {
    let dist_to_v = g.bfs_distances(v);
    let mut interior = Vec::new();
    let mut cur = u;
    while dist_to_v[cur as usize] > 1 && cur != v {
        let next = g
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|&w| dist_to_v[w as usize] + 1 == dist_to_v[cur as usize])
            .min()
            .expect("path exists");
        if next == v {
            break;
        }
        interior.push(next);
        cur = next;
    }
    interior
}

/// Parameters of the full pipeline: dominating set via the local LP with
/// rounding, then the sparse subgraph of the distance-3 auxiliary graph
/// with parameter `k`, then connectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McdsParams {
    pub mds: MdsParams,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McdsRun {
    /// The intermediate dominating set.
    pub dominating: MdsRun,
    /// Kept edges of the sparse auxiliary subgraph.
    pub kept_aux_edges: usize,
    /// The connected dominating set.
    pub cds: Vec<NodeId>,
}

pub fn mcds_pipeline(g: &Graph, params: McdsParams, seed: u64) -> Result<McdsRun> {
    mcds_pipeline_with(g, params, seed, Execution::default())
}

pub fn mcds_pipeline_with(
    g: &Graph,
    params: McdsParams,
    seed: u64,
    mode: Execution,
) -> Result<McdsRun> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let dominating = mds_pipeline_with(g, params.mds, seed, mode)?;
    let d_set = &dominating.dominating_set;
    let aux = g.distance_power(d_set, 3)?;
    if !aux.graph.is_connected() {
        return Err(Error::InternalInconsistency(
            "distance-3 auxiliary graph disconnected".into(),
        ));
    }
    let kept = sparse_spanning_subgraph_with(&aux.graph, params.k, mode)?;
    let mut cds: Vec<NodeId> = aux.nodes.clone();
    for &(a, b) in &kept {
        let u = aux.original(a);
        let v = aux.original(b);
        cds.extend(shortest_path_interior(g, u, v));
    }
    cds.sort_unstable();
    cds.dedup();
    if !is_dominating_set(g, &cds) || !induces_connected(g, &cds) {
        return Err(Error::InternalInconsistency(
            "pipeline output is not a connected dominating set".into(),
        ));
    }
    Ok(McdsRun {
        dominating,
        kept_aux_edges: kept.len(),
        cds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LpParams;
    use crate::{gen, Graph};

    #[test]
    fn trees_lose_no_edges() {
        let g = gen::path(9);
        let kept = sparse_spanning_subgraph(&g, 2).unwrap();
        assert_eq!(kept.len(), 8);
    }

    #[test]
    fn triangle_drops_exactly_its_heaviest_edge() {
        let g = gen::complete(3);
        for k in [2u32, 3] {
            let kept = sparse_spanning_subgraph(&g, k).unwrap();
            assert_eq!(kept.len(), 2, "k = {k}");
            assert!(!kept.contains(&(1, 2)));
        }
    }

    #[test]
    fn short_cycles_survive_below_threshold() {
        // C_5 has no cycle of length <= 4, so k = 2 keeps everything.
        let g = gen::cycle(5);
        assert_eq!(sparse_spanning_subgraph(&g, 2).unwrap().len(), 5);
        // k = 3 cuts it down to a spanning tree.
        assert_eq!(sparse_spanning_subgraph(&g, 3).unwrap().len(), 4);
    }

    #[test]
    fn output_is_connected_with_high_girth() {
        for seed in 0..20 {
            let g = gen::random_connected(20, 14, seed);
            for k in [1u32, 2, 3] {
                let kept = sparse_spanning_subgraph(&g, k).unwrap();
                let h = Graph::from_edges(g.node_count(), kept).unwrap();
                assert!(h.is_connected(), "seed {seed} k {k}");
                if let Some(girth) = h.girth() {
                    assert!(girth >= 2 * k + 1, "seed {seed} k {k} girth {girth}");
                }
            }
        }
    }

    #[test]
    fn removal_is_id_relabeling_sensitive_but_deterministic() {
        let g = gen::random_connected(12, 8, 3);
        let a = sparse_spanning_subgraph_with(&g, 2, Execution::Sequential).unwrap();
        let b = sparse_spanning_subgraph_with(&g, 2, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            sparse_spanning_subgraph(&g, 2),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn connecting_an_already_connected_set_is_a_no_op() {
        let g = gen::star(7);
        let cds = connect_dominating_set(&g, &[0]).unwrap();
        assert_eq!(cds, vec![0]);
    }

    #[test]
    fn path_dominating_set_gets_bridged() {
        // P_6 with D = {1, 4}: distance 3, so two connectors at most.
        let g = gen::path(6);
        let cds = connect_dominating_set(&g, &[1, 4]).unwrap();
        assert!(is_dominating_set(&g, &cds));
        assert!(induces_connected(&g, &cds));
        assert!(cds.len() <= 4);
        assert!(cds.contains(&1) && cds.contains(&4));
    }

    #[test]
    fn not_dominating_is_reported_with_a_witness() {
        let g = gen::path(7);
        assert!(matches!(
            connect_dominating_set(&g, &[1, 4]),
            Err(Error::NotDominating(6))
        ));
    }

    #[test]
    fn lemma_size_bound_on_random_graphs() {
        use crate::oracles::{exact_solve, Problem};
        for seed in 0..25 {
            let g = gen::random_connected(16, 6, seed);
            let ds = exact_solve(Problem::MinDominatingSet, &g).unwrap();
            let d = match ds.witness {
                crate::oracles::Witness::Nodes(n) => n,
                _ => unreachable!(),
            };
            let cds = connect_dominating_set(&g, &d).unwrap();
            assert!(is_dominating_set(&g, &cds), "seed {seed}");
            assert!(induces_connected(&g, &cds), "seed {seed}");
            assert!(
                cds.len() <= 3 * d.len() - 2 || d.len() == 1,
                "seed {seed}: |D'| = {} vs |D| = {}",
                cds.len(),
                d.len()
            );
        }
    }

    fn small_params() -> McdsParams {
        McdsParams {
            mds: MdsParams::new(LpParams {
                ell: 10,
                p: 0.3,
                radius: 3,
            }),
            k: 2,
        }
    }

    #[test]
    fn pipeline_produces_valid_cds() {
        for (name, g) in [
            ("complete", gen::complete(8)),
            ("cycle", gen::cycle(12)),
            ("random", gen::random_connected(18, 8, 4)),
        ] {
            for seed in 0..4 {
                let run = mcds_pipeline(&g, small_params(), seed).unwrap();
                assert!(is_dominating_set(&g, &run.cds), "{name} seed {seed}");
                assert!(induces_connected(&g, &run.cds), "{name} seed {seed}");
                assert!(!run.cds.is_empty());
            }
        }
    }

    #[test]
    fn pipeline_ratio_against_oracle_on_cycle() {
        use crate::oracles::{exact_solve, Problem};
        let g = gen::cycle(12);
        let opt = exact_solve(Problem::MinConnectedDominatingSet, &g)
            .unwrap()
            .value; // 10
        let run = mcds_pipeline(&g, small_params(), 1).unwrap();
        assert!(run.cds.len() as u64 >= opt);
    }
}
