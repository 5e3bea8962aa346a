//! Materializing a cluster tree as an actual graph via complete
//! bipartite blocks, and the doubled-with-matching variant.

use super::cluster_tree::ClusterTree;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default cap on materialized instance sizes.
pub const DEFAULT_NODE_BUDGET: usize = 20_000_000;

/// Instantiates the blueprint: linked clusters are partitioned into
/// groups joined as complete bipartite blocks, so every node gets exactly
/// the prescribed number of neighbors per adjacent cluster. Node labels
/// carry cluster ids. The seed shuffles each cluster's node order, which
/// varies the instance without touching the degree structure.
pub fn instantiate_naive(ct: &ClusterTree, seed: u64) -> Result<Graph> {
    instantiate_naive_with_budget(ct, seed, DEFAULT_NODE_BUDGET)
}

pub fn instantiate_naive_with_budget(
    ct: &ClusterTree,
    seed: u64,
    budget: usize,
) -> Result<Graph> {
    let total = ct.total_nodes();
    if total > budget as u128 {
        return Err(Error::SizeGuard {
            need: total,
            budget: budget as u128,
        });
    }
    let total = total as usize;

    // Consecutive id ranges per cluster, in cluster order.
    let mut start = Vec::with_capacity(ct.cluster_count());
    let mut next = 0usize;
    for c in ct.clusters() {
        start.push(next);
        next += c.size as usize;
    }

    // Per-cluster node orderings, shuffled per seed.
    let orders: Vec<Vec<NodeId>> = ct
        .clusters()
        .iter()
        .enumerate()
        .map(|(id, c)| {
            let mut order: Vec<NodeId> = (0..c.size as usize)
                .map(|i| (start[id] + i) as NodeId)
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9E37 + id as u64));
            order.shuffle(&mut rng);
            order
        })
        .collect();

    let mut edges = Vec::new();
    for (parent, child, l) in ct.arcs() {
        let dl = ct.deltas.get(l) as usize;
        let dl1 = ct.deltas.get(l + 1) as usize;
        let parent_nodes = &orders[parent];
        let child_nodes = &orders[child];
        if parent_nodes.len() % dl1 != 0 || child_nodes.len() % dl != 0 {
            return Err(Error::NonIntegralSizes(format!(
                "arc ({parent},{child}) does not split into complete blocks"
            )));
        }
        let groups = parent_nodes.len() / dl1;
        debug_assert_eq!(groups, child_nodes.len() / dl);
        for g in 0..groups {
            for u in &parent_nodes[g * dl1..(g + 1) * dl1] {
                for v in &child_nodes[g * dl..(g + 1) * dl] {
                    edges.push((*u, *v));
                }
            }
        }
    }

    let labels: Vec<i64> = ct
        .clusters()
        .iter()
        .enumerate()
        .flat_map(|(id, c)| std::iter::repeat(id as i64).take(c.size as usize))
        .collect();
    Graph::from_edges(total, edges)?.with_labels(labels)
}

/// Level parity of each node, from the cluster-id labels; side `true` is
/// odd levels.
pub fn level_sides(ct: &ClusterTree, g: &Graph) -> Vec<bool> {
    g.nodes()
        .map(|v| {
            let cluster = g.label(v).expect("instance carries cluster labels") as usize;
            ct.cluster(cluster).level % 2 == 1
        })
        .collect()
}

/// Two disjoint copies of `g` plus a perfect matching of counterparts.
/// Copy ids are `v` and `v + n`; labels are preserved per copy.
pub fn build_hk(g: &Graph) -> Graph {
    let n = g.node_count();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(2 * g.edge_count() + n);
    for (u, v) in g.edges() {
        edges.push((u, v));
        edges.push((u + n as NodeId, v + n as NodeId));
    }
    for v in 0..n {
        edges.push((v as NodeId, (v + n) as NodeId));
    }
    let mut out = Graph::from_edges(2 * n, edges).expect("doubled graph is simple");
    if let Some(labels) = g.labels() {
        let doubled: Vec<i64> = labels.iter().chain(labels.iter()).copied().collect();
        out = out.with_labels(doubled).expect("label count matches");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lb::cluster_tree::{build_cluster_tree, minimal_n0};
    use crate::lb::delta::DeltaSequence;
    use crate::oracles::maximum_matching;
    use crate::{gen, par::Execution};

    fn instance(k: u32) -> (ClusterTree, Graph) {
        let deltas = DeltaSequence::doubling(k);
        let n0 = minimal_n0(k, &deltas).unwrap();
        let ct = build_cluster_tree(k, &deltas, n0).unwrap();
        let g = instantiate_naive(&ct, 0).unwrap();
        (ct, g)
    }

    #[test]
    fn k1_instance_sizes_and_degrees() {
        let deltas = DeltaSequence::custom(vec![1, 2, 4]).unwrap();
        let ct = build_cluster_tree(1, &deltas, 8).unwrap();
        let g = instantiate_naive(&ct, 0).unwrap();
        assert_eq!(g.node_count(), 8 + 4 + 4 + 2);
        assert_degrees_match(&ct, &g);
    }

    fn assert_degrees_match(ct: &ClusterTree, g: &Graph) {
        for v in g.nodes() {
            let cluster = g.label(v).unwrap() as usize;
            for (other, mult) in ct.neighbor_multiplicities(cluster) {
                let observed = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| g.label(w).unwrap() as usize == other)
                    .count() as u64;
                assert_eq!(
                    observed, mult,
                    "node {v} of cluster {cluster} toward {other}"
                );
            }
        }
    }

    #[test]
    fn degrees_match_for_k2_and_k3() {
        for k in [2, 3] {
            let (ct, g) = instance(k);
            assert_degrees_match(&ct, &g);
        }
    }

    #[test]
    fn girth_is_four_with_nontrivial_blocks() {
        let (_, g) = instance(2);
        assert_eq!(g.shortest_cycle_at_most(8, Execution::default()), Some(4));
    }

    #[test]
    fn bipartite_by_level_parity() {
        let (ct, g) = instance(2);
        let sides = level_sides(&ct, &g);
        for (u, v) in g.edges() {
            assert_ne!(sides[u as usize], sides[v as usize]);
        }
    }

    #[test]
    fn different_seeds_same_degree_structure() {
        let deltas = DeltaSequence::doubling(2);
        let n0 = minimal_n0(2, &deltas).unwrap();
        let ct = build_cluster_tree(2, &deltas, n0).unwrap();
        let a = instantiate_naive(&ct, 1).unwrap();
        let b = instantiate_naive(&ct, 2).unwrap();
        assert_ne!(a, b);
        assert_degrees_match(&ct, &b);
    }

    #[test]
    fn budget_guard_fires() {
        let deltas = DeltaSequence::doubling(2);
        let n0 = minimal_n0(2, &deltas).unwrap();
        let ct = build_cluster_tree(2, &deltas, n0).unwrap();
        assert!(matches!(
            instantiate_naive_with_budget(&ct, 0, 10),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn doubled_graph_shapes() {
        // A single edge doubles into a 4-cycle.
        let e = gen::path(2);
        let h = build_hk(&e);
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.girth(), Some(4));

        let g = gen::random_connected(9, 4, 3);
        let h = build_hk(&g);
        assert_eq!(h.node_count(), 2 * g.node_count());
        for v in g.nodes() {
            assert_eq!(h.degree(v), g.degree(v) + 1);
            assert_eq!(h.degree(v + 9), g.degree(v) + 1);
        }
        // The counterpart matching is perfect, so the maximum matching
        // covers everything.
        assert_eq!(maximum_matching(&h).len(), g.node_count());
    }
}
