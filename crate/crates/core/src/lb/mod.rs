//! Lower-bound graph machinery: degree sequences, cluster trees, block
//! instantiations, finite-field girth boosting, the doubled matching
//! variant, and computational verification of view equality.

mod cluster_tree;
mod delta;
mod dq;
mod naive;

pub use cluster_tree::{
    build_cluster_tree, minimal_n0, unroll_cluster_view, unroll_hk_view, Cluster, ClusterTree,
    Entry,
};
pub use delta::DeltaSequence;
pub use dq::{
    dq_graph, dq_graph_with_budget, dq_unique_neighbor, girth_boost, girth_boost_with_budget,
    next_prime, Side,
};
pub use naive::{
    build_hk, instantiate_naive, instantiate_naive_with_budget, level_sides, DEFAULT_NODE_BUDGET,
};

use crate::error::Result;
use crate::graph::Graph;
use crate::par::Execution;
use crate::view::views_equal;
use num::BigUint;

/// View equality at radius `k`: nodes of the first two clusters cannot
/// be told apart in `k` rounds. This is the computational check of the
/// construction's central claim.
pub fn check_view_equality(ct: &ClusterTree) -> bool {
    let v0 = unroll_cluster_view(ct, 0, Entry::None, ct.k);
    let v1 = unroll_cluster_view(ct, 1, Entry::None, ct.k);
    views_equal(v0, v1, ct.k)
}

/// Same check in the doubled family: the four clusters `C_0`, `C_1` and
/// their mirror images are pairwise k-equal. Mirror views coincide by
/// construction, so the cross pair decides.
pub fn check_hk_view_equality(ct: &ClusterTree) -> bool {
    let v0 = unroll_hk_view(ct, 0, Entry::None, ct.k);
    let v1 = unroll_hk_view(ct, 1, Entry::None, ct.k);
    views_equal(v0, v1, ct.k)
}

/// Boosts a materialized cluster instance, using level parity as the
/// bipartition.
pub fn boost_cluster_instance(
    ct: &ClusterTree,
    naive: &Graph,
    budget: usize,
    mode: Execution,
) -> Result<Graph> {
    let sides = level_sides(ct, naive);
    girth_boost_with_budget(naive, &sides, ct.k, budget, mode)
}

/// Node count the boosted instance of this tree would have, computed
/// arithmetically: `2 m q^(r-1)` for the larger partition size `m`, the
/// smallest prime `q >= m` and odd `r = max(3, 2k - 3)`.
pub fn projected_boosted_nodes(ct: &ClusterTree) -> Option<BigUint> {
    let m = u64::try_from(ct.larger_partition()).ok()?;
    let q = BigUint::from(next_prime(m));
    let r = 3.max(2 * ct.k - 3);
    Some(BigUint::from(2u32) * BigUint::from(m) * q.pow(r - 1))
}

/// The closed-form cap `2^(4k^3 + 4k) * delta^(4k^2)` on boosted
/// instance sizes for the canonical sequences.
pub fn boosted_node_bound(delta: u64, k: u32) -> BigUint {
    let k3 = 4 * (k as u64).pow(3) + 4 * k as u64;
    let k2 = 4 * k * k;
    BigUint::from(2u32).pow(k3 as u32) * BigUint::from(delta).pow(k2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(deltas: &DeltaSequence, k: u32) -> ClusterTree {
        let n0 = minimal_n0(k, deltas).unwrap();
        build_cluster_tree(k, deltas, n0).unwrap()
    }

    #[test]
    fn view_equality_up_to_k5_doubling_sequence() {
        for k in 1..=5 {
            let ct = tree(&DeltaSequence::doubling(k), k);
            assert!(check_view_equality(&ct), "k = {k}");
        }
    }

    #[test]
    fn view_equality_up_to_k5_paper_sequence() {
        for k in 1..=5 {
            let ct = tree(&DeltaSequence::paper(4, k).unwrap(), k);
            assert!(check_view_equality(&ct), "k = {k}");
        }
    }

    #[test]
    fn hk_view_equality_up_to_k5() {
        for k in 1..=5 {
            let ct = tree(&DeltaSequence::doubling(k), k);
            assert!(check_hk_view_equality(&ct), "k = {k}");
        }
    }

    #[test]
    fn boosted_size_bound_holds_arithmetically() {
        for (delta, k) in [(4u64, 2u32), (4, 3), (4, 5), (8, 2), (8, 3)] {
            let ct = tree(&DeltaSequence::paper(delta, k).unwrap(), k);
            let projected = projected_boosted_nodes(&ct).expect("fits u64");
            let bound = boosted_node_bound(delta, k);
            assert!(
                projected <= bound,
                "delta={delta} k={k}: {projected} > {bound}"
            );
        }
    }

    #[test]
    fn node_level_views_match_cluster_unrolling_at_k1() {
        // The naive instance of the base tree has girth 4 >= 2k + 1, so
        // node views are trees and the two granularities must agree.
        let ct = tree(&DeltaSequence::doubling(1), 1);
        let g = instantiate_naive(&ct, 3).unwrap();
        let plain = g.strip_labels();
        for v in g.nodes() {
            let cluster = g.label(v).unwrap() as usize;
            let node_view = plain.khop_view(v, 1).unwrap();
            let cluster_view = unroll_cluster_view(&ct, cluster, Entry::None, 1);
            assert_eq!(node_view, cluster_view, "node {v} cluster {cluster}");
        }
    }
}
