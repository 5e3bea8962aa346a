//! The recursive cluster-tree blueprint and its cluster-level view
//! unrolling.
//!
//! A cluster tree prescribes, for every pair of linked clusters, how many
//! neighbors a node of one cluster has in the other: an arc from `C` to
//! child `D` carrying label index `l` means every node of `C` has `d_l`
//! neighbors in `D` and every node of `D` has `d_{l+1}` neighbors in `C`,
//! which forces `|C| d_l = |D| d_{l+1}`.
//!
//! The base tree has four clusters: the root, two children with label
//! indices 0 and 1, and a grandchild with index 0 under the first child.
//! One growth step to level `j` gives every inner cluster a fresh leaf
//! with index `j`, and every leaf with parent index `p` fresh leaves for
//! all indices `0 ..= j` except `p + 1`.

use super::delta::DeltaSequence;
use crate::error::{Error, Result};
use crate::view::ViewTree;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    /// Parent cluster and the label index `l` of the connecting arc.
    pub parent: Option<(usize, usize)>,
    pub children: Vec<usize>,
    pub level: u32,
    pub size: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTree {
    pub k: u32,
    pub deltas: DeltaSequence,
    pub n0: u128,
    clusters: Vec<Cluster>,
}

impl ClusterTree {
    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster(&self, id: usize) -> &Cluster {
        &self.clusters[id]
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Arcs as (parent, child, label index), in child-id order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.clusters
            .iter()
            .enumerate()
            .filter_map(|(child, c)| c.parent.map(|(p, l)| (p, child, l)))
    }

    /// Distance to the furthest leaf below `id`.
    pub fn depth(&self, id: usize) -> u32 {
        self.clusters[id]
            .children
            .iter()
            .map(|&c| 1 + self.depth(c))
            .max()
            .unwrap_or(0)
    }

    pub fn total_nodes(&self) -> u128 {
        self.clusters.iter().map(|c| c.size).sum()
    }

    /// Node count of the bigger side of the level-parity bipartition.
    pub fn larger_partition(&self) -> u128 {
        let even: u128 = self
            .clusters
            .iter()
            .filter(|c| c.level % 2 == 0)
            .map(|c| c.size)
            .sum();
        let odd: u128 = self.total_nodes() - even;
        even.max(odd)
    }

    /// Incident clusters of `id` with the per-node neighbor multiplicity
    /// seen from `id` toward each: `d_l` toward the child of an arc
    /// labeled `l`, `d_{l+1}` toward the parent.
    pub fn neighbor_multiplicities(&self, id: usize) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        if let Some((parent, l)) = self.clusters[id].parent {
            out.push((parent, self.deltas.get(l + 1)));
        }
        for &child in &self.clusters[id].children {
            let (_, l) = self.clusters[child].parent.expect("child has a parent");
            out.push((child, self.deltas.get(l)));
        }
        out
    }
}

/// Builds the depth-`k` cluster tree with root size `n0`, validating that
/// every cluster size is a positive integer and large enough to host the
/// prescribed bipartite degrees.
pub fn build_cluster_tree(k: u32, deltas: &DeltaSequence, n0: u128) -> Result<ClusterTree> {
    if k < 1 {
        return Err(Error::NonIntegralSizes("k must be at least 1".into()));
    }
    if deltas.max_k() < k {
        return Err(Error::NonIntegralSizes(format!(
            "sequence has {} entries, need {}",
            deltas.len(),
            k + 2
        )));
    }
    if n0 == 0 {
        return Err(Error::NonIntegralSizes("n0 must be positive".into()));
    }

    // Base tree.
    let mut clusters = vec![
        Cluster {
            parent: None,
            children: vec![1, 2],
            level: 0,
            size: n0,
        },
        Cluster {
            parent: Some((0, 0)),
            children: vec![3],
            level: 1,
            size: 0,
        },
        Cluster {
            parent: Some((0, 1)),
            children: vec![],
            level: 1,
            size: 0,
        },
        Cluster {
            parent: Some((1, 0)),
            children: vec![],
            level: 2,
            size: 0,
        },
    ];

    // Growth steps to level j.
    for j in 2..=(k as usize) {
        let existing = clusters.len();
        for id in 0..existing {
            if !clusters[id].children.is_empty() {
                // Inner cluster: one fresh leaf with label index j.
                push_child(&mut clusters, id, j);
            } else {
                // Leaf: fresh leaves on every index except p + 1.
                let (_, p) = clusters[id].parent.expect("non-root leaf");
                for m in 0..=j {
                    if m != p + 1 {
                        push_child(&mut clusters, id, m);
                    }
                }
            }
        }
    }

    // Sizes propagate down by the arc-label ratio.
    for id in 1..clusters.len() {
        let (parent, l) = clusters[id].parent.unwrap();
        let parent_size = clusters[parent].size;
        let num = parent_size
            .checked_mul(deltas.get(l) as u128)
            .ok_or_else(|| Error::NonIntegralSizes("size overflow".into()))?;
        let den = deltas.get(l + 1) as u128;
        if num % den != 0 {
            return Err(Error::NonIntegralSizes(format!(
                "cluster {id} has non-integral size {num}/{den}"
            )));
        }
        clusters[id].size = num / den;
    }

    let tree = ClusterTree {
        k,
        deltas: deltas.clone(),
        n0,
        clusters,
    };

    // Realizability: on an arc (C, D) with label l, nodes of D need d_{l+1}
    // distinct neighbors in C and nodes of C need d_l in D.
    for (parent, child, l) in tree.arcs() {
        let pc = tree.cluster(parent).size;
        let cc = tree.cluster(child).size;
        if pc < deltas.get(l + 1) as u128 || cc < deltas.get(l) as u128 {
            return Err(Error::NonIntegralSizes(format!(
                "arc ({parent},{child}) with label {l}: sizes {pc}/{cc} below degrees"
            )));
        }
    }
    Ok(tree)
}

fn push_child(clusters: &mut Vec<Cluster>, parent: usize, label: usize) {
    let id = clusters.len();
    let level = clusters[parent].level + 1;
    clusters.push(Cluster {
        parent: Some((parent, label)),
        children: vec![],
        level,
        size: 0,
    });
    clusters[parent].children.push(id);
}

/// Smallest power-of-two root size for which the tree is buildable and
/// block-instantiable (all sizes integral, large enough, and divisible
/// into complete-bipartite groups). Sequences with non-power-of-two
/// ratios may need an explicit `n0` instead.
pub fn minimal_n0(k: u32, deltas: &DeltaSequence) -> Result<u128> {
    for exp in 0..100u32 {
        let n0 = 1u128 << exp;
        if let Ok(tree) = build_cluster_tree(k, deltas, n0) {
            let divisible = tree.arcs().all(|(parent, child, l)| {
                tree.cluster(parent).size % deltas.get(l + 1) as u128 == 0
                    && tree.cluster(child).size % deltas.get(l) as u128 == 0
            });
            if divisible {
                return Ok(n0);
            }
        }
    }
    Err(Error::NonIntegralSizes(
        "no power-of-two root size fits; pass an explicit n0".into(),
    ))
}

// ---------------------------------------------------------------------------
// Cluster-level view unrolling
// ---------------------------------------------------------------------------

/// How the unrolling entered the current cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    /// The root of the view: a node of the cluster itself.
    None,
    /// Entered from an adjacent cluster; one return edge is consumed.
    From(usize),
    /// Entered over the counterpart matching edge of the doubled family.
    Matching,
}

/// Unrolls the view a node in cluster `start` sees to the given depth,
/// at cluster granularity: toward every adjacent cluster it emits as
/// many identical subtrees as the arc multiplicity prescribes, minus the
/// one edge that leads back where we came from.
pub fn unroll_cluster_view(
    ct: &ClusterTree,
    start: usize,
    entry: Entry,
    depth: u32,
) -> ViewTree {
    let mut memo = HashMap::new();
    unroll(ct, start, entry, depth, false, &mut memo)
}

/// Same unrolling in the doubled family: two identical copies of the
/// instance joined by a perfect matching, modeled as one extra
/// multiplicity-1 link from every cluster to its mirror image.
pub fn unroll_hk_view(ct: &ClusterTree, start: usize, entry: Entry, depth: u32) -> ViewTree {
    let mut memo = HashMap::new();
    unroll(ct, start, entry, depth, true, &mut memo)
}

fn unroll(
    ct: &ClusterTree,
    cluster: usize,
    entry: Entry,
    depth: u32,
    doubled: bool,
    memo: &mut HashMap<(usize, Entry, u32), ViewTree>,
) -> ViewTree {
    if depth == 0 {
        return ViewTree::leaf(None);
    }
    let key = (cluster, entry, depth);
    if let Some(&t) = memo.get(&key) {
        return t;
    }
    let mut children: Vec<(u64, ViewTree)> = Vec::new();
    for (other, mult) in ct.neighbor_multiplicities(cluster) {
        let mult = if entry == Entry::From(other) {
            mult - 1
        } else {
            mult
        };
        if mult > 0 {
            let sub = unroll(ct, other, Entry::From(cluster), depth - 1, doubled, memo);
            children.push((mult, sub));
        }
    }
    if doubled && entry != Entry::Matching {
        // The mirror copy is isomorphic, so the counterpart's subtree is
        // this cluster's own unrolling entered over the matching edge.
        let sub = unroll(ct, cluster, Entry::Matching, depth - 1, doubled, memo);
        children.push((1, sub));
    }
    let tree = ViewTree::branch(None, children);
    memo.insert(key, tree);
    tree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::view::views_equal;

    fn doubling_tree(k: u32) -> ClusterTree {
        let deltas = DeltaSequence::doubling(k);
        let n0 = minimal_n0(k, &deltas).unwrap();
        build_cluster_tree(k, &deltas, n0).unwrap()
    }

    #[test]
    fn base_tree_matches_the_definition() {
        let deltas = DeltaSequence::custom(vec![1, 2, 4]).unwrap();
        let ct = build_cluster_tree(1, &deltas, 8).unwrap();
        assert_eq!(ct.cluster_count(), 4);
        let arcs: Vec<_> = ct.arcs().collect();
        assert_eq!(arcs, vec![(0, 1, 0), (0, 2, 1), (1, 3, 0)]);
        // Sizes: |C1| = 8*1/2 = 4, |C2| = 8*2/4 = 4, |C3| = 4*1/2 = 2.
        assert_eq!(ct.cluster(0).size, 8);
        assert_eq!(ct.cluster(1).size, 4);
        assert_eq!(ct.cluster(2).size, 4);
        assert_eq!(ct.cluster(3).size, 2);
        assert_eq!(ct.depth(0), 2); // k + 1
    }

    #[test]
    fn level_two_tree_shape() {
        let ct = doubling_tree(2);
        assert_eq!(ct.cluster_count(), 10);
        // Depths of the four base clusters.
        let depths: Vec<u32> = (0..4).map(|id| ct.depth(id)).collect();
        assert_eq!(depths, vec![3, 2, 1, 1]);
        assert_eq!(ct.cluster(0).level, 0);
    }

    #[test]
    fn arc_label_size_identity() {
        for k in 1..=5 {
            let ct = doubling_tree(k);
            for (parent, child, l) in ct.arcs() {
                let lhs = ct.cluster(parent).size * ct.deltas.get(l) as u128;
                let rhs = ct.cluster(child).size * ct.deltas.get(l + 1) as u128;
                assert_eq!(lhs, rhs, "k={k} arc ({parent},{child})");
            }
            assert_eq!(ct.depth(0), k + 1);
        }
    }

    #[test]
    fn cluster_counts_grow_as_expected() {
        // 4 clusters at k=1; each step adds one leaf per inner cluster
        // and j leaves per old leaf.
        let counts: Vec<usize> = (1..=5)
            .map(|k| doubling_tree(k).cluster_count())
            .collect();
        assert_eq!(counts, vec![4, 10, 32, 130, 652]);
    }

    #[test]
    fn rejects_undersized_roots() {
        let deltas = DeltaSequence::doubling(2);
        assert!(build_cluster_tree(2, &deltas, 2).is_err());
        assert!(minimal_n0(2, &deltas).unwrap() >= 16);
    }

    #[test]
    fn paper_sequence_node_budget() {
        // Total node count stays within n0 (1 + 2/(delta - 2)) for the
        // canonical sequences with delta > 2.
        for (delta, k) in [(4u64, 2u32), (4, 3), (8, 2), (4, 5)] {
            let deltas = DeltaSequence::paper(delta, k).unwrap();
            let n0 = minimal_n0(k, &deltas).unwrap();
            let ct = build_cluster_tree(k, &deltas, n0).unwrap();
            let total = ct.total_nodes();
            // n <= n0 (1 + 2/(delta-2))  <=>  n (delta-2) <= n0 delta.
            assert!(
                total * (delta as u128 - 2) <= n0 * delta as u128,
                "delta={delta} k={k}: {total} vs n0={n0}"
            );
        }
    }

    #[test]
    fn example_views_at_k1() {
        // Root view of the base tree: d_0 subtrees toward the first
        // child, d_1 toward the second.
        let deltas = DeltaSequence::custom(vec![1, 2, 4]).unwrap();
        let ct = build_cluster_tree(1, &deltas, 8).unwrap();
        let v0 = unroll_cluster_view(&ct, 0, Entry::None, 1);
        assert_eq!(v0.root_degree(), 1 + 2);
        let v1 = unroll_cluster_view(&ct, 1, Entry::None, 1);
        assert_eq!(v1.root_degree(), 1 + 2);
        // Depth-0 unrolling is a single leaf.
        assert_eq!(unroll_cluster_view(&ct, 0, Entry::None, 0).node_count(),
            num::BigUint::from(1u32));
    }

    #[test]
    fn view_equality_at_small_k() {
        for k in 1..=3 {
            let ct = doubling_tree(k);
            let v0 = unroll_cluster_view(&ct, 0, Entry::None, k);
            let v1 = unroll_cluster_view(&ct, 1, Entry::None, k);
            assert!(views_equal(v0, v1, k), "k = {k}");
            // And they differ at depth k + 1: that is the whole point of
            // the construction.
            let w0 = unroll_cluster_view(&ct, 0, Entry::None, k + 1);
            let w1 = unroll_cluster_view(&ct, 1, Entry::None, k + 1);
            assert!(!views_equal(w0, w1, k + 1), "k = {k} at depth k+1");
        }
    }

    #[test]
    fn doubled_family_views_align() {
        for k in 1..=3 {
            let ct = doubling_tree(k);
            let v0 = unroll_hk_view(&ct, 0, Entry::None, k);
            let v1 = unroll_hk_view(&ct, 1, Entry::None, k);
            assert!(views_equal(v0, v1, k), "k = {k}");
            // Degrees grow by exactly one against the single family.
            let single = unroll_cluster_view(&ct, 0, Entry::None, k);
            assert_eq!(v0.root_degree(), single.root_degree() + 1);
        }
    }
}
