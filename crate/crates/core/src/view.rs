//! Canonical rooted view trees.
//!
//! A [`ViewTree`] describes the topology a node sees within some radius:
//! a root with a multiset of child subtrees, each child optionally
//! annotated with the label of the node it represents. Identical child
//! subtrees are stored once with a multiplicity, which keeps the
//! cluster-level unrollings of the lower-bound families compact even when
//! multiplicities run into the millions.
//!
//! Trees are hash-consed in a global interner: structurally equal trees
//! always receive the same handle, so equality and hashing are O(1) and
//! deep comparisons of shared subtrees cost nothing. This is the
//! canonical-form guarantee: handle equality coincides with rooted-tree
//! isomorphism (respecting labels and multiplicities).

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, UNREACHED};
use num::BigUint;
use once_cell::sync::Lazy;
use std::collections::{HashMap, VecDeque};
use std::sync::RwLock;

/// Handle to an interned view tree. Copyable; equality is structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewTree(u32);

#[derive(Clone)]
struct ViewNode {
    label: Option<i64>,
    depth: u32,
    /// Sorted by child handle; counts positive; equal children merged.
    children: Vec<(u64, ViewTree)>,
}

#[derive(Default)]
struct Interner {
    nodes: Vec<ViewNode>,
    table: HashMap<(Option<i64>, Vec<(u64, ViewTree)>), u32>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| RwLock::new(Interner::default()));

fn intern(label: Option<i64>, children: Vec<(u64, ViewTree)>) -> ViewTree {
    let key = (label, children);
    {
        let guard = INTERNER.read().unwrap();
        if let Some(&idx) = guard.table.get(&key) {
            return ViewTree(idx);
        }
    }
    let mut guard = INTERNER.write().unwrap();
    if let Some(&idx) = guard.table.get(&key) {
        return ViewTree(idx);
    }
    let depth = key
        .1
        .iter()
        .map(|&(_, c)| guard.nodes[c.0 as usize].depth + 1)
        .max()
        .unwrap_or(0);
    let idx = guard.nodes.len() as u32;
    guard.nodes.push(ViewNode {
        label: key.0,
        depth,
        children: key.1.clone(),
    });
    guard.table.insert(key, idx);
    ViewTree(idx)
}

fn fetch(t: ViewTree) -> ViewNode {
    INTERNER.read().unwrap().nodes[t.0 as usize].clone()
}

impl ViewTree {
    pub fn leaf(label: Option<i64>) -> ViewTree {
        intern(label, Vec::new())
    }

    /// Builds a tree from child subtrees with multiplicities. Children are
    /// canonicalized: zero counts dropped, equal subtrees merged, order
    /// normalized.
    pub fn branch(label: Option<i64>, children: Vec<(u64, ViewTree)>) -> ViewTree {
        let mut merged: HashMap<ViewTree, u64> = HashMap::new();
        for (count, child) in children {
            if count > 0 {
                *merged.entry(child).or_insert(0) += count;
            }
        }
        let mut list: Vec<(u64, ViewTree)> = merged.into_iter().map(|(c, n)| (n, c)).collect();
        list.sort_unstable_by_key(|&(_, c)| c);
        intern(label, list)
    }

    pub fn label(self) -> Option<i64> {
        fetch(self).label
    }

    /// Hops from the root to the deepest leaf.
    pub fn depth(self) -> u32 {
        fetch(self).depth
    }

    pub fn children(self) -> Vec<(u64, ViewTree)> {
        fetch(self).children
    }

    /// Number of edges at the root (child multiplicities summed).
    pub fn root_degree(self) -> u64 {
        fetch(self).children.iter().map(|&(n, _)| n).sum()
    }

    /// Total number of tree nodes, multiplicities included.
    pub fn node_count(self) -> BigUint {
        fn go(t: ViewTree, memo: &mut HashMap<ViewTree, BigUint>) -> BigUint {
            if let Some(v) = memo.get(&t) {
                return v.clone();
            }
            let mut total = BigUint::from(1u32);
            for (count, child) in t.children() {
                total += BigUint::from(count) * go(child, memo);
            }
            memo.insert(t, total.clone());
            total
        }
        go(self, &mut HashMap::new())
    }

    /// Depth-`r` truncation; itself a valid view tree.
    pub fn truncate(self, r: u32) -> ViewTree {
        fn go(t: ViewTree, r: u32, memo: &mut HashMap<(ViewTree, u32), ViewTree>) -> ViewTree {
            if t.depth() <= r {
                return t;
            }
            if let Some(&v) = memo.get(&(t, r)) {
                return v;
            }
            let node = fetch(t);
            let out = if r == 0 {
                ViewTree::leaf(node.label)
            } else {
                let children = node
                    .children
                    .into_iter()
                    .map(|(n, c)| (n, go(c, r - 1, memo)))
                    .collect();
                ViewTree::branch(node.label, children)
            };
            memo.insert((t, r), out);
            out
        }
        go(self, r, &mut HashMap::new())
    }

    /// Identical tree with every label removed.
    pub fn strip_labels(self) -> ViewTree {
        fn go(t: ViewTree, memo: &mut HashMap<ViewTree, ViewTree>) -> ViewTree {
            if let Some(&v) = memo.get(&t) {
                return v;
            }
            let node = fetch(t);
            let children = node
                .children
                .into_iter()
                .map(|(n, c)| (n, go(c, memo)))
                .collect();
            let out = ViewTree::branch(None, children);
            memo.insert(t, out);
            out
        }
        go(self, &mut HashMap::new())
    }

    /// Canonical printable form, insertion-order independent: children are
    /// ordered by their rendered encodings.
    pub fn render(self) -> String {
        fn go(t: ViewTree, memo: &mut HashMap<ViewTree, String>) -> String {
            if let Some(s) = memo.get(&t) {
                return s.clone();
            }
            let node = fetch(t);
            let mut parts: Vec<String> = node
                .children
                .iter()
                .map(|&(n, c)| format!("{}*{}", n, go(c, memo)))
                .collect();
            parts.sort();
            let label = match node.label {
                Some(l) => format!("{l}"),
                None => String::from("_"),
            };
            let s = format!("({label}:{})", parts.join(","));
            memo.insert(t, s.clone());
            s
        }
        go(self, &mut HashMap::new())
    }
}

/// Depth-`r` equality: true iff the depth-`r` truncations are identical
/// trees. Everything is 0-equal by definition.
pub fn views_equal(a: ViewTree, b: ViewTree, r: u32) -> bool {
    r == 0 || a.truncate(r) == b.truncate(r)
}

// ---------------------------------------------------------------------------
// k-hop views of graph nodes
// ---------------------------------------------------------------------------

/// Unrolls the depth-`k` view of `root` over an adjacency oracle. Fails
/// with [`Error::NonTreeView`] when the k-neighborhood (excluding edges
/// between two distance-k nodes) contains a cycle.
///
/// The oracle is queried only for nodes within distance `k - 1` of the
/// root, which is exactly what a k-round gather protocol can know.
pub(crate) fn unroll_tree_view(
    root: NodeId,
    k: u32,
    adj: &dyn Fn(NodeId) -> Vec<NodeId>,
    label: &dyn Fn(NodeId) -> Option<i64>,
) -> Result<ViewTree> {
    // Bounded BFS for distances.
    let mut dist: HashMap<NodeId, u32> = HashMap::new();
    dist.insert(root, 0);
    let mut queue = VecDeque::new();
    queue.push_back(root);
    let mut half_edges = 0usize;
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == k {
            continue;
        }
        for w in adj(u) {
            let dw = *dist.entry(w).or_insert_with(|| {
                queue.push_back(w);
                du + 1
            });
            // Count edge (u, w): twice if w is also expanded, once if w
            // sits on the boundary. Edges between two depth-k nodes never
            // appear because depth-k nodes are not queried.
            half_edges += if dw <= k.saturating_sub(1) { 1 } else { 2 };
        }
    }
    let nodes = dist.len();
    let edges = half_edges / 2;
    if edges != nodes - 1 {
        return Err(Error::NonTreeView { node: root, k });
    }

    fn build(
        u: NodeId,
        parent: Option<NodeId>,
        depth_left: u32,
        adj: &dyn Fn(NodeId) -> Vec<NodeId>,
        label: &dyn Fn(NodeId) -> Option<i64>,
    ) -> ViewTree {
        if depth_left == 0 {
            return ViewTree::leaf(label(u));
        }
        let children = adj(u)
            .into_iter()
            .filter(|&w| Some(w) != parent)
            .map(|w| (1u64, build(w, Some(u), depth_left - 1, adj, label)))
            .collect();
        ViewTree::branch(label(u), children)
    }

    Ok(build(root, None, k, adj, label))
}

impl Graph {
    /// Canonical unrolled view of node `v` to depth `k`. Uses node labels
    /// when the graph carries them. Errors with [`Error::NonTreeView`] if
    /// a cycle lies within distance `k` of `v` (never happens when the
    /// girth is at least `2k + 1`).
    pub fn khop_view(&self, v: NodeId, k: u32) -> Result<ViewTree> {
        if v as usize >= self.node_count() {
            return Err(Error::NodeOutOfRange(v, self.node_count()));
        }
        let adj = |u: NodeId| self.neighbors(u).to_vec();
        let label = |u: NodeId| self.label(u);
        unroll_tree_view(v, k, &adj, &label)
    }

    /// Same as [`Graph::khop_view`] but label-insensitive.
    pub fn khop_view_topology(&self, v: NodeId, k: u32) -> Result<ViewTree> {
        if v as usize >= self.node_count() {
            return Err(Error::NodeOutOfRange(v, self.node_count()));
        }
        let adj = |u: NodeId| self.neighbors(u).to_vec();
        let label = |_: NodeId| None;
        unroll_tree_view(v, k, &adj, &label)
    }

    /// The node set a k-round algorithm at `v` can hear from.
    pub fn k_neighborhood(&self, v: NodeId, k: u32) -> Vec<NodeId> {
        self.bfs_distances_bounded(v, k)
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d != UNREACHED)
            .map(|(u, _)| u as NodeId)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn star_center_view() {
        let g = gen::star(5);
        let view = g.khop_view(0, 1).unwrap();
        assert_eq!(view.root_degree(), 4);
        assert_eq!(view.depth(), 1);
        assert_eq!(view.node_count(), BigUint::from(5u32));
        // All four leaves are identical, hence merged.
        assert_eq!(view.children().len(), 1);
        assert_eq!(view.children()[0].0, 4);
    }

    #[test]
    fn path_end_view_is_a_chain() {
        let g = gen::path(3);
        let view = g.khop_view(0, 2).unwrap();
        assert_eq!(view.depth(), 2);
        assert_eq!(view.root_degree(), 1);
        assert_eq!(view.node_count(), BigUint::from(3u32));
    }

    #[test]
    fn triangle_views() {
        let g = gen::complete(3);
        // At k=1 no cycle closes inside the view.
        let view = g.khop_view(0, 1).unwrap();
        assert_eq!(view.root_degree(), 2);
        assert_eq!(view.depth(), 1);
        // At k=2 the triangle is visible.
        assert!(matches!(
            g.khop_view(0, 2),
            Err(Error::NonTreeView { node: 0, k: 2 })
        ));
    }

    #[test]
    fn depth_zero_view_is_leaf() {
        let g = gen::complete(4);
        let view = g.khop_view(2, 0).unwrap();
        assert_eq!(view.depth(), 0);
        assert_eq!(view.root_degree(), 0);
    }

    #[test]
    fn symmetric_nodes_have_equal_views() {
        let g = gen::cycle(12);
        let k = 3;
        let views: Vec<ViewTree> = g
            .nodes()
            .map(|v| g.khop_view(v, k).unwrap())
            .collect();
        assert!(views.windows(2).all(|w| w[0] == w[1]));

        // Both ends of a path see the same topology.
        let p = gen::path(9);
        assert_eq!(p.khop_view(0, 3).unwrap(), p.khop_view(8, 3).unwrap());
        // An end and the middle do not.
        assert_ne!(p.khop_view(0, 3).unwrap(), p.khop_view(4, 3).unwrap());
    }

    #[test]
    fn r_equality_semantics() {
        let star = gen::star(5).khop_view(0, 1).unwrap();
        let path = gen::path(3).khop_view(1, 1).unwrap();
        // Different root degrees: distinguishable at r=1 but 0-equal.
        assert!(views_equal(star, path, 0));
        assert!(!views_equal(star, path, 1));
        assert!(views_equal(star, star, 7));
    }

    #[test]
    fn truncation_is_prefix() {
        let g = gen::random_connected(14, 2, 5);
        let v = 3;
        for k in 0..3u32 {
            let full = match g.khop_view(v, 3) {
                Ok(t) => t,
                Err(_) => return, // cycle too close; fine for this seed
            };
            let direct = g.khop_view(v, k).unwrap();
            assert_eq!(full.truncate(k), direct);
            assert!(direct.depth() <= k);
        }
    }

    #[test]
    fn labels_distinguish_views_until_stripped() {
        let a = gen::path(3)
            .with_labels(vec![7, 8, 9])
            .unwrap()
            .khop_view(1, 1)
            .unwrap();
        let b = gen::path(3)
            .with_labels(vec![7, 7, 9])
            .unwrap()
            .khop_view(1, 1)
            .unwrap();
        assert_ne!(a, b);
        assert_eq!(a.strip_labels(), b.strip_labels());
    }

    #[test]
    fn render_is_canonical() {
        let x = ViewTree::leaf(Some(1));
        let y = ViewTree::leaf(Some(2));
        let a = ViewTree::branch(None, vec![(2, x), (1, y)]);
        let b = ViewTree::branch(None, vec![(1, y), (1, x), (1, x)]);
        assert_eq!(a, b);
        assert_eq!(a.render(), b.render());
    }
}
