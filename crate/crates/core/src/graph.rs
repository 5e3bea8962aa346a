//! Immutable simple undirected graphs and the pure graph algorithms the
//! rest of the crate builds on: BFS, exact girth, bounded cycle search,
//! and the locality-preserving reduction transforms.

use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt::Write as _;

pub type NodeId = u32;

/// Distance sentinel for unreachable nodes.
pub const UNREACHED: u32 = u32::MAX;

/// An immutable simple undirected graph with stable node ids `0..n` and
/// optional per-node integer labels. Neighbor lists are sorted, so all
/// derived computations are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    labels: Option<Vec<i64>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate
    /// edges and out-of-range endpoints. Isolated nodes are permitted.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut m = 0usize;
        for (u, v) in edges {
            if u as usize >= n {
                return Err(Error::NodeOutOfRange(u, n));
            }
            if v as usize >= n {
                return Err(Error::NodeOutOfRange(v, n));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge incident to node {u}"
                )));
            }
        }
        Ok(Graph {
            adj,
            labels: None,
            m,
        })
    }

    /// Attaches per-node labels; `labels.len()` must equal the node count.
    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Graph> {
        if labels.len() != self.node_count() {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn strip_labels(&self) -> Graph {
        Graph {
            adj: self.adj.clone(),
            labels: None,
            m: self.m,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: NodeId) -> Option<i64> {
        self.labels.as_ref().map(|l| l[v as usize])
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count() as NodeId).into_iter()
    }

    /// Iterates each edge once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(v, self.node_count()))
        }
    }

    /// BFS distances from `src`, truncated at `max_depth`. Unreached nodes
    /// hold [`UNREACHED`].
    pub fn bfs_distances_bounded(&self, src: NodeId, max_depth: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.node_count()];
        dist[src as usize] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du == max_depth {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn bfs_distances(&self, src: NodeId) -> Vec<u32> {
        self.bfs_distances_bounded(src, UNREACHED - 1)
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Option<u32> {
        let d = self.bfs_distances(u)[v as usize];
        (d != UNREACHED).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count() == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(|&d| d != UNREACHED)
    }

    /// Exact girth: length of the shortest cycle, `None` for forests.
    ///
    /// One BFS per node; for every non-tree edge `(a, b)` seen from root
    /// `v`, the closed walk `v..a, (a,b), b..v` contains a cycle of length
    /// at most `dist(a) + dist(b) + 1`, and for `v` on a shortest cycle
    /// one such walk realizes the girth exactly.
    pub fn girth(&self) -> Option<u32> {
        self.girth_with(Execution::default())
    }

    pub fn girth_with(&self, mode: Execution) -> Option<u32> {
        self.shortest_cycle(UNREACHED - 2, mode)
    }

    /// Length of the shortest cycle if it is `<= limit`; `None` otherwise.
    /// Runs bounded BFS of depth `ceil(limit/2)` per node, so certifying
    /// girth lower bounds stays cheap on large graphs.
    pub fn shortest_cycle_at_most(&self, limit: u32, mode: Execution) -> Option<u32> {
        self.shortest_cycle(limit, mode).filter(|&g| g <= limit)
    }

    fn shortest_cycle(&self, limit: u32, mode: Execution) -> Option<u32> {
        let depth_cap = limit / 2 + 1;
        let n = self.node_count();
        let best = map_indexed(mode, n, |v| self.cycle_through(v as NodeId, depth_cap));
        best.into_iter().flatten().min()
    }

    /// Shortest closed-walk bound through `v` discoverable within
    /// `depth_cap` BFS layers.
    fn cycle_through(&self, v: NodeId, depth_cap: u32) -> Option<u32> {
        let n = self.node_count();
        let mut dist = vec![UNREACHED; n];
        let mut parent = vec![UNREACHED; n];
        dist[v as usize] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(v);
        let mut best: Option<u32> = None;
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    if du + 1 <= depth_cap {
                        dist[w as usize] = du + 1;
                        parent[w as usize] = u;
                        queue.push_back(w);
                    }
                } else if parent[w as usize] != u && parent[u as usize] != w {
                    // Non-tree edge: closes a cycle through the root.
                    let cand = du + dist[w as usize] + 1;
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        best
    }

    /// Renames nodes: node `v` of `self` becomes `perm[v]` in the result.
    /// Labels travel with their nodes.
    pub fn relabel_nodes(&self, perm: &[NodeId]) -> Result<Graph> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::InvalidGraph("permutation length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p as usize >= n || seen[p as usize] {
                return Err(Error::InvalidGraph("not a permutation".into()));
            }
            seen[p as usize] = true;
        }
        let edges = self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize]));
        let mut g = Graph::from_edges(n, edges.collect::<Vec<_>>())?;
        if let Some(labels) = &self.labels {
            let mut new_labels = vec![0i64; n];
            for v in 0..n {
                new_labels[perm[v] as usize] = labels[v];
            }
            g = g.with_labels(new_labels)?;
        }
        Ok(g)
    }

    /// Two-coloring by BFS parity, per connected component. `None` if some
    /// edge joins two nodes of equal parity (odd cycle).
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.node_count();
        let mut side = vec![2u8; n];
        for s in 0..n {
            if side[s] != 2 {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::new();
            queue.push_back(s as NodeId);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if side[w as usize] == 2 {
                        side[w as usize] = 1 - side[u as usize];
                        queue.push_back(w);
                    } else if side[w as usize] == side[u as usize] {
                        return None;
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s == 1).collect())
    }
}

// ---------------------------------------------------------------------------
// Reduction transforms
// ---------------------------------------------------------------------------

impl Graph {
    /// Line graph: one node per edge, adjacent iff the edges share an
    /// endpoint. Node `i` of the result is the `i`-th edge of [`Graph::edges`].
    pub fn line_graph(&self) -> Graph {
        let edges: Vec<(NodeId, NodeId)> = self.edges().collect();
        // Edge index lookup per endpoint.
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.node_count()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            incident[u as usize].push(i);
            incident[v as usize].push(i);
        }
        let mut out = Vec::new();
        for list in &incident {
            for a in 0..list.len() {
                for b in a + 1..list.len() {
                    out.push((list[a] as NodeId, list[b] as NodeId));
                }
            }
        }
        // Two edges sharing both endpoints is impossible in a simple graph,
        // but two edges can share an endpoint at either end; each incident
        // pair appears under exactly one shared node, so no duplicates.
        Graph::from_edges(edges.len(), out).expect("line graph construction is simple")
    }

    /// Replaces every edge `(u, v)` by the path `u - u_e - v_e - v`.
    /// The two subdivision nodes for the `i`-th edge are `n + 2i` and
    /// `n + 2i + 1`.
    pub fn subdivide_for_cds(&self) -> Graph {
        let n = self.node_count();
        let mut out = Vec::with_capacity(3 * self.m);
        for (i, (u, v)) in self.edges().enumerate() {
            let ue = (n + 2 * i) as NodeId;
            let ve = (n + 2 * i + 1) as NodeId;
            out.push((u, ue));
            out.push((ue, ve));
            out.push((ve, v));
        }
        Graph::from_edges(n + 2 * self.m, out).expect("subdivision is simple")
    }

    /// Distance-power graph on a node subset: nodes are the members of
    /// `subset` (deduplicated, ascending), with an edge wherever the
    /// distance in `self` is between 1 and `d`. Returns the graph together
    /// with the mapping from new ids to original ids.
    pub fn distance_power(&self, subset: &[NodeId], d: u32) -> Result<SubsetGraph> {
        if subset.is_empty() {
            return Err(Error::InvalidGraph("empty subset".into()));
        }
        let mut nodes: Vec<NodeId> = subset.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        for &v in &nodes {
            self.check_node(v)?;
        }
        let index_of = {
            let mut map = vec![UNREACHED; self.node_count()];
            for (i, &v) in nodes.iter().enumerate() {
                map[v as usize] = i as u32;
            }
            map
        };
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            let dist = self.bfs_distances_bounded(v, d);
            for (w, &dw) in dist.iter().enumerate() {
                if dw != UNREACHED && dw > 0 && index_of[w] != UNREACHED {
                    let j = index_of[w] as usize;
                    if i < j {
                        edges.push((i as NodeId, j as NodeId));
                    }
                }
            }
        }
        Ok(SubsetGraph {
            graph: Graph::from_edges(nodes.len(), edges)?,
            nodes,
        })
    }
}

impl Graph {
    /// Drops all isolated nodes, compacting ids. Labels travel along.
    pub fn drop_isolated(&self) -> SubsetGraph {
        let nodes: Vec<NodeId> = self.nodes().filter(|&v| self.degree(v) > 0).collect();
        let mut index = vec![UNREACHED; self.node_count()];
        for (i, &v) in nodes.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let edges = self
            .edges()
            .map(|(u, v)| (index[u as usize], index[v as usize]));
        let mut graph =
            Graph::from_edges(nodes.len(), edges.collect::<Vec<_>>()).expect("subgraph is simple");
        if let Some(labels) = &self.labels {
            let kept = nodes.iter().map(|&v| labels[v as usize]).collect();
            graph = graph.with_labels(kept).expect("label count matches");
        }
        SubsetGraph { graph, nodes }
    }
}

/// A graph over a subset of another graph's nodes, with the id mapping.
#[derive(Debug, Clone)]
pub struct SubsetGraph {
    pub graph: Graph,
    /// `nodes[i]` is the original id of the subset graph's node `i`.
    pub nodes: Vec<NodeId>,
}

impl SubsetGraph {
    pub fn original(&self, v: NodeId) -> NodeId {
        self.nodes[v as usize]
    }
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<i64>>,
}

impl Graph {
    /// Text format: first line `n m`, then `m` lines `u v` with `u < v`,
    /// then optional label lines `v label`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.node_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        if let Some(labels) = &self.labels {
            for (v, l) in labels.iter().enumerate() {
                let _ = writeln!(s, "{v} {l}");
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(it.next(), "node count")?;
        let m: usize = parse_field(it.next(), "edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("missing edge line".into()))?;
            let mut it = line.split_whitespace();
            let u: NodeId = parse_field(it.next(), "edge endpoint")?;
            let v: NodeId = parse_field(it.next(), "edge endpoint")?;
            if u >= v {
                return Err(Error::Parse(format!("edge {u} {v} must satisfy u < v")));
            }
            edges.push((u, v));
        }
        let mut g = Graph::from_edges(n, edges)?;
        let mut labels: Option<Vec<i64>> = None;
        for line in lines {
            let mut it = line.split_whitespace();
            let v: usize = parse_field(it.next(), "label node")?;
            let l: i64 = parse_field(it.next(), "label value")?;
            let labels = labels.get_or_insert_with(|| vec![0; n]);
            if v >= n {
                return Err(Error::Parse(format!("label for out-of-range node {v}")));
            }
            labels[v] = l;
        }
        if let Some(labels) = labels {
            g = g.with_labels(labels)?;
        }
        Ok(g)
    }

    /// Structured-document variant mirroring the text format's fields.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            n: self.node_count(),
            edges: self.edges().collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut g = Graph::from_edges(doc.n, doc.edges)?;
        if let Some(labels) = doc.labels {
            g = g.with_labels(labels)?;
        }
        Ok(g)
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("malformed {what}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::from_edges(2, vec![(0, 0)]).is_err());
        assert!(Graph::from_edges(2, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(gen::complete(3).girth(), Some(3));
        assert_eq!(gen::complete_bipartite(2, 3).girth(), Some(4));
        assert_eq!(gen::path(6).girth(), None);
        assert_eq!(gen::cycle(7).girth(), Some(7));
        assert_eq!(gen::star(5).girth(), None);
    }

    #[test]
    fn girth_even_cycle_with_chord() {
        // C_6 plus a chord splitting it into a 3-cycle and a 5-cycle.
        let mut edges: Vec<(NodeId, NodeId)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.push((0, 2));
        let g = Graph::from_edges(6, edges.into_iter().map(|(u, v)| (u.min(v), u.max(v)))).unwrap();
        assert_eq!(g.girth(), Some(3));
    }

    #[test]
    fn shortest_cycle_bound_matches_exact() {
        let g = gen::cycle(9);
        assert_eq!(g.shortest_cycle_at_most(8, Execution::Sequential), None);
        assert_eq!(g.shortest_cycle_at_most(9, Execution::Sequential), Some(9));
        assert_eq!(g.shortest_cycle_at_most(30, Execution::Sequential), Some(9));
    }

    #[test]
    fn girth_invariant_under_relabeling() {
        let g = gen::gnp(12, 0.3, 7);
        let perm: Vec<NodeId> = (0..12).rev().collect();
        let h = g.relabel_nodes(&perm).unwrap();
        assert_eq!(g.girth(), h.girth());
    }

    #[test]
    fn line_graph_shapes() {
        // P_3 has two incident edges: its line graph is a single edge.
        let p3 = gen::path(3).line_graph();
        assert_eq!(p3.node_count(), 2);
        assert_eq!(p3.edge_count(), 1);
        // K_{1,3}: all edges pairwise incident at the center.
        let k13 = gen::star(4).line_graph();
        assert_eq!(k13.node_count(), 3);
        assert_eq!(k13.edge_count(), 3);
        // C_5 maps to itself.
        let c5 = gen::cycle(5).line_graph();
        assert_eq!(c5.node_count(), 5);
        assert_eq!(c5.girth(), Some(5));
    }

    #[test]
    fn line_graph_degree_identity() {
        let g = gen::gnp(14, 0.3, 3);
        let lg = g.line_graph();
        for (i, (u, v)) in g.edges().enumerate() {
            assert_eq!(
                lg.degree(i as NodeId),
                g.degree(u) + g.degree(v) - 2,
                "line-graph degree of edge ({u},{v})"
            );
        }
    }

    #[test]
    fn subdivision_shapes() {
        let e = gen::path(2).subdivide_for_cds();
        assert_eq!(e.node_count(), 4);
        assert_eq!(e.edge_count(), 3);
        assert!(e.is_connected());

        let t = gen::complete(3).subdivide_for_cds();
        assert_eq!(t.node_count(), 9);
        assert_eq!(t.edge_count(), 9);
        assert_eq!(t.girth(), Some(9));
    }

    #[test]
    fn subdivision_triples_girth() {
        for seed in 0..5 {
            let g = gen::random_connected(10, 14, seed);
            if let Some(girth) = g.girth() {
                assert_eq!(g.subdivide_for_cds().girth(), Some(3 * girth));
            }
        }
    }

    #[test]
    fn distance_power_examples() {
        let p3 = gen::path(3);
        let all: Vec<NodeId> = (0..3).collect();
        let sq = p3.distance_power(&all, 2).unwrap();
        assert_eq!(sq.graph.edge_count(), 3); // triangle

        let p4 = gen::path(4);
        let ends = p4.distance_power(&[0, 3], 3).unwrap();
        assert_eq!(ends.graph.edge_count(), 1);

        let p5 = gen::path(5);
        let far = p5.distance_power(&[0, 4], 3).unwrap();
        assert_eq!(far.graph.edge_count(), 0);
    }

    #[test]
    fn text_round_trip() {
        let g = gen::gnp(9, 0.4, 11)
            .with_labels((0..9).map(|v| v as i64 * 3).collect())
            .unwrap();
        let parsed = Graph::from_text(&g.to_text()).unwrap();
        assert_eq!(g, parsed);
        let parsed_json = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, parsed_json);
    }

    #[test]
    fn parallel_and_sequential_girth_agree() {
        for seed in 0..8 {
            let g = gen::gnp(24, 0.15, seed);
            assert_eq!(
                g.girth_with(Execution::Sequential),
                g.girth_with(Execution::Parallel)
            );
        }
    }
}
