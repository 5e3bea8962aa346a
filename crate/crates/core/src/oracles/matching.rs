//! Exact maximum matching in general graphs: augmenting-path search with
//! blossom contraction, O(V^3).

use crate::graph::{Graph, NodeId};
use std::collections::VecDeque;

const NONE: i32 = -1;

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<i32>,
    parent: Vec<i32>,
    base: Vec<u32>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn lca(&self, a: u32, b: u32) -> u32 {
        let n = self.g.node_count();
        let mut on_path = vec![false; n];
        // Walk from a to the root along bases, marking the path.
        let mut x = a;
        loop {
            x = self.base[x as usize];
            on_path[x as usize] = true;
            if self.mate[x as usize] == NONE {
                break;
            }
            x = self.parent[self.mate[x as usize] as usize] as u32;
        }
        // Walk from b until hitting the marked path.
        let mut y = b;
        loop {
            y = self.base[y as usize];
            if on_path[y as usize] {
                return y;
            }
            y = self.parent[self.mate[y as usize] as usize] as u32;
        }
    }

    fn mark_path(&mut self, mut v: u32, b: u32, mut child: i32, flag: &mut [bool]) {
        while self.base[v as usize] != b {
            flag[self.base[v as usize] as usize] = true;
            flag[self.base[self.mate[v as usize] as usize] as usize] = true;
            self.parent[v as usize] = child;
            child = self.mate[v as usize];
            v = self.parent[self.mate[v as usize] as usize] as u32;
        }
    }

    /// One phase: grows an alternating tree from `root` and augments if an
    /// exposed vertex is reached. Returns whether the matching grew.
    fn try_augment(&mut self, root: u32) -> bool {
        let n = self.g.node_count();
        self.parent = vec![NONE; n];
        self.base = (0..n as u32).collect();
        self.used = vec![false; n];
        self.used[root as usize] = true;

        let mut queue = VecDeque::new();
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &w in self.g.neighbors(v) {
                if self.base[v as usize] == self.base[w as usize]
                    || self.mate[v as usize] == w as i32
                {
                    continue;
                }
                if w == root
                    || (self.mate[w as usize] != NONE
                        && self.parent[self.mate[w as usize] as usize] != NONE)
                {
                    // Odd cycle: contract the blossom.
                    let cur_base = self.lca(v, w);
                    self.in_blossom = vec![false; n];
                    let mut flag = std::mem::take(&mut self.in_blossom);
                    self.mark_path(v, cur_base, w as i32, &mut flag);
                    self.mark_path(w, cur_base, v as i32, &mut flag);
                    self.in_blossom = flag;
                    for i in 0..n as u32 {
                        if self.in_blossom[self.base[i as usize] as usize] {
                            self.base[i as usize] = cur_base;
                            if !self.used[i as usize] {
                                self.used[i as usize] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[w as usize] == NONE {
                    self.parent[w as usize] = v as i32;
                    if self.mate[w as usize] == NONE {
                        // Exposed vertex: flip the alternating path.
                        let mut u = w as i32;
                        while u != NONE {
                            let pv = self.parent[u as usize];
                            let ppv = self.mate[pv as usize];
                            self.mate[u as usize] = pv;
                            self.mate[pv as usize] = u;
                            u = ppv;
                        }
                        return true;
                    }
                    let m = self.mate[w as usize] as u32;
                    self.used[m as usize] = true;
                    queue.push_back(m);
                }
            }
        }
        false
    }
}

/// Maximum-cardinality matching, returned as an edge list.
pub fn maximum_matching(g: &Graph) -> Vec<(NodeId, NodeId)> {
    let n = g.node_count();
    let mut state = Blossom {
        g,
        mate: vec![NONE; n],
        parent: Vec::new(),
        base: Vec::new(),
        used: Vec::new(),
        in_blossom: Vec::new(),
    };
    // Greedy warm start cuts down the number of phases.
    for (u, v) in g.edges() {
        if state.mate[u as usize] == NONE && state.mate[v as usize] == NONE {
            state.mate[u as usize] = v as i32;
            state.mate[v as usize] = u as i32;
        }
    }
    for v in 0..n as u32 {
        if state.mate[v as usize] == NONE {
            state.try_augment(v);
        }
    }
    let mut out = Vec::new();
    for v in 0..n {
        let m = state.mate[v];
        if m != NONE && (v as i32) < m {
            out.push((v as NodeId, m as NodeId));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracles::{exhaustive_max_matching, is_matching};

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i.min((i + 1) % 5), i.max((i + 1) % 5)));
            edges.push((i, i + 5));
            let a = 5 + i;
            let b = 5 + (i + 2) % 5;
            edges.push((a.min(b), a.max(b)));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    #[test]
    fn known_matching_sizes() {
        assert_eq!(maximum_matching(&gen::path(4)).len(), 2);
        assert_eq!(maximum_matching(&gen::cycle(5)).len(), 2);
        assert_eq!(maximum_matching(&gen::complete(4)).len(), 2);
        assert_eq!(maximum_matching(&gen::star(7)).len(), 1);
        assert_eq!(maximum_matching(&gen::complete_bipartite(3, 5)).len(), 3);
        // The Petersen graph has a perfect matching.
        assert_eq!(maximum_matching(&petersen()).len(), 5);
    }

    #[test]
    fn blossoms_are_handled() {
        // Two triangles joined by a bridge: needs odd-cycle contraction.
        let g = Graph::from_edges(
            6,
            vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        assert_eq!(maximum_matching(&g).len(), 3);
    }

    #[test]
    fn agrees_with_exhaustive_on_random_graphs() {
        for seed in 0..40 {
            let g = gen::gnp(11, 0.3, seed);
            let m = maximum_matching(&g);
            assert!(is_matching(&g, &m));
            assert_eq!(m.len() as u64, exhaustive_max_matching(&g), "seed {seed}");
        }
    }
}
