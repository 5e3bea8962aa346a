//! Branch-and-bound searches for the NP-hard minima, on bitmask
//! adjacency. Callers enforce the node budget; everything here assumes
//! `n <= 64` (`n <= 32` would do for the dominating-set problems but the
//! masks are u64 throughout).

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use std::collections::HashMap;

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    let n = g.node_count();
    let mut adj = vec![0u64; n];
    for (u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    adj
}

fn mask_to_nodes(mask: u64) -> Vec<NodeId> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

// ---------------------------------------------------------------------------
// Minimum vertex cover
// ---------------------------------------------------------------------------

struct VcSearch {
    adj: Vec<u64>,
    best: u32,
    best_mask: u64,
}

impl VcSearch {
    /// Greedy maximal matching on the active subgraph; used both as lower
    /// bound (matching size) and to seed the initial upper bound.
    fn greedy_matching(&self, active: u64) -> Vec<(u32, u32)> {
        let mut used = 0u64;
        let mut matching = Vec::new();
        for u in 0..self.adj.len() as u32 {
            if active >> u & 1 == 0 || used >> u & 1 == 1 {
                continue;
            }
            let candidates = self.adj[u as usize] & active & !used;
            if candidates != 0 {
                let v = candidates.trailing_zeros();
                used |= 1 << u | 1 << v;
                matching.push((u, v));
            }
        }
        matching
    }

    fn search(&mut self, active: u64, cover: u64, size: u32) {
        if size >= self.best {
            return;
        }
        // Degree-based reductions: drop isolated nodes, resolve degree-1
        // nodes by taking their neighbor.
        let mut active = active;
        let mut cover = cover;
        let mut size = size;
        loop {
            let mut changed = false;
            let mut max_deg = 0u32;
            let mut max_v = u32::MAX;
            for v in 0..self.adj.len() as u32 {
                if active >> v & 1 == 0 {
                    continue;
                }
                let deg = (self.adj[v as usize] & active).count_ones();
                if deg == 0 {
                    active &= !(1 << v);
                    changed = true;
                } else if deg == 1 {
                    let w = (self.adj[v as usize] & active).trailing_zeros();
                    cover |= 1 << w;
                    size += 1;
                    active &= !(1 << v) & !(1 << w);
                    changed = true;
                    break;
                } else if deg > max_deg {
                    max_deg = deg;
                    max_v = v;
                }
            }
            if size >= self.best {
                return;
            }
            if !changed {
                if active == 0 {
                    self.best = size;
                    self.best_mask = cover;
                    return;
                }
                // Lower bound: any cover needs one endpoint per matching edge.
                let lb = self.greedy_matching(active).len() as u32;
                if size + lb >= self.best {
                    return;
                }
                let v = max_v;
                // Branch: v in the cover, or all of v's neighbors are.
                self.search(active & !(1 << v), cover | 1 << v, size + 1);
                let nb = self.adj[v as usize] & active;
                self.search(
                    active & !nb & !(1 << v),
                    cover | nb,
                    size + nb.count_ones(),
                );
                return;
            }
        }
    }
}

pub fn min_vertex_cover(g: &Graph) -> Vec<NodeId> {
    if g.edge_count() == 0 {
        return Vec::new();
    }
    let adj = adjacency_masks(g);
    let active = if g.node_count() == 64 {
        u64::MAX
    } else {
        (1u64 << g.node_count()) - 1
    };
    let mut s = VcSearch {
        adj,
        best: u32::MAX,
        best_mask: 0,
    };
    // Initial upper bound: both endpoints of a greedy maximal matching.
    let matching = s.greedy_matching(active);
    let mut seed_cover = 0u64;
    for (u, v) in &matching {
        seed_cover |= 1 << u | 1 << v;
    }
    s.best = seed_cover.count_ones() + 1;
    s.best_mask = seed_cover;
    s.search(active, 0, 0);
    mask_to_nodes(s.best_mask)
}

// ---------------------------------------------------------------------------
// Minimum dominating set
// ---------------------------------------------------------------------------

struct DsSearch {
    closed: Vec<u64>,
    full: u64,
    best: u32,
    best_set: Vec<u32>,
    /// dominated-mask -> smallest chosen count seen; dominates pruning.
    memo: HashMap<u64, u32>,
    max_cover: u32,
}

impl DsSearch {
    fn search(&mut self, dominated: u64, chosen: &mut Vec<u32>) {
        let size = chosen.len() as u32;
        if dominated == self.full {
            if size < self.best {
                self.best = size;
                self.best_set = chosen.clone();
            }
            return;
        }
        let remaining = (self.full & !dominated).count_ones();
        let lb = remaining.div_ceil(self.max_cover);
        if size + lb >= self.best {
            return;
        }
        if let Some(&seen) = self.memo.get(&dominated) {
            if seen <= size {
                return;
            }
        }
        self.memo.insert(dominated, size);
        // Branch over the dominators of the lowest undominated node.
        let u = (self.full & !dominated).trailing_zeros();
        let mut candidates: Vec<u32> = (0..self.closed.len() as u32)
            .filter(|&v| self.closed[v as usize] >> u & 1 == 1)
            .collect();
        candidates.sort_by_key(|&v| {
            std::cmp::Reverse((self.closed[v as usize] & !dominated).count_ones())
        });
        for v in candidates {
            chosen.push(v);
            self.search(dominated | self.closed[v as usize], chosen);
            chosen.pop();
        }
    }
}

pub fn min_dominating_set(g: &Graph) -> Result<Vec<NodeId>> {
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let adj = adjacency_masks(g);
    let closed: Vec<u64> = (0..n).map(|v| adj[v] | 1 << v).collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let max_cover = closed.iter().map(|c| c.count_ones()).max().unwrap();
    let mut s = DsSearch {
        closed,
        full,
        best: n as u32 + 1,
        best_set: Vec::new(),
        memo: HashMap::new(),
        max_cover,
    };
    s.search(0, &mut Vec::new());
    Ok(s.best_set.into_iter().collect())
}

// ---------------------------------------------------------------------------
// Minimum connected dominating set
// ---------------------------------------------------------------------------

struct CdsSearch {
    adj: Vec<u64>,
    closed: Vec<u64>,
    full: u64,
    target: u32,
    max_cover: u32,
    found: Option<u64>,
}

impl CdsSearch {
    /// Extends a connected set. `ext` holds the allowed frontier,
    /// `forbidden` the nodes excluded on this branch; every connected
    /// superset is enumerated exactly once.
    fn grow(&mut self, set: u64, dominated: u64, ext: u64, forbidden: u64) {
        if self.found.is_some() {
            return;
        }
        let size = set.count_ones();
        if dominated == self.full {
            self.found = Some(set);
            return;
        }
        if size == self.target {
            return;
        }
        let remaining = (self.full & !dominated).count_ones();
        if size + remaining.div_ceil(self.max_cover) > self.target {
            return;
        }
        let mut ext = ext;
        let mut forbidden = forbidden;
        while ext != 0 {
            let v = ext.trailing_zeros();
            let bit = 1u64 << v;
            ext &= !bit;
            // Include v, opening its neighbors as new frontier.
            let new_ext = (ext | (self.adj[v as usize] & !forbidden & !set)) & !bit;
            self.grow(
                set | bit,
                dominated | self.closed[v as usize],
                new_ext,
                forbidden | bit,
            );
            if self.found.is_some() {
                return;
            }
            // Exclude v from this branch entirely.
            forbidden |= bit;
        }
    }
}

pub fn min_connected_dominating_set(g: &Graph) -> Result<Vec<NodeId>> {
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Ok(vec![0]);
    }
    let adj = adjacency_masks(g);
    let closed: Vec<u64> = (0..n).map(|v| adj[v] | 1 << v).collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let max_cover = closed.iter().map(|c| c.count_ones()).max().unwrap();
    let lower = min_dominating_set(g)?.len() as u32;
    for target in lower..=n as u32 {
        let mut s = CdsSearch {
            adj: adj.clone(),
            closed: closed.clone(),
            full,
            target,
            max_cover,
            found: None,
        };
        // Every connected set has a unique minimum element; rooting the
        // enumeration there visits each candidate set once.
        for root in 0..n as u32 {
            let bit = 1u64 << root;
            let forbidden = bit | (bit - 1);
            s.grow(
                bit,
                closed[root as usize],
                adj[root as usize] & !forbidden,
                forbidden,
            );
            if let Some(found) = s.found {
                return Ok(mask_to_nodes(found));
            }
        }
    }
    Err(Error::InternalInconsistency(
        "connected graph admits no connected dominating set".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracles::{induces_connected, is_dominating_set, is_vertex_cover};

    #[test]
    fn vertex_cover_known_values() {
        assert_eq!(min_vertex_cover(&gen::complete(3)).len(), 2);
        assert_eq!(min_vertex_cover(&gen::star(8)).len(), 1);
        assert_eq!(min_vertex_cover(&gen::cycle(7)).len(), 4);
        assert_eq!(min_vertex_cover(&gen::complete_bipartite(16, 4)).len(), 4);
        assert_eq!(min_vertex_cover(&gen::path(2)).len(), 1);
    }

    #[test]
    fn dominating_set_known_values() {
        assert_eq!(min_dominating_set(&gen::star(9)).unwrap().len(), 1);
        assert_eq!(min_dominating_set(&gen::cycle(9)).unwrap().len(), 3);
        assert_eq!(min_dominating_set(&gen::path(7)).unwrap().len(), 3);
        assert_eq!(min_dominating_set(&gen::complete(6)).unwrap().len(), 1);
    }

    #[test]
    fn connected_dominating_set_known_values() {
        assert_eq!(
            min_connected_dominating_set(&gen::cycle(12)).unwrap().len(),
            10
        );
        assert_eq!(
            min_connected_dominating_set(&gen::star(9)).unwrap().len(),
            1
        );
        assert_eq!(
            min_connected_dominating_set(&gen::path(6)).unwrap().len(),
            4
        );
    }

    #[test]
    fn witnesses_validate_on_random_graphs() {
        for seed in 0..15 {
            let g = gen::random_connected(14, 6, seed);
            let vc = min_vertex_cover(&g);
            assert!(is_vertex_cover(&g, &vc));
            let ds = min_dominating_set(&g).unwrap();
            assert!(is_dominating_set(&g, &ds));
            let cds = min_connected_dominating_set(&g).unwrap();
            assert!(is_dominating_set(&g, &cds));
            assert!(induces_connected(&g, &cds));
            assert!(ds.len() <= cds.len());
        }
    }

    #[test]
    fn mcds_rejects_disconnected_input() {
        let g = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            min_connected_dominating_set(&g),
            Err(Error::Disconnected)
        ));
    }
}
