//! Brute-force reference solvers for tiny graphs: the oracle of the
//! oracles. Full subset enumeration, no pruning beyond memoization.

use crate::graph::Graph;

/// Largest node count these enumerations accept.
pub const EXHAUSTIVE_LIMIT: usize = 16;

fn full_mask(n: usize) -> u32 {
    assert!(n <= EXHAUSTIVE_LIMIT, "exhaustive solvers cap at n = {EXHAUSTIVE_LIMIT}");
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn exhaustive_mvc(g: &Graph) -> u64 {
    let n = g.node_count();
    let full = full_mask(n);
    let edges: Vec<(u32, u32)> = g.edges().map(|(u, v)| (u, v)).collect();
    let mut best = n as u32;
    for mask in 0..=full {
        if mask.count_ones() >= best {
            continue;
        }
        if edges
            .iter()
            .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
        {
            best = mask.count_ones();
        }
    }
    best as u64
}

pub fn exhaustive_mds(g: &Graph) -> u64 {
    let n = g.node_count();
    let full = full_mask(n);
    let closed: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v as u32)
                .iter()
                .fold(1u32 << v, |m, &w| m | 1 << w)
        })
        .collect();
    let mut best = n as u32;
    for mask in 0..=full {
        if mask.count_ones() >= best {
            continue;
        }
        let dominated = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .fold(0u32, |m, v| m | closed[v]);
        if dominated == full {
            best = mask.count_ones();
        }
    }
    best as u64
}

fn induced_connected_mask(adj: &[u32], mask: u32) -> bool {
    if mask == 0 {
        return true;
    }
    let start = mask.trailing_zeros();
    let mut seen = 1u32 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros();
            f &= f - 1;
            next |= adj[v as usize] & mask & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen == mask
}

/// `None` when no connected dominating set exists (disconnected graph).
pub fn exhaustive_mcds(g: &Graph) -> Option<u64> {
    let n = g.node_count();
    let full = full_mask(n);
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v as u32)
                .iter()
                .fold(0u32, |m, &w| m | 1 << w)
        })
        .collect();
    let closed: Vec<u32> = adj.iter().enumerate().map(|(v, a)| a | 1 << v).collect();
    let mut best: Option<u32> = None;
    for mask in 1..=full {
        if best.is_some_and(|b| mask.count_ones() >= b) {
            continue;
        }
        let dominated = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .fold(0u32, |m, v| m | closed[v]);
        if dominated == full && induced_connected_mask(&adj, mask) {
            best = Some(mask.count_ones());
        }
    }
    best.map(u64::from)
}

pub fn exhaustive_max_matching(g: &Graph) -> u64 {
    let n = g.node_count();
    assert!(n <= EXHAUSTIVE_LIMIT);
    let mut memo = vec![u32::MAX; 1 << n];
    fn go(g: &Graph, used: u32, n: usize, memo: &mut [u32]) -> u32 {
        if memo[used as usize] != u32::MAX {
            return memo[used as usize];
        }
        let mut v = n;
        for i in 0..n {
            if used >> i & 1 == 0 {
                v = i;
                break;
            }
        }
        let result = if v == n {
            0
        } else {
            // Leave v unmatched, or match it with any free neighbor.
            let mut best = go(g, used | 1 << v, n, memo);
            for &w in g.neighbors(v as u32) {
                if used >> w & 1 == 0 {
                    best = best.max(1 + go(g, used | 1 << v | 1 << w, n, memo));
                }
            }
            best
        };
        memo[used as usize] = result;
        result
    }
    go(g, 0, n, &mut memo) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracles::{exact_solve, Problem};

    #[test]
    fn exhaustive_matches_known_values() {
        assert_eq!(exhaustive_mvc(&gen::cycle(5)), 3);
        assert_eq!(exhaustive_mds(&gen::path(7)), 3);
        assert_eq!(exhaustive_mcds(&gen::cycle(8)), Some(6));
        assert_eq!(exhaustive_max_matching(&gen::complete(5)), 2);
        assert_eq!(exhaustive_mcds(&gen::gnp(4, 0.0, 0)), None);
    }

    #[test]
    fn branch_and_bound_agrees_with_enumeration() {
        for seed in 0..25 {
            let g = gen::gnp(10, 0.25, seed);
            assert_eq!(
                exact_solve(Problem::MinVertexCover, &g).unwrap().value,
                exhaustive_mvc(&g),
                "mvc seed {seed}"
            );
            assert_eq!(
                exact_solve(Problem::MinDominatingSet, &g).unwrap().value,
                exhaustive_mds(&g),
                "mds seed {seed}"
            );
            if g.is_connected() {
                assert_eq!(
                    Some(
                        exact_solve(Problem::MinConnectedDominatingSet, &g)
                            .unwrap()
                            .value
                    ),
                    exhaustive_mcds(&g),
                    "mcds seed {seed}"
                );
            }
        }
    }
}
