//! Exact small-instance solvers used as ground truth: minimum vertex
//! cover, dominating set, connected dominating set, maximum matching, a
//! maximal-independent-set validity check, and an exact rational LP
//! solver. No tolerances anywhere.

mod bnb;
mod exhaustive;
mod matching;
mod simplex;

pub use exhaustive::{
    exhaustive_max_matching, exhaustive_mcds, exhaustive_mds, exhaustive_mvc, EXHAUSTIVE_LIMIT,
};
pub use matching::maximum_matching;
pub use simplex::{exact_lp, LpSolution};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    MinVertexCover,
    MinDominatingSet,
    MinConnectedDominatingSet,
    MaxMatching,
}

impl Problem {
    /// Default node budgets; the NP-hard searches stay at desk scale.
    pub fn default_budget(self) -> usize {
        match self {
            Problem::MaxMatching => 200,
            _ => 32,
        }
    }

    pub fn parse(s: &str) -> Result<Problem> {
        Ok(match s {
            "mvc" => Problem::MinVertexCover,
            "mds" => Problem::MinDominatingSet,
            "mcds" => Problem::MinConnectedDominatingSet,
            "maxm" => Problem::MaxMatching,
            other => return Err(Error::Parse(format!("unknown problem {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Nodes(Vec<NodeId>),
    Edges(Vec<(NodeId, NodeId)>),
}

/// An exact optimum with a re-validatable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSolution {
    pub problem: Problem,
    pub value: u64,
    pub witness: Witness,
}

/// Solves `problem` on `g` exactly, within the default node budget.
pub fn exact_solve(problem: Problem, g: &Graph) -> Result<ExactSolution> {
    exact_solve_with_budget(problem, g, problem.default_budget())
}

pub fn exact_solve_with_budget(
    problem: Problem,
    g: &Graph,
    budget: usize,
) -> Result<ExactSolution> {
    if g.node_count() > budget {
        return Err(Error::BudgetExceeded(format!(
            "{} nodes > budget {budget}",
            g.node_count()
        )));
    }
    let solution = match problem {
        Problem::MinVertexCover => {
            let cover = bnb::min_vertex_cover(g);
            debug_assert!(is_vertex_cover(g, &cover));
            ExactSolution {
                problem,
                value: cover.len() as u64,
                witness: Witness::Nodes(cover),
            }
        }
        Problem::MinDominatingSet => {
            let ds = bnb::min_dominating_set(g)?;
            debug_assert!(is_dominating_set(g, &ds));
            ExactSolution {
                problem,
                value: ds.len() as u64,
                witness: Witness::Nodes(ds),
            }
        }
        Problem::MinConnectedDominatingSet => {
            let cds = bnb::min_connected_dominating_set(g)?;
            debug_assert!(is_dominating_set(g, &cds) && induces_connected(g, &cds));
            ExactSolution {
                problem,
                value: cds.len() as u64,
                witness: Witness::Nodes(cds),
            }
        }
        Problem::MaxMatching => {
            let m = matching::maximum_matching(g);
            debug_assert!(is_matching(g, &m));
            ExactSolution {
                problem,
                value: m.len() as u64,
                witness: Witness::Edges(m),
            }
        }
    };
    Ok(solution)
}

/// Report of the maximal-independent-set validity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MisReport {
    pub independent: bool,
    pub maximal: bool,
}

/// Checks independence and maximality of a given node set.
pub fn check_mis(g: &Graph, set: &[NodeId]) -> MisReport {
    let mut in_set = vec![false; g.node_count()];
    for &v in set {
        in_set[v as usize] = true;
    }
    let independent = g
        .edges()
        .all(|(u, v)| !(in_set[u as usize] && in_set[v as usize]));
    let maximal = g.nodes().all(|v| {
        in_set[v as usize]
            || g.neighbors(v).iter().any(|&w| in_set[w as usize])
    });
    MisReport {
        independent,
        maximal,
    }
}

// ---------------------------------------------------------------------------
// Witness validators, shared by algorithms and tests
// ---------------------------------------------------------------------------

pub fn is_vertex_cover(g: &Graph, set: &[NodeId]) -> bool {
    let mut in_set = vec![false; g.node_count()];
    for &v in set {
        in_set[v as usize] = true;
    }
    g.edges()
        .all(|(u, v)| in_set[u as usize] || in_set[v as usize])
}

pub fn is_dominating_set(g: &Graph, set: &[NodeId]) -> bool {
    let mut dominated = vec![false; g.node_count()];
    for &v in set {
        dominated[v as usize] = true;
        for &w in g.neighbors(v) {
            dominated[w as usize] = true;
        }
    }
    dominated.into_iter().all(|d| d)
}

/// True when the subgraph induced by `set` is connected (or `set` is empty).
pub fn induces_connected(g: &Graph, set: &[NodeId]) -> bool {
    if set.is_empty() {
        return true;
    }
    let mut in_set = vec![false; g.node_count()];
    for &v in set {
        in_set[v as usize] = true;
    }
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![set[0]];
    seen[set[0] as usize] = true;
    let mut count = 0usize;
    while let Some(u) = stack.pop() {
        count += 1;
        for &w in g.neighbors(u) {
            if in_set[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    let distinct: std::collections::HashSet<_> = set.iter().collect();
    count == distinct.len()
}

pub fn is_matching(g: &Graph, edges: &[(NodeId, NodeId)]) -> bool {
    let mut used = vec![false; g.node_count()];
    for &(u, v) in edges {
        if !g.has_edge(u, v) || used[u as usize] || used[v as usize] {
            return false;
        }
        used[u as usize] = true;
        used[v as usize] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn spec_values_for_small_graphs() {
        let triangle = gen::complete(3);
        assert_eq!(
            exact_solve(Problem::MinVertexCover, &triangle).unwrap().value,
            2
        );
        let star = gen::star(9);
        assert_eq!(
            exact_solve(Problem::MinDominatingSet, &star).unwrap().value,
            1
        );
        let p4 = gen::path(4);
        assert_eq!(exact_solve(Problem::MaxMatching, &p4).unwrap().value, 2);
    }

    #[test]
    fn mcds_of_paths_is_all_internal_nodes() {
        for n in 3..=8 {
            let g = gen::path(n);
            let sol = exact_solve(Problem::MinConnectedDominatingSet, &g).unwrap();
            assert_eq!(sol.value, n as u64 - 2, "MCDS of P_{n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = gen::path(40);
        assert!(matches!(
            exact_solve(Problem::MinVertexCover, &g),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(exact_solve_with_budget(Problem::MinVertexCover, &g, 64).is_ok());
    }

    #[test]
    fn mis_check_distinguishes_cases() {
        let g = gen::path(5);
        // {0}: node 3 is undominated, so not maximal.
        assert_eq!(
            check_mis(&g, &[0]),
            MisReport {
                independent: true,
                maximal: false
            }
        );
        assert_eq!(
            check_mis(&g, &[0, 2, 4]),
            MisReport {
                independent: true,
                maximal: true
            }
        );
        assert_eq!(
            check_mis(&g, &[1, 3]),
            MisReport {
                independent: true,
                maximal: true
            }
        );
        // Adjacent pair: not independent.
        assert!(!check_mis(&g, &[0, 1, 3]).independent);
    }
}
