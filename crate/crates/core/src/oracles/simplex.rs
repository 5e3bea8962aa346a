//! Exact LP solving over the rationals.
//!
//! A covering/packing pair shares one data triple, so a single primal
//! simplex on the packing side `max b'y s.t. A'y <= c, y >= 0` delivers
//! both optima: the slack basis is feasible (`c >= 0`), Bland's rule
//! rules out cycling, and at optimality the covering solution is read off
//! the reduced costs of the slack columns. Everything is `BigRational`;
//! there are no tolerances.

use crate::error::{Error, Result};
use crate::lp::{CanonicalLp, LpKind};
use crate::Rational;
use num::{One, Signed, Zero};

/// Exact optimum of a covering/packing pair: primal covering vector,
/// dual packing vector, one shared optimal value.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    /// Covering solution `x` (length `n_p`), `Ax >= b`.
    pub primal: Vec<Rational>,
    /// Packing solution `y` (length `n_d`), `A'y <= c`.
    pub dual: Vec<Rational>,
}

const DIMENSION_BUDGET: usize = 200;

/// Solves the pair exactly. For validated covering/packing data the
/// optimum always exists; `Infeasible`/`Unbounded` can only surface for
/// inputs that slipped past validation.
pub fn exact_lp(lp: &CanonicalLp) -> Result<LpSolution> {
    if lp.n_p() > DIMENSION_BUDGET || lp.n_d() > DIMENSION_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "LP is {} x {}, budget {DIMENSION_BUDGET}",
            lp.n_d(),
            lp.n_p()
        )));
    }
    let m = lp.n_p(); // tableau rows: one per primal variable
    let nd = lp.n_d(); // structural columns
    let total = nd + m;

    // Tableau of A' with slacks; row i encodes sum_j a_ji y_j + s_i = c_i.
    let mut tab: Vec<Vec<Rational>> = vec![vec![Rational::zero(); total + 1]; m];
    for (j, row) in lp.rows.iter().enumerate() {
        for (i, a) in row {
            tab[*i][j] = a.clone();
        }
    }
    for i in 0..m {
        tab[i][nd + i] = Rational::one();
        tab[i][total] = lp.objective[i].clone();
    }
    let mut obj: Vec<Rational> = (0..total)
        .map(|j| {
            if j < nd {
                lp.bounds[j].clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut value = Rational::zero();
    let mut basis: Vec<usize> = (0..m).map(|i| nd + i).collect();

    loop {
        // Bland: entering column is the smallest index with positive
        // reduced cost.
        let Some(enter) = (0..total).find(|&j| obj[j].is_positive()) else {
            break;
        };
        // Ratio test; Bland tie-break on the leaving basic variable.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][total] / &tab[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(match lp.kind {
                LpKind::Covering => Error::Infeasible,
                LpKind::Packing => Error::Unbounded,
            });
        };

        // Pivot at (r, enter).
        let pivot = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..m {
            if i != r && !tab[i][enter].is_zero() {
                let factor = tab[i][enter].clone();
                for j in 0..=total {
                    let delta = &factor * &tab[r][j];
                    tab[i][j] -= delta;
                }
            }
        }
        let factor = obj[enter].clone();
        value += &factor * &tab[r][total];
        for j in 0..total {
            let delta = &factor * &tab[r][j];
            obj[j] -= delta;
        }
        basis[r] = enter;
    }

    let mut dual = vec![Rational::zero(); nd];
    for i in 0..m {
        if basis[i] < nd {
            dual[basis[i]] = tab[i][total].clone();
        }
    }
    let primal: Vec<Rational> = (0..m).map(|i| -obj[nd + i].clone()).collect();

    // Strong duality and feasibility are exact postconditions here; a
    // failure is an implementation bug, not an input property.
    if !lp.primal_feasible(&primal)
        || !lp.dual_feasible(&dual)
        || lp.primal_objective(&primal) != value
        || lp.dual_objective(&dual) != value
    {
        return Err(Error::InternalInconsistency(
            "simplex postcondition violated".into(),
        ));
    }
    Ok(LpSolution {
        value,
        primal,
        dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{dominating_set_lp, matching_lp, vertex_cover_lp};
    use crate::oracles::{exact_solve, Problem};
    use crate::{gen, ratio, Rational};
    use num::One;

    #[test]
    fn triangle_vc_relaxation_is_half_integral() {
        let lp = vertex_cover_lp(&gen::complete(3)).unwrap();
        let sol = exact_lp(&lp).unwrap();
        assert_eq!(sol.value, ratio(3, 2));
        assert_eq!(sol.primal, vec![ratio(1, 2); 3]);
    }

    #[test]
    fn diagonal_identity_lp() {
        let one = Rational::one;
        let n = 5;
        let rows = (0..n).map(|i| vec![(i, one())]).collect();
        let lp = CanonicalLp::new(
            crate::lp::LpKind::Covering,
            vec![one(); n],
            vec![one(); n],
            rows,
        )
        .unwrap();
        let sol = exact_lp(&lp).unwrap();
        assert_eq!(sol.value, ratio(n as i64, 1));
        assert_eq!(sol.primal, vec![one(); n]);
    }

    #[test]
    fn star_mds_relaxation_puts_weight_on_center() {
        let lp = dominating_set_lp(&gen::star(9)).unwrap();
        let sol = exact_lp(&lp).unwrap();
        assert_eq!(sol.value, Rational::one());
        assert_eq!(sol.primal[0], Rational::one());
    }

    #[test]
    fn fractional_vc_equals_fractional_matching() {
        // Same data, both readings: strong duality is exact.
        for seed in 0..10 {
            let g = gen::gnp(10, 0.35, seed).drop_isolated().graph;
            if g.edge_count() == 0 {
                continue;
            }
            let cover = exact_lp(&vertex_cover_lp(&g).unwrap()).unwrap();
            let matching = exact_lp(&matching_lp(&g).unwrap()).unwrap();
            assert_eq!(cover.value, matching.value);
        }
    }

    #[test]
    fn koenig_on_bipartite_graphs() {
        // Fractional and integral vertex cover coincide on bipartite graphs.
        for (a, b) in [(2, 3), (3, 3), (4, 2)] {
            let g = gen::complete_bipartite(a, b);
            let lp_value = exact_lp(&vertex_cover_lp(&g).unwrap()).unwrap().value;
            let integral = exact_solve(Problem::MinVertexCover, &g).unwrap().value;
            assert_eq!(lp_value, ratio(integral as i64, 1));
        }
        for seed in 0..10 {
            // Random bipartite graphs via random subgraphs of K_{5,5}.
            let g = gen::complete_bipartite(5, 5);
            let keep = gen::gnp(10, 0.5, seed);
            let edges: Vec<_> = g.edges().filter(|&(u, v)| keep.has_edge(u, v)).collect();
            if edges.is_empty() {
                continue;
            }
            let h = Graph::from_edges(10, edges).unwrap().drop_isolated().graph;
            let lp_value = exact_lp(&vertex_cover_lp(&h).unwrap()).unwrap().value;
            let integral = exact_solve(Problem::MinVertexCover, &h).unwrap().value;
            assert_eq!(lp_value, ratio(integral as i64, 1), "seed {seed}");
        }
    }

    #[test]
    fn integrality_gap_is_at_most_two() {
        for seed in 0..10 {
            let g = gen::gnp(9, 0.4, seed).drop_isolated().graph;
            if g.edge_count() == 0 {
                continue;
            }
            let tau_f = exact_lp(&vertex_cover_lp(&g).unwrap()).unwrap().value;
            let tau = exact_solve(Problem::MinVertexCover, &g).unwrap().value;
            let tau = ratio(tau as i64, 1);
            assert!(tau_f <= tau);
            assert!(tau <= ratio(2, 1) * tau_f);
        }
    }

    use crate::graph::Graph;
    use crate::lp::CanonicalLp;

    #[test]
    fn dual_witness_is_returned_for_packing_input() {
        let lp = matching_lp(&gen::cycle(6)).unwrap();
        let sol = exact_lp(&lp).unwrap();
        // Even cycle: perfect fractional matching of value n/2 = 3.
        assert_eq!(sol.value, ratio(3, 1));
        assert!(lp.dual_feasible(&sol.dual));
        assert_eq!(lp.dual_objective(&sol.dual), ratio(3, 1));
    }
}
