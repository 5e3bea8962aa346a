//! Covering and packing linear programs in canonical form, their network
//! mapping, the cluster decomposition, the local LP algorithm, and
//! randomized rounding.
//!
//! One data triple `(A, b, c)` with nonnegative entries describes a
//! primal/dual pair: the covering program `min c'x  s.t. Ax >= b, x >= 0`
//! and the packing program `max b'y  s.t. A'y <= c, y >= 0`. The `kind`
//! field records which of the two a value refers to.

mod decompose;
mod rounding;
mod solve;

pub use decompose::{ls_decompose, ls_decompose_with, Decomposition};
pub use rounding::{
    integral_objective, mds_pipeline, mds_pipeline_with, round_covering, round_packing, MdsParams,
    MdsRun, DEFAULT_LAMBDA,
};
pub use solve::{solve_lp_local, solve_lp_local_with, LpLocalRun, LpParams};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::Rational;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpKind {
    Covering,
    Packing,
}

/// A covering or packing LP with exact rational data.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalLp {
    pub kind: LpKind,
    /// Objective vector `c`, one entry per primal variable.
    pub objective: Vec<Rational>,
    /// Bound vector `b`, one entry per constraint / dual variable.
    pub bounds: Vec<Rational>,
    /// Sparse rows of `A` (`n_d` rows by `n_p` columns); each row holds
    /// `(column, coefficient)` sorted by column.
    pub rows: Vec<Vec<(usize, Rational)>>,
}

impl CanonicalLp {
    pub fn new(
        kind: LpKind,
        objective: Vec<Rational>,
        bounds: Vec<Rational>,
        mut rows: Vec<Vec<(usize, Rational)>>,
    ) -> Result<CanonicalLp> {
        let n_p = objective.len();
        let n_d = bounds.len();
        if n_p == 0 || n_d == 0 {
            return Err(Error::InvalidLp("empty objective or bounds".into()));
        }
        if rows.len() != n_d {
            return Err(Error::InvalidLp(format!(
                "{} rows for {} bounds",
                rows.len(),
                n_d
            )));
        }
        if objective.iter().any(|c| c < &Rational::zero()) {
            return Err(Error::InvalidLp("negative objective coefficient".into()));
        }
        if bounds.iter().any(|b| b < &Rational::zero()) {
            return Err(Error::InvalidLp("negative bound".into()));
        }
        let mut col_used = vec![false; n_p];
        for (j, row) in rows.iter_mut().enumerate() {
            row.retain(|(_, a)| !a.is_zero());
            row.sort_by_key(|&(i, _)| i);
            if row.is_empty() {
                return Err(Error::InvalidLp(format!("row {j} is all-zero")));
            }
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidLp(format!("row {j} has duplicate columns")));
            }
            for (i, a) in row.iter() {
                if *i >= n_p {
                    return Err(Error::InvalidLp(format!("row {j} references column {i}")));
                }
                if a < &Rational::zero() {
                    return Err(Error::InvalidLp("negative matrix coefficient".into()));
                }
                col_used[*i] = true;
            }
        }
        if let Some(i) = col_used.iter().position(|u| !u) {
            return Err(Error::InvalidLp(format!("column {i} is all-zero")));
        }
        Ok(CanonicalLp {
            kind,
            objective,
            bounds,
            rows,
        })
    }

    /// Number of primal variables (columns).
    pub fn n_p(&self) -> usize {
        self.objective.len()
    }

    /// Number of constraints / dual variables (rows).
    pub fn n_d(&self) -> usize {
        self.bounds.len()
    }

    /// Per-column supports (row indices), derived.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.n_p()];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, _) in row {
                cols[*i].push(j);
            }
        }
        cols
    }

    /// Maximum primal degree: the largest number of constraints any
    /// variable appears in.
    pub fn delta_p(&self) -> usize {
        self.columns().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Maximum dual degree: the largest row support.
    pub fn delta_d(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when every matrix coefficient is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().all(|(_, a)| a.is_one()))
    }

    pub fn row_value(&self, j: usize, x: &[Rational]) -> Rational {
        self.rows[j]
            .iter()
            .map(|(i, a)| a * &x[*i])
            .sum()
    }

    /// `A'y` entry for column `i`.
    pub fn column_value(&self, i: usize, y: &[Rational]) -> Rational {
        self.rows
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .find(|(c, _)| *c == i)
                    .map(|(_, a)| a * &y[j])
                    .unwrap_or_else(Rational::zero)
            })
            .sum()
    }

    /// Checks `Ax >= b` exactly.
    pub fn primal_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.n_p()
            && x.iter().all(|v| v >= &Rational::zero())
            && (0..self.n_d()).all(|j| self.row_value(j, x) >= self.bounds[j])
    }

    /// Checks `A'y <= c` exactly.
    pub fn dual_feasible(&self, y: &[Rational]) -> bool {
        if y.len() != self.n_d() || y.iter().any(|v| v < &Rational::zero()) {
            return false;
        }
        let mut col_sums = vec![Rational::zero(); self.n_p()];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, a) in row {
                col_sums[*i] += a * &y[j];
            }
        }
        col_sums
            .iter()
            .zip(&self.objective)
            .all(|(s, c)| s <= c)
    }

    pub fn primal_objective(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn dual_objective(&self, y: &[Rational]) -> Rational {
        self.bounds.iter().zip(y).map(|(b, v)| b * v).sum()
    }
}

// ---------------------------------------------------------------------------
// The LP network and the decomposition graph
// ---------------------------------------------------------------------------

/// Bipartite network of an LP: primal node `i` is graph node `i`, dual
/// node `j` is graph node `n_p + j`, with an edge wherever `a_ji != 0`.
#[derive(Debug, Clone)]
pub struct LpNetwork {
    pub graph: Graph,
    pub n_p: usize,
    pub n_d: usize,
}

impl LpNetwork {
    pub fn primal_node(&self, i: usize) -> NodeId {
        i as NodeId
    }

    pub fn dual_node(&self, j: usize) -> NodeId {
        (self.n_p + j) as NodeId
    }

    /// The derived graph on dual nodes with an edge between duals at
    /// network distance at most 4: the graph the decomposition runs on.
    /// Node `j` of the result is dual variable `j`.
    pub fn decomposition_graph(&self) -> Graph {
        let duals: Vec<NodeId> = (0..self.n_d).map(|j| self.dual_node(j)).collect();
        self.graph
            .distance_power(&duals, 4)
            .expect("dual nodes are valid")
            .graph
    }
}

pub fn build_lp_network(lp: &CanonicalLp) -> LpNetwork {
    let n_p = lp.n_p();
    let n_d = lp.n_d();
    let mut edges = Vec::new();
    for (j, row) in lp.rows.iter().enumerate() {
        for (i, _) in row {
            edges.push((*i as NodeId, (n_p + j) as NodeId));
        }
    }
    LpNetwork {
        graph: Graph::from_edges(n_p + n_d, edges).expect("LP network is simple"),
        n_p,
        n_d,
    }
}

// ---------------------------------------------------------------------------
// Relaxations of the graph problems
// ---------------------------------------------------------------------------

/// Fractional vertex cover LP: one variable per node, one constraint per
/// edge (`x_u + x_v >= 1`).
pub fn vertex_cover_lp(g: &Graph) -> Result<CanonicalLp> {
    if g.edge_count() == 0 {
        return Err(Error::InvalidLp("graph has no edges".into()));
    }
    let one = Rational::one;
    let rows = g
        .edges()
        .map(|(u, v)| vec![(u as usize, one()), (v as usize, one())])
        .collect();
    CanonicalLp::new(
        LpKind::Covering,
        vec![one(); g.node_count()],
        vec![one(); g.edge_count()],
        rows,
    )
}

/// Fractional maximum matching LP: the packing dual of the vertex cover
/// relaxation on the same data.
pub fn matching_lp(g: &Graph) -> Result<CanonicalLp> {
    let mut lp = vertex_cover_lp(g)?;
    lp.kind = LpKind::Packing;
    Ok(lp)
}

/// Fractional dominating set LP: one variable per node, one constraint
/// per node over its closed neighborhood.
pub fn dominating_set_lp(g: &Graph) -> Result<CanonicalLp> {
    if g.node_count() == 0 {
        return Err(Error::InvalidLp("empty graph".into()));
    }
    let one = Rational::one;
    let rows = g
        .nodes()
        .map(|v| {
            let mut row: Vec<(usize, Rational)> =
                g.neighbors(v).iter().map(|&w| (w as usize, one())).collect();
            row.push((v as usize, one()));
            row
        })
        .collect();
    CanonicalLp::new(
        LpKind::Covering,
        vec![one(); g.node_count()],
        vec![one(); g.node_count()],
        rows,
    )
}

// ---------------------------------------------------------------------------
// Serialization: { kind, c, b, A } with exact rationals as "num/den"
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LpDoc {
    kind: String,
    c: Vec<String>,
    b: Vec<String>,
    #[serde(rename = "A")]
    a: Vec<(usize, usize, String)>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |_| Error::Parse(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(bad)?;
            let den = BigInt::from_str(den.trim()).map_err(bad)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from(BigInt::from_str(s.trim()).map_err(bad)?)),
    }
}

pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl CanonicalLp {
    pub fn to_json(&self) -> String {
        let doc = LpDoc {
            kind: match self.kind {
                LpKind::Covering => "covering".into(),
                LpKind::Packing => "packing".into(),
            },
            c: self.objective.iter().map(rational_string).collect(),
            b: self.bounds.iter().map(rational_string).collect(),
            a: self
                .rows
                .iter()
                .enumerate()
                .flat_map(|(j, row)| {
                    row.iter()
                        .map(move |(i, a)| (j, *i, rational_string(a)))
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("LP serializes")
    }

    pub fn from_json(text: &str) -> Result<CanonicalLp> {
        let doc: LpDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let kind = match doc.kind.as_str() {
            "covering" => LpKind::Covering,
            "packing" => LpKind::Packing,
            other => return Err(Error::Parse(format!("unknown LP kind {other:?}"))),
        };
        let objective = doc
            .c
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let bounds = doc
            .b
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); bounds.len()];
        for (j, i, s) in &doc.a {
            if *j >= rows.len() {
                return Err(Error::Parse(format!("entry references row {j}")));
            }
            rows[*j].push((*i, parse_rational(s)?));
        }
        CanonicalLp::new(kind, objective, bounds, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::ratio;

    #[test]
    fn validation_rejects_degenerate_lps() {
        let one = Rational::one;
        // All-zero row.
        assert!(CanonicalLp::new(
            LpKind::Covering,
            vec![one()],
            vec![one()],
            vec![vec![]],
        )
        .is_err());
        // Unreferenced column.
        assert!(CanonicalLp::new(
            LpKind::Covering,
            vec![one(), one()],
            vec![one()],
            vec![vec![(0, one())]],
        )
        .is_err());
        // Negative coefficient.
        assert!(CanonicalLp::new(
            LpKind::Covering,
            vec![one()],
            vec![one()],
            vec![vec![(0, ratio(-1, 1))]],
        )
        .is_err());
    }

    #[test]
    fn triangle_vc_network_is_a_six_cycle() {
        let lp = vertex_cover_lp(&gen::complete(3)).unwrap();
        let net = build_lp_network(&lp);
        assert_eq!(net.graph.node_count(), 6);
        assert_eq!(net.graph.edge_count(), 6);
        assert_eq!(net.graph.girth(), Some(6));
    }

    #[test]
    fn diagonal_lp_network_is_a_perfect_matching() {
        let one = Rational::one;
        let n = 4;
        let rows = (0..n).map(|i| vec![(i, one())]).collect();
        let lp = CanonicalLp::new(LpKind::Covering, vec![one(); n], vec![one(); n], rows).unwrap();
        let net = build_lp_network(&lp);
        assert_eq!(net.graph.edge_count(), n);
        assert!(net.graph.nodes().all(|v| net.graph.degree(v) == 1));
    }

    #[test]
    fn single_constraint_network_is_a_star() {
        let one = Rational::one;
        let rows = vec![(0..5).map(|i| (i, one())).collect()];
        let lp = CanonicalLp::new(LpKind::Covering, vec![one(); 5], vec![one()], rows).unwrap();
        let net = build_lp_network(&lp);
        assert_eq!(net.graph.node_count(), 6);
        assert_eq!(net.graph.degree(net.dual_node(0)), 5);
    }

    #[test]
    fn degrees_match_definitions() {
        let lp = dominating_set_lp(&gen::star(5)).unwrap();
        // The star's center appears in every closed neighborhood.
        assert_eq!(lp.delta_p(), 5);
        assert_eq!(lp.delta_d(), 5);
        assert!(lp.is_zero_one());
    }

    #[test]
    fn json_round_trip_preserves_exact_rationals() {
        let lp = CanonicalLp::new(
            LpKind::Packing,
            vec![ratio(7, 3), Rational::one()],
            vec![ratio(1, 2)],
            vec![vec![(0, ratio(2, 5)), (1, Rational::one())]],
        )
        .unwrap();
        let back = CanonicalLp::from_json(&lp.to_json()).unwrap();
        assert_eq!(lp, back);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("5").unwrap(), ratio(5, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
