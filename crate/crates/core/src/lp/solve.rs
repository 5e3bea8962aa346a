//! Local solving of covering/packing LPs via repeated decompositions.
//!
//! Each of `ell` independent clusterings of the dual-distance graph picks
//! a set of constraints; every cluster's restricted primal/dual sub-pair
//! is solved exactly at its leader, the solutions are summed, the dual is
//! averaged, and the primal is rescaled per-variable by the worst
//! satisfaction ratio among its constraints. Both outputs are feasible on
//! every seed; the objective ratio carries the approximation guarantee.

use super::{build_lp_network, CanonicalLp, LpKind};
use crate::engine::mix_seed;
use crate::error::{Error, Result};
use crate::lp::decompose::ls_decompose_with;
use crate::oracles::exact_lp;
use crate::par::{map_slice, Execution};
use crate::Rational;
use num::Zero;

/// Decomposition schedule for the local LP algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpParams {
    /// Number of independent decompositions.
    pub ell: u32,
    /// Radius-distribution parameter.
    pub p: f64,
    /// Decomposition radius (engine rounds per instance).
    pub radius: u32,
}

impl LpParams {
    /// Parameter schedule achieving a `1/(q(1-eps))` approximation with
    /// probability `1 - 1/n_d^beta`: `p = n_d^(-alpha/R)`,
    /// `q = p(1 - n_d p^R)`, `ell >= 2(1+beta) ln(n_d) / (eps^2 q)`.
    /// Returns the schedule together with `q`.
    pub fn theorem_schedule(
        n_d: usize,
        alpha: f64,
        beta: f64,
        eps: f64,
        radius: u32,
    ) -> Result<(LpParams, f64)> {
        if !(eps > 0.0 && eps < 1.0) || alpha <= 1.0 || radius == 0 {
            return Err(Error::InvalidLp(
                "need eps in (0,1), alpha > 1, radius >= 1".into(),
            ));
        }
        let nd = (n_d.max(2)) as f64;
        let p = nd.powf(-alpha / radius as f64).clamp(1e-9, 1.0 - 1e-9);
        let q = p * (1.0 - nd * p.powi(radius as i32));
        if q <= 0.0 {
            return Err(Error::InvalidLp(format!(
                "schedule gives non-positive success probability q = {q}"
            )));
        }
        let ell = (2.0 * (1.0 + beta) * nd.ln() / (eps * eps * q)).ceil().max(1.0);
        Ok((
            LpParams {
                ell: ell as u32,
                p,
                radius,
            },
            q,
        ))
    }
}

/// Output of one local LP run.
#[derive(Debug, Clone, PartialEq)]
pub struct LpLocalRun {
    /// Feasible covering solution.
    pub x: Vec<Rational>,
    /// Feasible packing solution.
    pub y: Vec<Rational>,
    pub primal_value: Rational,
    pub dual_value: Rational,
    /// Rows the division guard had to lift because no decomposition
    /// covered them; empty in the probable regime.
    pub guarded_rows: Vec<usize>,
}

impl LpLocalRun {
    /// `c'x / b'y`, an upper bound on both approximation ratios.
    pub fn ratio(&self) -> Option<Rational> {
        (!self.dual_value.is_zero()).then(|| &self.primal_value / &self.dual_value)
    }
}

pub fn solve_lp_local(lp: &CanonicalLp, params: LpParams, seed: u64) -> Result<LpLocalRun> {
    solve_lp_local_with(lp, params, seed, Execution::default())
}

pub fn solve_lp_local_with(
    lp: &CanonicalLp,
    params: LpParams,
    seed: u64,
    mode: Execution,
) -> Result<LpLocalRun> {
    if lp.kind != LpKind::Covering {
        return Err(Error::InvalidLp(
            "local LP solving expects the covering orientation".into(),
        ));
    }
    if params.ell == 0 {
        return Err(Error::InvalidLp("ell must be positive".into()));
    }
    let n_p = lp.n_p();
    let n_d = lp.n_d();
    let network = build_lp_network(lp);
    let dual_graph = network.decomposition_graph();

    // Independent decomposition instances; each contributes one pair of
    // partial solutions. Deterministic regardless of parallelism: the
    // instances are combined in index order.
    let instances: Vec<u64> = (0..params.ell as u64).collect();
    let partials = map_slice(mode, &instances, |&t| -> Result<_> {
        let dec = ls_decompose_with(
            &dual_graph,
            params.p,
            params.radius,
            mix_seed(seed, t),
            Execution::Sequential,
        )?;
        let mut x_t = vec![Rational::zero(); n_p];
        let mut y_t = vec![Rational::zero(); n_d];
        for (_leader, rows) in dec.clusters() {
            solve_sub_lp(lp, &rows, &mut x_t, &mut y_t)?;
        }
        Ok((x_t, y_t))
    });

    let mut x_sum = vec![Rational::zero(); n_p];
    let mut y_sum = vec![Rational::zero(); n_d];
    for partial in partials {
        let (x_t, y_t) = partial?;
        for (acc, v) in x_sum.iter_mut().zip(x_t) {
            *acc += v;
        }
        for (acc, v) in y_sum.iter_mut().zip(y_t) {
            *acc += v;
        }
    }

    // Division guard: a row no decomposition covered can have zero
    // left-hand side; lift a cheapest variable of that row to full
    // satisfaction so the scaling pass below is well defined.
    let mut guarded_rows = Vec::new();
    for j in 0..n_d {
        if lp.bounds[j].is_zero() {
            continue;
        }
        if lp.row_value(j, &x_sum).is_zero() {
            let (i_min, a) = lp.rows[j]
                .iter()
                .min_by(|(i1, _), (i2, _)| {
                    lp.objective[*i1]
                        .cmp(&lp.objective[*i2])
                        .then(i1.cmp(i2))
                })
                .expect("rows are non-empty");
            x_sum[*i_min] = &lp.bounds[j] / a;
            guarded_rows.push(j);
        }
    }

    // Per-variable scaling by the worst satisfaction ratio among the
    // variable's own constraints; keeps the primal feasible
    // unconditionally.
    let columns = lp.columns();
    let row_values: Vec<Rational> = (0..n_d).map(|j| lp.row_value(j, &x_sum)).collect();
    let x: Vec<Rational> = (0..n_p)
        .map(|i| {
            let min_ratio = columns[i]
                .iter()
                .filter(|&&j| !lp.bounds[j].is_zero())
                .map(|&j| &row_values[j] / &lp.bounds[j])
                .min();
            match min_ratio {
                Some(m) if !m.is_zero() => &x_sum[i] / m,
                // All of this variable's rows are trivial; it is not needed.
                _ => Rational::zero(),
            }
        })
        .collect();

    let ell = Rational::from_integer(params.ell.into());
    let y: Vec<Rational> = y_sum.into_iter().map(|v| v / &ell).collect();

    if !lp.primal_feasible(&x) {
        return Err(Error::InternalInconsistency(
            "combined primal solution infeasible".into(),
        ));
    }
    if !lp.dual_feasible(&y) {
        return Err(Error::InternalInconsistency(
            "combined dual solution infeasible".into(),
        ));
    }
    let primal_value = lp.primal_objective(&x);
    let dual_value = lp.dual_objective(&y);
    Ok(LpLocalRun {
        x,
        y,
        primal_value,
        dual_value,
        guarded_rows,
    })
}

/// Solves the sub-pair restricted to `rows` and accumulates the result.
/// The sub-LP keeps the rows' full variable support, so its dual extends
/// feasibly by zeros; an infeasible sub-LP cannot occur for valid inputs
/// and is reported as an internal inconsistency.
fn solve_sub_lp(
    lp: &CanonicalLp,
    rows: &[u32],
    x_acc: &mut [Rational],
    y_acc: &mut [Rational],
) -> Result<()> {
    let mut cols: Vec<usize> = rows
        .iter()
        .flat_map(|&j| lp.rows[j as usize].iter().map(|(i, _)| *i))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let col_index: std::collections::HashMap<usize, usize> =
        cols.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let sub_rows: Vec<Vec<(usize, Rational)>> = rows
        .iter()
        .map(|&j| {
            lp.rows[j as usize]
                .iter()
                .map(|(i, a)| (col_index[i], a.clone()))
                .collect()
        })
        .collect();
    let sub = CanonicalLp::new(
        LpKind::Covering,
        cols.iter().map(|&i| lp.objective[i].clone()).collect(),
        rows.iter().map(|&j| lp.bounds[j as usize].clone()).collect(),
        sub_rows,
    )
    .map_err(|e| Error::InternalInconsistency(format!("sub-LP construction: {e}")))?;
    let sol = exact_lp(&sub)
        .map_err(|e| Error::InternalInconsistency(format!("sub-LP solve: {e}")))?;
    for (k, &i) in cols.iter().enumerate() {
        x_acc[i] += &sol.primal[k];
    }
    for (k, &j) in rows.iter().enumerate() {
        y_acc[j as usize] += &sol.dual[k];
    }
    Ok(())
}
