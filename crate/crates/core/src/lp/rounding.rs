//! Distributed randomized rounding for 0/1 integer covering and packing
//! programs, plus the dominating-set pipeline built from them.

use super::{dominating_set_lp, solve_lp_local_with, CanonicalLp, LpKind, LpLocalRun, LpParams};
use crate::engine::mix_seed;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::par::Execution;
use crate::Rational;
use num::{BigInt, One, Signed, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Smallest admissible inflation factor is `2 + sqrt(3)`; this default
/// stays comfortably above it.
pub const DEFAULT_LAMBDA: f64 = 4.0;

fn require_zero_one(lp: &CanonicalLp) -> Result<()> {
    if !lp.is_zero_one() {
        return Err(Error::InvalidCoefficients(
            "matrix entries must be 0 or 1".into(),
        ));
    }
    Ok(())
}

fn integral_u64(values: &[Rational], what: &str) -> Result<Vec<u64>> {
    values
        .iter()
        .map(|v| {
            if !v.denom().is_one() || v.is_negative() {
                return Err(Error::InvalidCoefficients(format!(
                    "{what} must be nonnegative integers (round beforehand)"
                )));
            }
            v.numer()
                .to_u64()
                .ok_or_else(|| Error::InvalidCoefficients(format!("{what} out of range")))
        })
        .collect()
}

/// Rounds a feasible fractional covering solution to nonnegative
/// integers. Large variables are rounded up, small ones flip a coin
/// inflated by `lambda ln(max primal degree)`, and a repair pass tops up
/// every unsatisfied row at its cheapest variable, so the output is
/// feasible on every seed. With max primal degree at most 2 the
/// coin-flip stage is skipped and the repair pass alone does the work.
pub fn round_covering(
    lp: &CanonicalLp,
    x: &[Rational],
    lambda: f64,
    seed: u64,
) -> Result<Vec<u64>> {
    require_zero_one(lp)?;
    if lp.kind != LpKind::Covering {
        return Err(Error::InvalidCoefficients(
            "covering rounding expects a covering program".into(),
        ));
    }
    if x.len() != lp.n_p() {
        return Err(Error::InvalidLp("solution length mismatch".into()));
    }
    let bounds = integral_u64(&lp.bounds, "bounds")?;
    let ln_dp = (lp.delta_p() as f64).ln();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounded: Vec<u64> = if ln_dp < 1.0 {
        vec![0; lp.n_p()]
    } else {
        let threshold = 1.0 / (lambda * ln_dp);
        x.iter()
            .map(|xi| {
                let xf = xi.to_f64().unwrap_or(0.0);
                if xf >= threshold {
                    xi.ceil().numer().to_u64().unwrap_or(u64::MAX)
                } else {
                    u64::from(rng.gen_bool((xf * lambda * ln_dp).clamp(0.0, 1.0)))
                }
            })
            .collect()
    };

    // Repair: deficits are measured simultaneously on the coin-flipped
    // vector, then every row tops up its cheapest variable.
    let mut additions: Vec<(usize, u64)> = Vec::new();
    for (j, row) in lp.rows.iter().enumerate() {
        let have: u64 = row.iter().map(|(i, _)| rounded[*i]).sum();
        if have < bounds[j] {
            let i_min = row
                .iter()
                .map(|(i, _)| *i)
                .min_by(|a, b| lp.objective[*a].cmp(&lp.objective[*b]).then(a.cmp(b)))
                .expect("rows are non-empty");
            additions.push((i_min, bounds[j] - have));
        }
    }
    for (i, add) in additions {
        rounded[i] += add;
    }

    debug_assert!((0..lp.n_d()).all(|j| {
        lp.rows[j].iter().map(|(i, _)| rounded[*i]).sum::<u64>() >= bounds[j]
    }));
    Ok(rounded)
}

/// Rounds a feasible fractional packing solution to nonnegative
/// integers: floors for variables at least 1, a `1/(2e Delta_d)` coin
/// for the rest, and every raised variable sitting in an overfull
/// constraint reverts to its floor. Feasible on every seed.
pub fn round_packing(lp: &CanonicalLp, y: &[Rational], seed: u64) -> Result<Vec<u64>> {
    require_zero_one(lp)?;
    if lp.kind != LpKind::Packing {
        return Err(Error::InvalidCoefficients(
            "packing rounding expects a packing program".into(),
        ));
    }
    if y.len() != lp.n_d() {
        return Err(Error::InvalidLp("solution length mismatch".into()));
    }
    let capacities = integral_u64(&lp.objective, "capacities")?;
    let delta_d = lp.delta_d() as f64;
    let p = 1.0 / (2.0 * std::f64::consts::E * delta_d);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let floors: Vec<u64> = y
        .iter()
        .map(|yi| yi.floor().numer().to_u64().unwrap_or(0))
        .collect();
    let mut rounded: Vec<u64> = y
        .iter()
        .zip(&floors)
        .map(|(yi, &fl)| {
            if yi >= &Rational::one() {
                fl
            } else {
                u64::from(rng.gen_bool(p))
            }
        })
        .collect();

    // Revert pass, evaluated simultaneously against the raw rounding.
    let columns = lp.columns();
    let violated: Vec<bool> = (0..lp.n_p())
        .map(|i| {
            let used: u64 = columns[i].iter().map(|&j| rounded[j]).sum();
            used > capacities[i]
        })
        .collect();
    for j in 0..lp.n_d() {
        if lp.rows[j].iter().any(|(i, _)| violated[*i]) {
            rounded[j] = floors[j];
        }
    }

    debug_assert!((0..lp.n_p()).all(|i| {
        columns[i].iter().map(|&j| rounded[j]).sum::<u64>() <= capacities[i]
    }));
    Ok(rounded)
}

// ---------------------------------------------------------------------------
// Dominating set pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdsParams {
    pub lp: LpParams,
    pub lambda: f64,
}

impl MdsParams {
    pub fn new(lp: LpParams) -> MdsParams {
        MdsParams {
            lp,
            lambda: DEFAULT_LAMBDA,
        }
    }
}

/// Outcome of the fractional-solve-then-round dominating set pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct MdsRun {
    pub dominating_set: Vec<NodeId>,
    pub fractional: LpLocalRun,
    pub rounded: Vec<u64>,
}

/// Builds the closed-neighborhood covering LP of `g`, solves it locally,
/// and rounds. The result is a valid dominating set on every seed.
pub fn mds_pipeline(g: &Graph, params: MdsParams, seed: u64) -> Result<MdsRun> {
    mds_pipeline_with(g, params, seed, Execution::default())
}

pub fn mds_pipeline_with(
    g: &Graph,
    params: MdsParams,
    seed: u64,
    mode: Execution,
) -> Result<MdsRun> {
    let lp = dominating_set_lp(g)?;
    let fractional = solve_lp_local_with(&lp, params.lp, seed, mode)?;
    let rounded = round_covering(&lp, &fractional.x, params.lambda, mix_seed(seed, 0x60d))?;
    let dominating_set: Vec<NodeId> = rounded
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= 1)
        .map(|(i, _)| i as NodeId)
        .collect();
    Ok(MdsRun {
        dominating_set,
        fractional,
        rounded,
    })
}

/// Objective value of an integer vector under exact arithmetic.
pub fn integral_objective(weights: &[Rational], values: &[u64]) -> Rational {
    weights
        .iter()
        .zip(values)
        .map(|(w, &v)| w * Rational::from(BigInt::from(v)))
        .sum()
}
