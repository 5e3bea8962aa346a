//! Simultaneous k-round approximation of minimum vertex cover and
//! fractional maximum matching.
//!
//! The loop runs `k` iterations with counter `l = k-1 .. 0`. In each
//! iteration a node with dynamic degree (uncovered incident edges)
//! `dd >= (max neighbor dd)^(l/(l+1))` joins the cover and spreads
//! `1/dd` of dual value over its currently uncovered incident edges;
//! afterwards any node whose incident dual sum reached 1 joins as well
//! and scales its incident duals proportionally so its sum grows by
//! exactly 1. All joins of a wave are simultaneous, based on the wave's
//! starting values. At the end every edge dual is divided by the larger
//! incident dual sum, which makes the duals a feasible fractional
//! matching. Duals are exact rationals; the threshold test is the
//! integer comparison `dd^(l+1) >= (max dd)^l`, so no real-valued roots
//! appear anywhere.
//!
//! Each iteration costs three engine rounds (degree exchange, first
//! wave, second wave) plus one closing round for the normalization.

use crate::engine::{run_protocol_with, Outbox, ProtocolRng, RoundProtocol};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::oracles::is_vertex_cover;
use crate::par::Execution;
use crate::Rational;
use num::{BigInt, BigUint, One, Zero};

/// Protocol object; `k` is the iteration count of the main loop.
pub struct MvcFmm {
    pub k: u32,
}

impl MvcFmm {
    /// Engine rounds one run takes: three per iteration plus the final
    /// normalization exchange.
    pub fn rounds_for(k: u32) -> u32 {
        3 * k + 1
    }
}

#[derive(Clone)]
pub enum MvcMsg {
    Degree(u64),
    Wave1 { joined: bool, dyn_deg: u64 },
    Wave2 { joined: bool, y_sum: Rational },
    FinalSum(Rational),
}

pub struct MvcNodeState {
    neighbors: Vec<NodeId>,
    in_cover: bool,
    nb_covered: Vec<bool>,
    /// Shared edge duals, indexed like `neighbors`; both endpoints keep
    /// consistent copies.
    y: Vec<Rational>,
    y_normalized: Vec<Rational>,
    dyn_deg: u64,
    dd_history: Vec<u64>,
    join1: bool,
    join2: bool,
    y_sum_at_wave2: Rational,
    final_sum: Rational,
}

impl MvcNodeState {
    fn nb_index(&self, nb: NodeId) -> usize {
        self.neighbors.binary_search(&nb).expect("sender is a neighbor")
    }

    fn uncovered(&self, idx: usize) -> bool {
        !self.in_cover && !self.nb_covered[idx]
    }

    fn dynamic_degree(&self) -> u64 {
        if self.in_cover {
            return 0;
        }
        self.nb_covered.iter().filter(|c| !**c).count() as u64
    }

    fn y_sum(&self) -> Rational {
        self.y.iter().sum()
    }
}

/// Per-node result of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct MvcNodeOutput {
    pub in_cover: bool,
    /// Normalized duals of the node's incident edges.
    pub duals: Vec<(NodeId, Rational)>,
    /// Dynamic degree at the start of every iteration.
    pub dd_history: Vec<u64>,
    /// Incident dual sum before normalization.
    pub final_sum: Rational,
}

fn inv(n: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n))
}

impl RoundProtocol for MvcFmm {
    type State = MvcNodeState;
    type Msg = MvcMsg;
    type Output = MvcNodeOutput;

    fn init(
        &self,
        _node: NodeId,
        neighbors: &[NodeId],
        _label: Option<i64>,
        _rng: ProtocolRng,
    ) -> MvcNodeState {
        MvcNodeState {
            neighbors: neighbors.to_vec(),
            in_cover: false,
            nb_covered: vec![false; neighbors.len()],
            y: vec![Rational::zero(); neighbors.len()],
            y_normalized: vec![Rational::zero(); neighbors.len()],
            dyn_deg: 0,
            dd_history: Vec::new(),
            join1: false,
            join2: false,
            y_sum_at_wave2: Rational::zero(),
            final_sum: Rational::zero(),
        }
    }

    fn send(&self, state: &MvcNodeState, round: u32, out: &mut Outbox<MvcMsg>) {
        let msg = if round == 3 * self.k {
            MvcMsg::FinalSum(state.y_sum())
        } else {
            match round % 3 {
                0 => MvcMsg::Degree(state.dynamic_degree()),
                1 => MvcMsg::Wave1 {
                    joined: state.join1,
                    dyn_deg: state.dyn_deg,
                },
                _ => MvcMsg::Wave2 {
                    joined: state.join2,
                    y_sum: state.y_sum_at_wave2.clone(),
                },
            }
        };
        for &w in &state.neighbors {
            out.send(w, msg.clone());
        }
    }

    fn receive(&self, state: &mut MvcNodeState, round: u32, inbox: &[(NodeId, MvcMsg)]) {
        if round == 3 * self.k {
            // Closing exchange: divide every dual by the larger incident
            // sum. Both endpoints compute the same quotient.
            state.final_sum = state.y_sum();
            for &(nb, ref msg) in inbox {
                let MvcMsg::FinalSum(other) = msg else { continue };
                let idx = state.nb_index(nb);
                if state.y[idx].is_zero() {
                    continue;
                }
                let denom = state.final_sum.clone().max(other.clone());
                state.y_normalized[idx] = &state.y[idx] / denom;
            }
            return;
        }
        let l = self.k - 1 - round / 3; // loop counter of this iteration
        match round % 3 {
            0 => {
                // Degree exchange: record the iteration-start dynamic
                // degree and test the join threshold exactly.
                let dd = state.dynamic_degree();
                state.dyn_deg = dd;
                state.dd_history.push(dd);
                let max_nb = inbox
                    .iter()
                    .filter_map(|(_, m)| match m {
                        MvcMsg::Degree(d) => Some(*d),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                state.join1 = !state.in_cover
                    && dd >= 1
                    && BigUint::from(dd).pow(l + 1) >= BigUint::from(max_nb).pow(l);
            }
            1 => {
                // First wave: joiners spread 1/dd over edges that were
                // uncovered at the wave's start.
                for &(nb, ref msg) in inbox {
                    let MvcMsg::Wave1 { joined, dyn_deg } = msg else { continue };
                    let idx = state.nb_index(nb);
                    if *joined && state.uncovered(idx) {
                        state.y[idx] += inv(*dyn_deg);
                    }
                }
                if state.join1 {
                    let own = inv(state.dyn_deg);
                    for idx in 0..state.neighbors.len() {
                        if state.uncovered(idx) {
                            state.y[idx] += &own;
                        }
                    }
                }
                // Joins take effect only now.
                for &(nb, ref msg) in inbox {
                    if let MvcMsg::Wave1 { joined: true, .. } = msg {
                        let idx = state.nb_index(nb);
                        state.nb_covered[idx] = true;
                    }
                }
                if state.join1 {
                    state.in_cover = true;
                }
                let sum = state.y_sum();
                state.join2 = !state.in_cover && sum >= Rational::one();
                state.y_sum_at_wave2 = sum;
            }
            _ => {
                // Second wave: every joiner scales its incident duals by
                // (1 + 1/Y); simultaneous joiners compound additively on
                // shared edges.
                let own_inv = if state.join2 {
                    state.y_sum_at_wave2.recip()
                } else {
                    Rational::zero()
                };
                for &(nb, ref msg) in inbox {
                    let MvcMsg::Wave2 { joined, y_sum } = msg else { continue };
                    let idx = state.nb_index(nb);
                    let mut factor = Rational::one() + &own_inv;
                    if *joined {
                        factor += y_sum.recip();
                        state.nb_covered[idx] = true;
                    }
                    let updated = &state.y[idx] * factor;
                    state.y[idx] = updated;
                }
                if state.join2 {
                    state.in_cover = true;
                }
            }
        }
    }

    fn finalize(&self, state: MvcNodeState) -> MvcNodeOutput {
        MvcNodeOutput {
            in_cover: state.in_cover,
            duals: state
                .neighbors
                .iter()
                .copied()
                .zip(state.y_normalized.iter().cloned())
                .collect(),
            dd_history: state.dd_history,
            final_sum: state.final_sum,
        }
    }

    fn msg_bytes(&self, msg: &MvcMsg) -> usize {
        match msg {
            MvcMsg::Degree(_) => 8,
            MvcMsg::Wave1 { .. } => 9,
            MvcMsg::Wave2 { y_sum, .. } | MvcMsg::FinalSum(y_sum) => {
                1 + (y_sum.numer().bits() + y_sum.denom().bits()) as usize / 8
            }
        }
    }
}

/// Result of one run over the whole graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MvcFmmResult {
    pub cover: Vec<NodeId>,
    /// Normalized edge duals, one entry per edge `(u, v)` with `u < v`.
    pub edge_duals: Vec<((NodeId, NodeId), Rational)>,
    /// Value of the fractional matching.
    pub dual_total: Rational,
    /// Dynamic degrees per node and iteration (telemetry).
    pub dd_history: Vec<Vec<u64>>,
    /// Incident dual sums before normalization.
    pub final_sums: Vec<Rational>,
    pub rounds: u32,
    pub checks: MvcChecks,
}

/// Outcome of the per-run correctness checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvcChecks {
    /// Cover is a vertex cover.
    pub cover_valid: bool,
    /// Normalized duals are a feasible fractional matching.
    pub duals_feasible: bool,
    /// Start-of-iteration degree bound `dd <= max_degree^((l+1)/k)`.
    pub degree_bound: bool,
    /// Final incident sums obey `Y <= 3 + max_degree^(1/k)`.
    pub final_sum_bound: bool,
    /// Pre-normalization dual total equals the cover size.
    pub conservation: bool,
}

impl MvcChecks {
    pub fn all_hold(&self) -> bool {
        self.cover_valid
            && self.duals_feasible
            && self.degree_bound
            && self.final_sum_bound
            && self.conservation
    }
}

pub fn mvc_fmm(g: &Graph, k: u32) -> Result<MvcFmmResult> {
    mvc_fmm_with(g, k, Execution::default())
}

pub fn mvc_fmm_with(g: &Graph, k: u32, mode: Execution) -> Result<MvcFmmResult> {
    if k == 0 {
        return Err(Error::InvalidGraph("k must be at least 1".into()));
    }
    let proto = MvcFmm { k };
    let rounds = MvcFmm::rounds_for(k);
    let transcript = run_protocol_with(g, &proto, rounds, 0, mode)?;
    let outputs = transcript.outputs;

    let cover: Vec<NodeId> = g.nodes().filter(|&v| outputs[v as usize].in_cover).collect();

    // Both endpoints carry a copy of each dual; they must agree exactly.
    let mut edge_duals = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        let from_u = outputs[u as usize]
            .duals
            .iter()
            .find(|(nb, _)| *nb == v)
            .map(|(_, y)| y.clone())
            .expect("neighbor entry");
        let from_v = outputs[v as usize]
            .duals
            .iter()
            .find(|(nb, _)| *nb == u)
            .map(|(_, y)| y.clone())
            .expect("neighbor entry");
        if from_u != from_v {
            return Err(Error::InternalInconsistency(format!(
                "edge ({u},{v}) dual disagrees between endpoints"
            )));
        }
        edge_duals.push(((u, v), from_u));
    }
    let dual_total: Rational = edge_duals.iter().map(|(_, y)| y).sum();

    let max_degree = g.max_degree() as u64;
    let checks = run_checks(g, k, max_degree, &cover, &edge_duals, &outputs);

    Ok(MvcFmmResult {
        cover,
        edge_duals,
        dual_total,
        dd_history: outputs.iter().map(|o| o.dd_history.clone()).collect(),
        final_sums: outputs.iter().map(|o| o.final_sum.clone()).collect(),
        rounds: transcript.rounds,
        checks,
    })
}

fn run_checks(
    g: &Graph,
    k: u32,
    max_degree: u64,
    cover: &[NodeId],
    edge_duals: &[((NodeId, NodeId), Rational)],
    outputs: &[MvcNodeOutput],
) -> MvcChecks {
    let cover_valid = is_vertex_cover(g, cover);

    let mut incident = vec![Rational::zero(); g.node_count()];
    for ((u, v), y) in edge_duals {
        incident[*u as usize] += y;
        incident[*v as usize] += y;
    }
    let duals_feasible = edge_duals.iter().all(|(_, y)| y >= &Rational::zero())
        && incident.iter().all(|s| s <= &Rational::one());

    // dd <= max_degree^((l+1)/k), exactly: dd^k <= max_degree^(l+1).
    let degree_bound = outputs.iter().all(|o| {
        o.dd_history.iter().enumerate().all(|(t, &dd)| {
            let l = k - 1 - t as u32;
            BigUint::from(dd).pow(k) <= BigUint::from(max_degree).pow(l + 1)
        })
    });

    // Y <= 3 + max_degree^(1/k), exactly: Y <= 3 or (Y-3)^k <= max_degree.
    let three = Rational::from_integer(3.into());
    let delta = Rational::from_integer(BigInt::from(max_degree));
    let final_sum_bound = outputs.iter().all(|o| {
        if o.final_sum <= three {
            return true;
        }
        let excess = &o.final_sum - &three;
        num::pow::pow(excess, k as usize) <= delta
    });

    // Every join adds exactly 1 to the raw dual total.
    let raw_total: Rational = outputs.iter().map(|o| &o.final_sum).sum();
    let conservation = raw_total == Rational::from_integer(BigInt::from(2 * cover.len()));

    MvcChecks {
        cover_valid,
        duals_feasible,
        degree_bound,
        final_sum_bound,
        conservation,
    }
}
