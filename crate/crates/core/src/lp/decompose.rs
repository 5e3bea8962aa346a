//! Randomized low-diameter clustering, the building block of the local
//! LP algorithm.
//!
//! Every node draws a radius from a geometric distribution with
//! parameter `p`, truncated at `R`, and broadcasts `(id, radius)` that
//! many hops. A node affiliates with the highest-id broadcaster that
//! reaches it and joins the selected set when it lies strictly inside
//! that broadcaster's radius. This yields the contracted guarantees:
//!
//! 1. every selected node is within distance `R` of its leader,
//! 2. adjacent selected nodes share their leader,
//! 3. the computation takes `R` rounds,
//! 4. each node is selected with probability at least `p(1-p^R)^(n-1)`.

use crate::engine::{run_protocol_with, Outbox, ProtocolRng, RoundProtocol};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::par::Execution;
use rand::Rng;
use std::collections::HashMap;

/// Clustering produced by one decomposition run.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub p: f64,
    pub radius: u32,
    selected: Vec<bool>,
    leader: Vec<NodeId>,
}

impl Decomposition {
    pub fn in_selected(&self, v: NodeId) -> bool {
        self.selected[v as usize]
    }

    pub fn leader_of(&self, v: NodeId) -> NodeId {
        self.leader[v as usize]
    }

    pub fn members(&self) -> Vec<NodeId> {
        (0..self.selected.len() as NodeId)
            .filter(|&v| self.selected[v as usize])
            .collect()
    }

    /// Selected nodes grouped by leader, leaders ascending.
    pub fn clusters(&self) -> Vec<(NodeId, Vec<NodeId>)> {
        let mut map: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        for v in self.members() {
            map.entry(self.leader_of(v)).or_default().push(v);
        }
        let mut out: Vec<(NodeId, Vec<NodeId>)> = map.into_iter().collect();
        out.sort_by_key(|(l, _)| *l);
        out
    }
}

/// Geometric radius truncated at `radius_cap`: the count of consecutive
/// successes of a `p`-coin, capped.
fn draw_radius(rng: &mut ProtocolRng, p: f64, radius_cap: u32) -> u32 {
    let mut r = 0;
    while r < radius_cap && rng.gen_bool(p) {
        r += 1;
    }
    r
}

struct LsProtocol {
    p: f64,
    radius: u32,
}

struct LsState {
    neighbors: Vec<NodeId>,
    /// Broadcasts heard: id -> (radius, distance).
    known: HashMap<NodeId, (u32, u32)>,
}

impl RoundProtocol for LsProtocol {
    type State = LsState;
    type Msg = Vec<(NodeId, u32, u32)>;
    type Output = (NodeId, bool);

    fn init(
        &self,
        node: NodeId,
        neighbors: &[NodeId],
        _label: Option<i64>,
        mut rng: ProtocolRng,
    ) -> LsState {
        let radius = draw_radius(&mut rng, self.p, self.radius);
        let mut known = HashMap::new();
        known.insert(node, (radius, 0));
        LsState {
            neighbors: neighbors.to_vec(),
            known,
        }
    }

    fn send(&self, state: &LsState, _round: u32, out: &mut Outbox<Self::Msg>) {
        // Forward every broadcast that can still expand.
        let live: Vec<(NodeId, u32, u32)> = state
            .known
            .iter()
            .filter(|(_, (radius, dist))| dist < radius)
            .map(|(&id, &(radius, dist))| (id, radius, dist + 1))
            .collect();
        if live.is_empty() {
            return;
        }
        for &w in &state.neighbors {
            out.send(w, live.clone());
        }
    }

    fn receive(&self, state: &mut LsState, _round: u32, inbox: &[(NodeId, Self::Msg)]) {
        for (_, entries) in inbox {
            for &(id, radius, dist) in entries {
                state
                    .known
                    .entry(id)
                    .and_modify(|e| {
                        if dist < e.1 {
                            *e = (radius, dist);
                        }
                    })
                    .or_insert((radius, dist));
            }
        }
    }

    fn finalize(&self, state: LsState) -> (NodeId, bool) {
        // Leader: the highest id whose broadcast reached this node. The
        // node's own zero-distance broadcast guarantees a candidate.
        let (leader, (radius, dist)) = state
            .known
            .iter()
            .map(|(&id, &meta)| (id, meta))
            .max_by_key(|&(id, _)| id)
            .expect("own broadcast present");
        (leader, dist < radius)
    }

    fn msg_bytes(&self, msg: &Self::Msg) -> usize {
        12 * msg.len()
    }
}

/// One decomposition run; `R` engine rounds, deterministic in `seed`.
pub fn ls_decompose(g: &Graph, p: f64, radius: u32, seed: u64) -> Result<Decomposition> {
    ls_decompose_with(g, p, radius, seed, Execution::default())
}

pub fn ls_decompose_with(
    g: &Graph,
    p: f64,
    radius: u32,
    seed: u64,
    mode: Execution,
) -> Result<Decomposition> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidLp(format!("p = {p} outside (0, 1)")));
    }
    if radius == 0 {
        return Err(Error::InvalidLp("radius must be at least 1".into()));
    }
    let proto = LsProtocol { p, radius };
    let transcript = run_protocol_with(g, &proto, radius, seed, mode)?;
    let mut selected = vec![false; g.node_count()];
    let mut leader = vec![0 as NodeId; g.node_count()];
    for (v, &(l, in_s)) in transcript.outputs.iter().enumerate() {
        selected[v] = in_s;
        leader[v] = l;
    }
    Ok(Decomposition {
        p,
        radius,
        selected,
        leader,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn assert_properties(g: &Graph, dec: &Decomposition) {
        // Property 1: selected nodes are within R of their leader.
        for v in dec.members() {
            let d = g.distance(v, dec.leader_of(v)).expect("leader reachable");
            assert!(d <= dec.radius, "node {v} is {d} hops from its leader");
        }
        // Property 2: adjacent selected nodes share a leader.
        for (u, v) in g.edges() {
            if dec.in_selected(u) && dec.in_selected(v) {
                assert_eq!(dec.leader_of(u), dec.leader_of(v), "edge ({u},{v})");
            }
        }
    }

    #[test]
    fn properties_hold_on_every_seed() {
        for seed in 0..60 {
            let g = gen::random_connected(18, 8, seed % 7);
            let dec = ls_decompose(&g, 0.4, 3, seed).unwrap();
            assert_properties(&g, &dec);
        }
    }

    #[test]
    fn single_node_leads_itself() {
        let g = gen::star(1);
        let mut hits = 0;
        let trials = 4000;
        for seed in 0..trials {
            let dec = ls_decompose(&g, 0.5, 3, seed).unwrap();
            if dec.in_selected(0) {
                hits += 1;
                assert_eq!(dec.leader_of(0), 0);
            }
        }
        // Selection probability is exactly p here; allow generous slack.
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.05, "frequency {freq}");
    }

    #[test]
    fn edgeless_graph_makes_singleton_clusters() {
        let g = Graph::from_edges(5, Vec::new()).unwrap();
        for seed in 0..20 {
            let dec = ls_decompose(&g, 0.6, 2, seed).unwrap();
            for v in dec.members() {
                assert_eq!(dec.leader_of(v), v);
            }
        }
    }

    #[test]
    fn selection_rate_beats_contract_bound_on_path() {
        // Monte Carlo check of property 4 on P_10 with p = 1/2, R = 3.
        let g = gen::path(10);
        let n = g.node_count();
        let trials = 10_000u64;
        let mut hits = vec![0u64; n];
        for seed in 0..trials {
            let dec = ls_decompose(&g, 0.5, 3, seed).unwrap();
            for v in dec.members() {
                hits[v as usize] += 1;
            }
        }
        let bound = 0.5 * (1.0 - 0.5f64.powi(3)).powi(n as i32 - 1);
        for v in 0..n {
            let p_hat = hits[v] as f64 / trials as f64;
            let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
            assert!(
                p_hat >= bound - 3.0 * sigma,
                "node {v}: {p_hat} < {bound} - 3 sigma"
            );
        }
    }

    #[test]
    fn decomposition_is_seed_deterministic() {
        let g = gen::random_connected(15, 5, 1);
        let a = ls_decompose_with(&g, 0.3, 4, 9, Execution::Sequential).unwrap();
        let b = ls_decompose_with(&g, 0.3, 4, 9, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
