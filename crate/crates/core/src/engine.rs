//! Synchronous LOCAL-model executor.
//!
//! Runs a per-node [`RoundProtocol`] in lock-step rounds over a
//! [`Graph`]. One round is send - deliver - receive: every node stages
//! messages from its current state, all messages are delivered, then
//! every node consumes its inbox. Messages may be arbitrarily large,
//! delivery is reliable, and there is no asynchrony or failure model.
//! After `k` rounds information has traveled exactly `k` hops. The engine
//! is a simulator, not a network runtime.
//!
//! Determinism: a run is a pure function of `(graph, protocol, rounds,
//! seed)`. Per-node randomness is derived from the master seed and the
//! node id alone (see [`node_rng`]), so adding nodes never shifts the
//! random streams of existing ones, and within a round node phases may
//! execute in parallel without changing any output.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::par::Execution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Per-node random stream handed to [`RoundProtocol::init`].
pub type ProtocolRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut x = z;
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Fixed mixing function from master seed and node id to the node's
/// random stream.
pub fn node_rng(seed: u64, node: NodeId) -> ProtocolRng {
    let z = splitmix64(seed ^ splitmix64(0x6C62_272E_07BB_0142 ^ node as u64));
    ChaCha8Rng::seed_from_u64(z)
}

/// Derives an independent sub-seed from a master seed, for seeding
/// repeated runs (decomposition instances, experiment rows).
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(0x2545_F491_4F6C_DD1D ^ stream))
}

/// Messages staged by one node during one round's send phase.
pub struct Outbox<M> {
    msgs: Vec<(NodeId, M)>,
}

impl<M> Outbox<M> {
    fn new() -> Self {
        Outbox { msgs: Vec::new() }
    }

    /// Queues a message for a neighbor. Sending to a non-neighbor or
    /// sending twice to the same neighbor is a protocol fault.
    pub fn send(&mut self, to: NodeId, msg: M) {
        self.msgs.push((to, msg));
    }
}

/// A per-node state machine executed by the engine. Both phases must be
/// pure functions of the node's own state and inbox; nodes have no
/// channel other than messages.
pub trait RoundProtocol: Sync {
    type State: Send + Sync;
    type Msg: Send + Sync + Clone;
    type Output: Send;

    fn init(
        &self,
        node: NodeId,
        neighbors: &[NodeId],
        label: Option<i64>,
        rng: ProtocolRng,
    ) -> Self::State;

    /// Send phase of round `round`: stage messages from the current state.
    fn send(&self, state: &Self::State, round: u32, out: &mut Outbox<Self::Msg>);

    /// Receive/compute phase of round `round`: consume this round's
    /// messages (sorted by sender id) and update the state.
    fn receive(&self, state: &mut Self::State, round: u32, inbox: &[(NodeId, Self::Msg)]);

    fn finalize(&self, state: Self::State) -> Self::Output;

    /// Telemetry size estimate for one message; override for heap-heavy
    /// message types.
    fn msg_bytes(&self, _msg: &Self::Msg) -> usize {
        std::mem::size_of::<Self::Msg>()
    }
}

/// Message traffic of one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoundStats {
    pub messages: u64,
    pub bytes: u64,
}

/// Result of a protocol run: per-node outputs plus telemetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTranscript<O> {
    pub outputs: Vec<O>,
    pub rounds: u32,
    pub round_stats: Vec<RoundStats>,
}

/// Runs `proto` on `g` for exactly `k` rounds with the default execution
/// mode. With `k = 0` the outputs are `finalize(init(..))` and no message
/// is exchanged.
pub fn run_protocol<P: RoundProtocol>(
    g: &Graph,
    proto: &P,
    k: u32,
    seed: u64,
) -> Result<RunTranscript<P::Output>> {
    run_protocol_with(g, proto, k, seed, Execution::default())
}

pub fn run_protocol_with<P: RoundProtocol>(
    g: &Graph,
    proto: &P,
    k: u32,
    seed: u64,
    mode: Execution,
) -> Result<RunTranscript<P::Output>> {
    let n = g.node_count();
    let mut states: Vec<P::State> = (0..n as NodeId)
        .map(|v| proto.init(v, g.neighbors(v), g.label(v), node_rng(seed, v)))
        .collect();

    let mut round_stats = Vec::with_capacity(k as usize);

    for round in 0..k {
        let outboxes = send_all(proto, &states, round, mode);

        // Validate and deliver. Iterating senders in ascending id order
        // keeps every inbox sorted by sender.
        let mut stats = RoundStats::default();
        let mut inboxes: Vec<Vec<(NodeId, P::Msg)>> = (0..n).map(|_| Vec::new()).collect();
        for (v, outbox) in outboxes.into_iter().enumerate() {
            let v = v as NodeId;
            let mut targets: Vec<NodeId> = Vec::with_capacity(outbox.msgs.len());
            for (to, msg) in outbox.msgs {
                if !g.has_edge(v, to) {
                    return Err(Error::ProtocolFault {
                        node: v,
                        round,
                        reason: format!("message to non-neighbor {to}"),
                    });
                }
                if targets.contains(&to) {
                    return Err(Error::ProtocolFault {
                        node: v,
                        round,
                        reason: format!("duplicate message to neighbor {to}"),
                    });
                }
                targets.push(to);
                stats.messages += 1;
                stats.bytes += proto.msg_bytes(&msg) as u64;
                inboxes[to as usize].push((v, msg));
            }
        }
        receive_all(proto, &mut states, &inboxes, round, mode);
        round_stats.push(stats);
    }

    let outputs = states.into_iter().map(|s| proto.finalize(s)).collect();
    Ok(RunTranscript {
        outputs,
        rounds: k,
        round_stats,
    })
}

fn send_all<P: RoundProtocol>(
    proto: &P,
    states: &[P::State],
    round: u32,
    mode: Execution,
) -> Vec<Outbox<P::Msg>> {
    let run = |state: &P::State| {
        let mut out = Outbox::new();
        proto.send(state, round, &mut out);
        out
    };
    match mode {
        Execution::Sequential => states.iter().map(run).collect(),
        Execution::Parallel => send_all_par(states, &run),
    }
}

#[cfg(feature = "parallel")]
fn send_all_par<S: Sync, M: Send>(
    states: &[S],
    run: &(impl Fn(&S) -> Outbox<M> + Sync),
) -> Vec<Outbox<M>> {
    use rayon::prelude::*;
    states.par_iter().map(run).collect()
}

#[cfg(not(feature = "parallel"))]
fn send_all_par<S: Sync, M: Send>(
    states: &[S],
    run: &(impl Fn(&S) -> Outbox<M> + Sync),
) -> Vec<Outbox<M>> {
    states.iter().map(run).collect()
}

fn receive_all<P: RoundProtocol>(
    proto: &P,
    states: &mut [P::State],
    inboxes: &[Vec<(NodeId, P::Msg)>],
    round: u32,
    mode: Execution,
) {
    match mode {
        Execution::Sequential => {
            for (state, inbox) in states.iter_mut().zip(inboxes) {
                proto.receive(state, round, inbox);
            }
        }
        Execution::Parallel => receive_all_par(proto, states, inboxes, round),
    }
}

#[cfg(feature = "parallel")]
fn receive_all_par<P: RoundProtocol>(
    proto: &P,
    states: &mut [P::State],
    inboxes: &[Vec<(NodeId, P::Msg)>],
    round: u32,
) {
    use rayon::prelude::*;
    states
        .par_iter_mut()
        .zip(inboxes.par_iter())
        .for_each(|(state, inbox)| proto.receive(state, round, inbox));
}

#[cfg(not(feature = "parallel"))]
fn receive_all_par<P: RoundProtocol>(
    proto: &P,
    states: &mut [P::State],
    inboxes: &[Vec<(NodeId, P::Msg)>],
    round: u32,
) {
    receive_all(proto, states, inboxes, round, Execution::Sequential);
}

pub mod protocols {
    //! Small stock protocols used by tests and verification commands.

    use super::*;
    use crate::view::{unroll_tree_view, ViewTree};
    use std::collections::BTreeMap;

    /// Every node repeatedly forwards the largest id it has heard of.
    /// After `k` rounds each node outputs the maximum id in its k-hop
    /// neighborhood.
    pub struct FloodMax;

    pub struct FloodMaxState {
        neighbors: Vec<NodeId>,
        best: NodeId,
    }

    impl RoundProtocol for FloodMax {
        type State = FloodMaxState;
        type Msg = NodeId;
        type Output = NodeId;

        fn init(
            &self,
            node: NodeId,
            neighbors: &[NodeId],
            _label: Option<i64>,
            _rng: ProtocolRng,
        ) -> FloodMaxState {
            FloodMaxState {
                neighbors: neighbors.to_vec(),
                best: node,
            }
        }

        fn send(&self, state: &FloodMaxState, _round: u32, out: &mut Outbox<NodeId>) {
            for &w in &state.neighbors {
                out.send(w, state.best);
            }
        }

        fn receive(&self, state: &mut FloodMaxState, _round: u32, inbox: &[(NodeId, NodeId)]) {
            for &(_, heard) in inbox {
                state.best = state.best.max(heard);
            }
        }

        fn finalize(&self, state: FloodMaxState) -> NodeId {
            state.best
        }
    }

    /// Entry of the gather protocol's knowledge map.
    #[derive(Clone, PartialEq, Eq)]
    pub struct GatherEntry {
        pub label: Option<i64>,
        pub neighbors: Vec<NodeId>,
    }

    /// Full-neighborhood gather: every node floods all adjacency entries
    /// it knows. Finalizing after `k` rounds unrolls the canonical
    /// depth-`k` view, which only consults entries within `k - 1` hops.
    pub struct Gather {
        pub k: u32,
    }

    pub struct GatherState {
        node: NodeId,
        known: BTreeMap<NodeId, GatherEntry>,
        neighbors: Vec<NodeId>,
    }

    impl RoundProtocol for Gather {
        type State = GatherState;
        type Msg = Vec<(NodeId, GatherEntry)>;
        type Output = Result<ViewTree>;

        fn init(
            &self,
            node: NodeId,
            neighbors: &[NodeId],
            label: Option<i64>,
            _rng: ProtocolRng,
        ) -> GatherState {
            let mut known = BTreeMap::new();
            known.insert(
                node,
                GatherEntry {
                    label,
                    neighbors: neighbors.to_vec(),
                },
            );
            GatherState {
                node,
                known,
                neighbors: neighbors.to_vec(),
            }
        }

        fn send(&self, state: &GatherState, _round: u32, out: &mut Outbox<Self::Msg>) {
            let snapshot: Vec<(NodeId, GatherEntry)> =
                state.known.iter().map(|(k, v)| (*k, v.clone())).collect();
            for &w in &state.neighbors {
                out.send(w, snapshot.clone());
            }
        }

        fn receive(&self, state: &mut GatherState, _round: u32, inbox: &[(NodeId, Self::Msg)]) {
            for (_, entries) in inbox {
                for (id, entry) in entries {
                    state.known.entry(*id).or_insert_with(|| entry.clone());
                }
            }
        }

        fn finalize(&self, state: GatherState) -> Result<ViewTree> {
            let known = state.known;
            let adj = |u: NodeId| -> Vec<NodeId> {
                known
                    .get(&u)
                    .map(|e| e.neighbors.clone())
                    .unwrap_or_default()
            };
            let label = |u: NodeId| known.get(&u).and_then(|e| e.label);
            unroll_tree_view(state.node, self.k, &adj, &label)
        }

        fn msg_bytes(&self, msg: &Self::Msg) -> usize {
            msg.iter().map(|(_, e)| 16 + 4 * e.neighbors.len()).sum()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::protocols::*;
    use super::*;
    use crate::gen;

    #[test]
    fn floodmax_reaches_k_hops() {
        let g = gen::path(7);
        let t = run_protocol(&g, &FloodMax, 2, 0).unwrap();
        // Node v learns the maximum id within distance 2.
        let expect: Vec<NodeId> = (0..7).map(|v| (v + 2).min(6) as NodeId).collect();
        assert_eq!(t.outputs, expect);
        assert_eq!(t.rounds, 2);
        assert_eq!(t.round_stats.len(), 2);
    }

    #[test]
    fn zero_rounds_sends_nothing() {
        let g = gen::complete(4);
        let t = run_protocol(&g, &FloodMax, 0, 0).unwrap();
        assert_eq!(t.outputs, vec![0, 1, 2, 3]);
        assert!(t.round_stats.is_empty());
    }

    #[test]
    fn gather_matches_khop_view() {
        for g in [
            gen::path(6),
            gen::star(7),
            gen::cycle(8),
            gen::random_connected(12, 3, 2),
        ] {
            for k in 0..=3u32 {
                let t = run_protocol(&g, &Gather { k }, k, 0).unwrap();
                for v in g.nodes() {
                    assert_eq!(
                        t.outputs[v as usize],
                        g.khop_view(v, k),
                        "gather view of node {v} at k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn gather_matches_on_labeled_graph() {
        let g = gen::path(5).with_labels(vec![10, 20, 30, 40, 50]).unwrap();
        let t = run_protocol(&g, &Gather { k: 2 }, 2, 0).unwrap();
        for v in g.nodes() {
            assert_eq!(t.outputs[v as usize], g.khop_view(v, 2));
        }
    }

    #[test]
    fn deterministic_across_modes_and_repeats() {
        let g = gen::random_connected(20, 8, 5);
        let base = run_protocol_with(&g, &Gather { k: 2 }, 2, 42, Execution::Sequential).unwrap();
        for _ in 0..3 {
            let par = run_protocol_with(&g, &Gather { k: 2 }, 2, 42, Execution::Parallel).unwrap();
            assert_eq!(base, par);
        }
    }

    #[test]
    fn fault_on_message_to_non_neighbor() {
        struct Rogue;
        impl RoundProtocol for Rogue {
            type State = NodeId;
            type Msg = ();
            type Output = ();
            fn init(
                &self,
                node: NodeId,
                _n: &[NodeId],
                _l: Option<i64>,
                _r: ProtocolRng,
            ) -> NodeId {
                node
            }
            fn send(&self, state: &NodeId, _round: u32, out: &mut Outbox<()>) {
                if *state == 0 {
                    out.send(3, ()); // nodes 0 and 3 are not adjacent in P_4
                }
            }
            fn receive(&self, _s: &mut NodeId, _round: u32, _inbox: &[(NodeId, ())]) {}
            fn finalize(&self, _s: NodeId) {}
        }
        let g = gen::path(4);
        let err = run_protocol(&g, &Rogue, 1, 0).unwrap_err();
        assert!(matches!(err, Error::ProtocolFault { node: 0, .. }));
    }

    #[test]
    fn locality_outside_k_ball_is_invisible() {
        // P_6 versus P_6 with an extra pendant far from node 0: the 2-hop
        // view of node 0 is unchanged, so its output must be unchanged.
        let a = gen::path(6);
        let b = Graph::from_edges(7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        for seed in [0u64, 9] {
            let ta = run_protocol(&a, &Gather { k: 2 }, 2, seed).unwrap();
            let tb = run_protocol(&b, &Gather { k: 2 }, 2, seed).unwrap();
            assert_eq!(ta.outputs[0], tb.outputs[0]);
            let fa = run_protocol(&a, &FloodMax, 2, seed).unwrap();
            let fb = run_protocol(&b, &FloodMax, 2, seed).unwrap();
            assert_eq!(fa.outputs[0], fb.outputs[0]);
        }
    }

    #[test]
    fn node_rng_streams_are_stable() {
        use rand::RngCore;
        let mut a = node_rng(7, 3);
        let mut b = node_rng(7, 3);
        assert_eq!(a.next_u64(), b.next_u64());
        let mut c = node_rng(7, 4);
        assert_ne!(node_rng(7, 3).next_u64(), c.next_u64());
    }
}
