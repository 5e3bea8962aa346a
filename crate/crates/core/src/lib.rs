//! A laboratory for distributed algorithms in the LOCAL model.
//!
//! The crate has three layers:
//!
//! * **Simulation** — [`graph`] holds the immutable network graph and the
//!   pure graph algorithms (girth, k-hop views, reduction transforms);
//!   [`engine`] executes per-node round protocols in synchronous lock-step.
//! * **Algorithms** — [`mvc`] (simultaneous vertex cover / fractional
//!   matching approximation), [`lp`] (covering/packing LPs, cluster
//!   decomposition, local LP solving, randomized rounding, dominating
//!   sets), and [`cds`] (sparse spanning subgraphs and connected
//!   dominating sets).
//! * **Constructions and ground truth** — [`lb`] builds the cluster-tree
//!   lower-bound graph families (including the girth-boosted finite-field
//!   instances) and verifies view equality; [`oracles`] provides exact
//!   small-instance solvers and an exact rational LP solver.
//!
//! All randomized components draw per-node randomness from a master seed
//! through a fixed mixing function, so every run is reproducible.
//! Data-parallel inner loops use rayon when the `parallel` feature is
//! enabled (default) and fall back to sequential execution otherwise; the
//! results are identical either way.

pub mod cds;
pub mod engine;
pub mod error;
pub mod gen;
pub mod graph;
pub mod lb;
pub mod lp;
pub mod mvc;
pub mod oracles;
pub mod par;
pub mod view;

pub use error::Error;
pub use graph::{Graph, NodeId};
pub use view::ViewTree;

/// Exact rational scalar used wherever the artifact promises exact arithmetic.
pub type Rational = num::BigRational;

/// Convenience constructor for small rationals.
pub fn ratio(num: i64, den: i64) -> Rational {
    use num::FromPrimitive;
    Rational::new(
        num::BigInt::from_i64(num).unwrap(),
        num::BigInt::from_i64(den).unwrap(),
    )
}
