//! Coined discrete-time quantum walks on complex networks.
//!
//! The walk on a graph of `N` nodes is encoded in two registers of
//! `ceil(log2 N)` qubits (`|node>|direction>`), compiled to a gate list,
//! lowered to single-qubit gates and CX, and checked against a dense
//! operator model.
//!
//! * [`graph`]: ER / WS / BA generators and graph files.
//! * [`oracle`]: exact coin, shift and evolution as dense matrices.
//! * [`circuit`]: gate IR, walk compilation, basis lowering, resources, export.
//! * [`sim`]: state-vector simulation, sampling, depolarizing trajectories.
//! * [`analysis`]: L1 distance, power-law fits, scaling and comparison runs.
//! * [`cli`]: the `qwalknet` command line.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod graph;
pub mod oracle;
pub mod sim;
pub mod state;

pub use circuit::{build_walk_circuit, Circuit, Gate};
pub use graph::{Graph, GraphParams, Model};
pub use state::StateVector;
