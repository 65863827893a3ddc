use std::collections::BTreeMap;

use serde::Serialize;

use super::decompose::{lower_gate, GateSink};
use super::{Circuit, Gate};

/// Streaming depth and gate-count accumulator.
///
/// Depth is the longest path of the dependency DAG in which two gates are
/// ordered iff they share a qubit, i.e. an ASAP layering.
#[derive(Debug, Clone)]
pub struct DepthCounter {
    frontier: Vec<usize>,
    depth: usize,
    counts: BTreeMap<String, usize>,
    total: usize,
}

impl DepthCounter {
    pub fn new(n_qubits: usize) -> Self {
        Self { frontier: vec![0; n_qubits], depth: 0, counts: BTreeMap::new(), total: 0 }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn count(&self, kind: &str) -> usize {
        self.counts.get(kind).copied().unwrap_or(0)
    }

    fn record(&mut self, gate: &Gate) {
        let mut layer = 0;
        gate.for_each_qubit(|q| layer = layer.max(self.frontier[q]));
        layer += 1;
        gate.for_each_qubit(|q| self.frontier[q] = layer);
        self.depth = self.depth.max(layer);
        self.total += 1;
        let kind = kind_label(gate);
        match self.counts.get_mut(kind) {
            Some(n) => *n += 1,
            None => {
                self.counts.insert(kind.to_string(), 1);
            }
        }
    }
}

impl GateSink for DepthCounter {
    fn push(&mut self, gate: Gate) {
        self.record(&gate);
    }
}

fn kind_label(gate: &Gate) -> &'static str {
    use super::OneQubit::*;
    match gate {
        Gate::Single { op, .. } => op.name(),
        Gate::Cx { .. } => "cx",
        Gate::Swap { .. } => "swap",
        Gate::MultiControlled { op, .. } => match op {
            H => "mch",
            X => "mcx",
            Rx(_) => "mcrx",
            Ry(_) => "mcry",
            Rz(_) => "mcrz",
            Phase(_) => "mcphase",
        },
    }
}

/// ASAP depth of `gates` on `n_qubits` qubits.
pub fn depth_of(n_qubits: usize, gates: &[Gate]) -> usize {
    let mut counter = DepthCounter::new(n_qubits);
    gates.iter().for_each(|g| counter.record(g));
    counter.depth()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub width: usize,
    /// Depth of the gate list as built.
    pub depth_logical: usize,
    /// Depth after lowering to single-qubit gates and CX.
    pub depth_basis: usize,
    /// Gate counts of the logical gate list, by kind.
    pub counts: BTreeMap<String, usize>,
    pub basis_counts: BTreeMap<String, usize>,
    pub basis_gate_count: usize,
    pub cx_count: usize,
}

/// Width, logical and basis depth, and gate counts. The basis circuit is
/// streamed through the decomposition and never materialized.
pub fn resource_report(c: &Circuit) -> ResourceReport {
    let mut logical = DepthCounter::new(c.n_qubits);
    let mut basis = DepthCounter::new(c.n_qubits);
    for g in &c.gates {
        logical.record(g);
        lower_gate(g, c.n_qubits, &mut basis);
    }
    ResourceReport {
        width: c.n_qubits,
        depth_logical: logical.depth(),
        depth_basis: basis.depth(),
        counts: logical.counts.clone(),
        basis_counts: basis.counts.clone(),
        basis_gate_count: basis.total(),
        cx_count: basis.count("cx"),
    }
}

/// Basis-level counter for a gate list, without the logical pass.
pub fn basis_report(n_qubits: usize, gates: &[Gate]) -> DepthCounter {
    let mut basis = DepthCounter::new(n_qubits);
    for g in gates {
        lower_gate(g, n_qubits, &mut basis);
    }
    basis
}
