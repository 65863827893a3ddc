//! Gate-level compilation of the coined walk.
//!
//! The walker is stored in two registers of `n = ceil(log2 N)` qubits: `x`
//! (qubits `0..n`, current node) and `y` (qubits `n..2n`, direction, itself a
//! node label). Preparation, coin and shift are built as mixed-polarity
//! multi-controlled gates and lowered to `{rx, ry, rz, phase, h, x, cx}` by
//! [`decompose`].

mod decompose;
mod export;
mod gate;
mod prep;
mod resources;
mod walk;

pub use decompose::{decompose_to_basis, lower_gate, mcx, GateSink};
pub use export::{circuit_from_json, circuit_to_json, circuit_to_qasm, write_lowered_qasm, ExportError};
pub use gate::{Control, Gate, OneQubit, Polarity};
pub use prep::{build_state_prep, state_prep_gates, PrepError};
pub use resources::{basis_report, depth_of, resource_report, DepthCounter, ResourceReport};
pub use walk::{
    build_coin, build_controlled_u2, build_shift, build_u1, build_walk_circuit, COIN_SIGN_PHASE,
};

/// A contiguous block of qubits holding a binary number, most significant
/// bit on the lowest qubit index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    /// Qubit holding the `level`-th most significant bit.
    pub fn qubit_at_level(&self, level: usize) -> usize {
        self.start + level
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        self.start..self.start + self.len
    }

    /// Controls that fire exactly when the register holds `value`.
    pub fn controls_for_value(&self, value: usize) -> Vec<Control> {
        self.prefix_controls(self.len, value)
    }

    /// Controls on the top `levels` bits matching `prefix` (an integer of
    /// `levels` bits, most significant first).
    pub fn prefix_controls(&self, levels: usize, prefix: usize) -> Vec<Control> {
        (0..levels)
            .map(|l| Control {
                qubit: self.qubit_at_level(l),
                polarity: Polarity::from_bit((prefix >> (levels - 1 - l)) & 1 == 1),
            })
            .collect()
    }
}

/// Provenance carried along with a compiled walk.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CircuitMetadata {
    pub graph_hash: Option<String>,
    pub n_nodes: Option<usize>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub metadata: CircuitMetadata,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new(), metadata: CircuitMetadata::default() }
    }

    pub fn with_gates(n_qubits: usize, gates: Vec<Gate>) -> Self {
        Self { n_qubits, gates, metadata: CircuitMetadata::default() }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Per-register qubit count, when the circuit has the dual-register shape.
    pub fn register_qubits(&self) -> Option<usize> {
        self.n_qubits.is_multiple_of(2).then_some(self.n_qubits / 2)
    }

    /// Depth of the gate list as built, multi-controlled gates counted as one layer.
    pub fn depth(&self) -> usize {
        depth_of(self.n_qubits, &self.gates)
    }

    pub fn validate(&self) -> Result<(), String> {
        self.gates.iter().try_for_each(|g| g.validate(self.n_qubits))
    }

    /// True when every gate is a single-qubit operation or a CX.
    pub fn is_basis(&self) -> bool {
        self.gates.iter().all(|g| matches!(g, Gate::Single { .. } | Gate::Cx { .. }))
    }
}
