use std::f64::consts::PI;

use super::prep::state_prep_gates;
use super::{Circuit, CircuitMetadata, Control, Gate, OneQubit, Register};
use crate::graph::{register_qubits, Graph};

/// Phase applied to register `x = i` after the `|0>`-reflection of node `i`.
///
/// `U2 (I - 2|0><0|) U2^dagger` equals `-(2|s_i><s_i| - I)`. The extra `-1`
/// on every real node block turns it into the Grover coin exactly, matching
/// the dense operator including the identity on padded blocks.
pub const COIN_SIGN_PHASE: f64 = PI;

fn x_register(n: usize) -> Register {
    Register::new(0, n)
}

fn y_register(n: usize) -> Register {
    Register::new(n, n)
}

/// Uniform superposition over node labels `0..N` on register `x`.
pub fn build_u1(n_nodes: usize) -> Vec<Gate> {
    let n = register_qubits(n_nodes);
    if n_nodes == 1 << n {
        return (0..n).map(Gate::h).collect();
    }
    let mut dist = vec![0.0; 1 << n];
    dist[..n_nodes].fill(1.0 / n_nodes as f64);
    state_prep_gates(&dist, x_register(n), &[]).expect("uniform distribution is valid")
}

fn u2_gates(g: &Graph, i: usize, n: usize) -> Vec<Gate> {
    let controls = x_register(n).controls_for_value(i);
    state_prep_gates(&g.neighbor_distribution(i, n), y_register(n), &controls)
        .expect("neighbor distribution is valid")
}

/// For each node `i`, loads the uniform distribution over `i`'s neighbors
/// into `y`, every gate controlled on `x == i`.
pub fn build_controlled_u2(g: &Graph) -> Vec<Gate> {
    let n = g.register_qubits();
    (0..g.n_nodes()).flat_map(|i| u2_gates(g, i, n)).collect()
}

/// Position-dependent Grover coin: per node, `U2(i)^dagger`, reflection
/// about `|0>` on `y`, `U2(i)`, all conditioned on `x == i`.
pub fn build_coin(g: &Graph) -> Vec<Gate> {
    let n = g.register_qubits();
    let (x, y) = (x_register(n), y_register(n));
    let y_last = y.qubit_at_level(n - 1);
    let x_last = x.qubit_at_level(n - 1);
    let mut gates = Vec::new();
    for i in 0..g.n_nodes() {
        let u2 = u2_gates(g, i, n);
        gates.extend(u2.iter().rev().map(Gate::inverse));

        // phase -1 on |i>|0...0>
        let mut controls = x.controls_for_value(i);
        controls.extend(y.qubits().take(n - 1).map(Control::off));
        gates.push(Gate::x(y_last));
        gates.push(Gate::controlled(OneQubit::Phase(PI), controls, y_last));
        gates.push(Gate::x(y_last));

        // phase -1 on the whole x == i block
        let mut controls = x.controls_for_value(i);
        let last = controls.pop().expect("register has at least one qubit");
        let flip = last.polarity == super::Polarity::Zero;
        if flip {
            gates.push(Gate::x(x_last));
        }
        gates.push(Gate::controlled(OneQubit::Phase(COIN_SIGN_PHASE), controls, x_last));
        if flip {
            gates.push(Gate::x(x_last));
        }

        gates.extend(u2);
    }
    gates
}

/// Flip-flop shift as a register exchange: `n` disjoint SWAPs `q <-> q + n`.
pub fn build_shift(register_qubits: usize) -> Vec<Gate> {
    (0..register_qubits).map(|q| Gate::swap(q, q + register_qubits)).collect()
}

/// `[U1 ; C(U2) ; (coin ; shift)^t]` on `2 ceil(log2 N)` qubits.
pub fn build_walk_circuit(g: &Graph, t: usize) -> Circuit {
    let n = g.register_qubits();
    let mut c = Circuit::new(2 * n);
    c.extend(build_u1(g.n_nodes()));
    c.extend(build_controlled_u2(g));
    let coin = build_coin(g);
    let shift = build_shift(n);
    for _ in 0..t {
        c.extend(coin.iter().cloned());
        c.extend(shift.iter().cloned());
    }
    c.metadata = CircuitMetadata {
        graph_hash: Some(g.content_hash()),
        n_nodes: Some(g.n_nodes()),
        steps: Some(t),
    };
    c
}
