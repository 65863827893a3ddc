//! Ancilla-free lowering to `{rx, ry, rz, phase, h, x, cx}`.
//!
//! * Open controls are X-conjugated.
//! * `C^c(R)` for `R = Ry, Rz` uses `R(t/2) X R(-t/2) X = R(t)`: two
//!   `C^(c-1)X` on the target interleaved with rotations controlled by the
//!   remaining control (two CX each), or, when too few qubits are idle, two
//!   `C^c1 X` interleaved with `C^c2 R(+-t/2)` on complementary halves of the
//!   controls. `Rx` goes through `H Rz H`, `H` through `Ry(-pi/4) X Ry(pi/4)`.
//! * `C^c(Phase(t))` peels `Phase(t) = e^(i t/2) Rz(t)`: a `C^c Rz(t)` on the
//!   target plus a `C^(c-1) Phase(t/2)` on the last control, recursively.
//! * `C^c X` borrows idle qubits of the circuit as dirty ancillas: a Toffoli
//!   ladder when `c-2` are idle, a split into two halves when only one is,
//!   and `H C^c(Z) H` when the gate spans every qubit. Inside a ladder only
//!   the two Toffolis on the target are exact (6 CX); the toggle chain uses
//!   3-CX relative-phase Toffolis whose phases cancel.
//! * SWAP is 3 CX.
//!
//! Gates are streamed into a [`GateSink`], so resource accounting never has
//! to hold the basis circuit in memory.

use std::f64::consts::{FRAC_PI_4, PI};

use super::{Circuit, Gate, OneQubit, Polarity};

/// Receiver for lowered gates.
pub trait GateSink {
    fn push(&mut self, gate: Gate);
}

impl GateSink for Vec<Gate> {
    fn push(&mut self, gate: Gate) {
        Vec::push(self, gate)
    }
}

/// Lowers every gate of `c`; the result contains only single-qubit gates and CX.
pub fn decompose_to_basis(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        lower_gate(g, c.n_qubits, &mut gates);
    }
    Circuit { n_qubits: c.n_qubits, gates, metadata: c.metadata.clone() }
}

/// Lowers one gate acting inside an `n_qubits`-wide circuit.
pub fn lower_gate(gate: &Gate, n_qubits: usize, sink: &mut impl GateSink) {
    match gate {
        Gate::Single { .. } | Gate::Cx { .. } => sink.push(gate.clone()),
        Gate::Swap { a, b } => {
            sink.push(Gate::cx(*a, *b));
            sink.push(Gate::cx(*b, *a));
            sink.push(Gate::cx(*a, *b));
        }
        Gate::MultiControlled { op, controls, target } => {
            let open: Vec<usize> = controls
                .iter()
                .filter(|c| c.polarity == Polarity::Zero)
                .map(|c| c.qubit)
                .collect();
            for &q in &open {
                sink.push(Gate::x(q));
            }
            let qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
            let lw = Lowering { n_qubits };
            lw.controlled(*op, &qubits, *target, sink);
            for &q in &open {
                sink.push(Gate::x(q));
            }
        }
    }
}

/// Multi-controlled X on positive controls, lowered into `sink`.
pub fn mcx(controls: &[usize], target: usize, n_qubits: usize, sink: &mut impl GateSink) {
    Lowering { n_qubits }.mcx(controls, target, sink);
}

struct Lowering {
    n_qubits: usize,
}

impl Lowering {
    fn controlled(&self, op: OneQubit, controls: &[usize], target: usize, sink: &mut impl GateSink) {
        if controls.is_empty() {
            sink.push(Gate::single(op, target));
            return;
        }
        match op {
            OneQubit::X => self.mcx(controls, target, sink),
            OneQubit::Ry(_) | OneQubit::Rz(_) => self.mc_axis_rotation(op, controls, target, sink),
            OneQubit::Rx(t) => {
                sink.push(Gate::h(target));
                self.mc_axis_rotation(OneQubit::Rz(t), controls, target, sink);
                sink.push(Gate::h(target));
            }
            OneQubit::H => {
                sink.push(Gate::single(OneQubit::Ry(FRAC_PI_4), target));
                self.mcx(controls, target, sink);
                sink.push(Gate::single(OneQubit::Ry(-FRAC_PI_4), target));
            }
            OneQubit::Phase(t) => self.mc_phase(t, controls, target, sink),
        }
    }

    /// `C^c(Ry)` / `C^c(Rz)`, `c >= 1`.
    ///
    /// With enough idle qubits: two `C^(c-1)X` on the target around rotations
    /// controlled by the last control. Otherwise the controls are split in
    /// two groups `S1`, `S2` so that each half can borrow the other:
    /// `C_S2 R(t/2) . C_S1 X . C_S2 R(-t/2) . C_S1 X`.
    fn mc_axis_rotation(&self, op: OneQubit, controls: &[usize], target: usize, sink: &mut impl GateSink) {
        let half = |sign: f64| match op {
            OneQubit::Ry(t) => OneQubit::Ry(sign * t / 2.0),
            OneQubit::Rz(t) => OneQubit::Rz(sign * t / 2.0),
            _ => unreachable!("only Ry and Rz are split this way"),
        };
        let c = controls.len();
        if let [control] = controls {
            single_controlled(op, *control, target, sink);
            return;
        }
        let idle = self.idle_qubits(controls, target).len();
        if c <= 3 || idle + 1 >= c - 3 {
            let (&last, rest) = controls.split_last().expect("at least one control");
            self.mcx(rest, target, sink);
            single_controlled(half(-1.0), last, target, sink);
            self.mcx(rest, target, sink);
            single_controlled(half(1.0), last, target, sink);
            return;
        }
        let c1 = ((c + 2 + idle) / 2).min(c - 1);
        let (s1, s2) = controls.split_at(c1);
        self.mc_axis_rotation(half(1.0), s2, target, sink);
        self.mcx(s1, target, sink);
        self.mc_axis_rotation(half(-1.0), s2, target, sink);
        self.mcx(s1, target, sink);
    }

    fn mc_phase(&self, theta: f64, controls: &[usize], target: usize, sink: &mut impl GateSink) {
        if controls.is_empty() {
            sink.push(Gate::single(OneQubit::Phase(theta), target));
            return;
        }
        self.mc_axis_rotation(OneQubit::Rz(theta), controls, target, sink);
        let (&last, rest) = controls.split_last().unwrap();
        self.mc_phase(theta / 2.0, rest, last, sink);
    }

    fn idle_qubits(&self, controls: &[usize], target: usize) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| *q != target && !controls.contains(q)).collect()
    }

    fn mcx(&self, controls: &[usize], target: usize, sink: &mut impl GateSink) {
        match controls {
            [] => sink.push(Gate::x(target)),
            [c] => sink.push(Gate::cx(*c, target)),
            [a, b] => toffoli(*a, *b, target, sink),
            _ => {
                let m = controls.len();
                let idle = self.idle_qubits(controls, target);
                if idle.len() >= m - 2 {
                    dirty_ladder(controls, &idle[..m - 2], target, sink);
                } else if let Some(&anc) = idle.first() {
                    // t ^= g2.a twice with a ^= g1 in between: t ^= g1.g2, a restored.
                    // The toggle of `a` may carry phases that depend on anything
                    // but `t`; its second copy is the exact inverse.
                    let (g1, g2) = controls.split_at(m.div_ceil(2));
                    let mut g2a = g2.to_vec();
                    g2a.push(anc);
                    let mut toggle = Vec::new();
                    relative_mcx(g1, anc, g2, &mut toggle);
                    for g in &toggle {
                        sink.push(g.clone());
                    }
                    self.mcx(&g2a, target, sink);
                    for g in toggle.iter().rev() {
                        sink.push(g.inverse());
                    }
                    self.mcx(&g2a, target, sink);
                } else {
                    sink.push(Gate::h(target));
                    self.mc_phase(PI, controls, target, sink);
                    sink.push(Gate::h(target));
                }
            }
        }
    }
}

/// Singly controlled `Ry`/`Rz` with two CX.
fn single_controlled(op: OneQubit, control: usize, target: usize, sink: &mut impl GateSink) {
    let half = match op {
        OneQubit::Ry(t) => (OneQubit::Ry(t / 2.0), OneQubit::Ry(-t / 2.0)),
        OneQubit::Rz(t) => (OneQubit::Rz(t / 2.0), OneQubit::Rz(-t / 2.0)),
        _ => unreachable!(),
    };
    sink.push(Gate::cx(control, target));
    sink.push(Gate::single(half.1, target));
    sink.push(Gate::cx(control, target));
    sink.push(Gate::single(half.0, target));
}

fn toffoli(a: usize, b: usize, t: usize, sink: &mut impl GateSink) {
    let tg = OneQubit::Phase(FRAC_PI_4);
    let tdg = OneQubit::Phase(-FRAC_PI_4);
    sink.push(Gate::h(t));
    sink.push(Gate::cx(b, t));
    sink.push(Gate::single(tdg, t));
    sink.push(Gate::cx(a, t));
    sink.push(Gate::single(tg, t));
    sink.push(Gate::cx(b, t));
    sink.push(Gate::single(tdg, t));
    sink.push(Gate::cx(a, t));
    sink.push(Gate::single(tg, b));
    sink.push(Gate::single(tg, t));
    sink.push(Gate::h(t));
    sink.push(Gate::cx(a, b));
    sink.push(Gate::single(tg, a));
    sink.push(Gate::single(tdg, b));
    sink.push(Gate::cx(a, b));
}

/// Toffoli up to a sign on one basis state (Margolus): 3 CX, self-inverse.
fn margolus(a: usize, b: usize, t: usize, sink: &mut impl GateSink) {
    sink.push(Gate::single(OneQubit::Ry(FRAC_PI_4), t));
    sink.push(Gate::cx(b, t));
    sink.push(Gate::single(OneQubit::Ry(FRAC_PI_4), t));
    sink.push(Gate::cx(a, t));
    sink.push(Gate::single(OneQubit::Ry(-FRAC_PI_4), t));
    sink.push(Gate::cx(b, t));
    sink.push(Gate::single(OneQubit::Ry(-FRAC_PI_4), t));
}

/// `anc[m-3] ^= c_0 ... c_(m-2)` through the Toffoli chain, up to phases.
/// The chain is a palindrome of self-inverse gates, hence its own inverse.
fn toggle_chain(controls: &[usize], anc: &[usize], sink: &mut impl GateSink) {
    let m = controls.len();
    for i in (1..m - 2).rev() {
        margolus(controls[i + 1], anc[i - 1], anc[i], sink);
    }
    margolus(controls[0], controls[1], anc[0], sink);
    for i in 1..m - 2 {
        margolus(controls[i + 1], anc[i - 1], anc[i], sink);
    }
}

/// `C^m X` with `m - 2` dirty ancillas, `m >= 3`, exact.
///
/// `T V T V` where `T` hits the target and `V` toggles the last ancilla by
/// the AND of the first `m - 1` controls. Phases picked up inside `V` cancel
/// between its two copies because `V` squares to the identity.
fn dirty_ladder(controls: &[usize], anc: &[usize], target: usize, sink: &mut impl GateSink) {
    let m = controls.len();
    debug_assert_eq!(anc.len(), m - 2);
    for _ in 0..2 {
        toffoli(controls[m - 1], anc[m - 3], target, sink);
        toggle_chain(controls, anc, sink);
    }
}

/// `C^m X` up to a diagonal phase, using `m - 2` qubits of `borrow` as dirty
/// ancillas. Phases depend only on the controls, the target and the borrowed
/// qubits.
fn relative_mcx(controls: &[usize], target: usize, borrow: &[usize], sink: &mut impl GateSink) {
    let m = controls.len();
    match controls {
        [] => sink.push(Gate::x(target)),
        [c] => sink.push(Gate::cx(*c, target)),
        [a, b] => margolus(*a, *b, target, sink),
        _ => {
            let anc = &borrow[..m - 2];
            for _ in 0..2 {
                margolus(controls[m - 1], anc[m - 3], target, sink);
                toggle_chain(controls, anc, sink);
            }
        }
    }
}
