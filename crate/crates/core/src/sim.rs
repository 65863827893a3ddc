//! State-vector execution of gate lists, shot sampling and a simple
//! depolarizing trajectory model.
//!
//! Qubit `q` of an `m`-qubit circuit is bit `m - 1 - q` of the basis index, so
//! for walk circuits the index is `x * 2^n + y`.
//!
//! The noise model is a single-parameter stand-in for device noise: after each
//! basis gate, with probability `epsilon`, one of the gate's qubits (uniform)
//! receives a uniformly random Pauli X, Y or Z. It is not calibrated against
//! any hardware.

use std::env;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::state::StateVector;

pub const DEFAULT_QUBIT_CAP: usize = 24;
pub const QUBIT_CAP_ENV: &str = "QWALKNET_QUBIT_CAP";

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("circuit has {width} qubits, simulator cap is {cap} (set {QUBIT_CAP_ENV} to raise it)")]
    TooWide { width: usize, cap: usize },
    #[error("non-finite amplitude after gate {0}")]
    NonFinite(usize),
    #[error("shots must be at least 1")]
    NoShots,
    #[error("noise probability must lie in [0, 1], got {0}")]
    BadEpsilon(f64),
    #[error("noisy simulation needs a basis circuit; found `{0}`")]
    NotBasis(String),
    #[error("walk results need an even number of qubits, got {0}")]
    OddWidth(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
}

/// Simulator width cap: `QWALKNET_QUBIT_CAP` if set and parseable, else 24.
pub fn qubit_cap() -> usize {
    env::var(QUBIT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_QUBIT_CAP)
}

fn check_width(n_qubits: usize) -> Result<(), SimError> {
    let cap = qubit_cap();
    if n_qubits > cap {
        return Err(SimError::TooWide { width: n_qubits, cap });
    }
    Ok(())
}

type Mat2 = [[Complex64; 2]; 2];

fn apply_matrix(amps: &mut [Complex64], n_qubits: usize, target: usize, m: &Mat2) {
    let bit = 1usize << (n_qubits - 1 - target);
    for block in (0..amps.len()).step_by(2 * bit) {
        for i in block..block + bit {
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

fn apply_controlled_matrix(amps: &mut [Complex64], n_qubits: usize, ctrl_mask: usize, ctrl_value: usize, target: usize, m: &Mat2) {
    let bit = 1usize << (n_qubits - 1 - target);
    for i in 0..amps.len() {
        if i & bit != 0 || i & ctrl_mask != ctrl_value {
            continue;
        }
        let (a0, a1) = (amps[i], amps[i | bit]);
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
    }
}

/// Applies one gate in place to an `n_qubits` amplitude array.
pub fn apply_gate(amps: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    match gate {
        Gate::Single { op, target } => apply_matrix(amps, n_qubits, *target, &op.matrix()),
        Gate::Cx { control, target } => {
            let (cb, tb) = (bit(*control), bit(*target));
            for i in 0..amps.len() {
                if i & cb != 0 && i & tb == 0 {
                    amps.swap(i, i | tb);
                }
            }
        }
        Gate::Swap { a, b } => {
            let (ab, bb) = (bit(*a), bit(*b));
            for i in 0..amps.len() {
                if i & ab != 0 && i & bb == 0 {
                    amps.swap(i, i ^ ab ^ bb);
                }
            }
        }
        Gate::MultiControlled { op, controls, target } => {
            let mut mask = 0;
            let mut value = 0;
            for c in controls {
                mask |= bit(c.qubit);
                if c.polarity == crate::circuit::Polarity::One {
                    value |= bit(c.qubit);
                }
            }
            apply_controlled_matrix(amps, n_qubits, mask, value, *target, &op.matrix());
        }
    }
}

/// Runs `gates` on `|0...0>` and returns the raw amplitudes.
pub fn run_gates(n_qubits: usize, gates: &[Gate]) -> Result<Vec<Complex64>, SimError> {
    check_width(n_qubits)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    amps[0] = Complex64::new(1.0, 0.0);
    run_gates_on(&mut amps, n_qubits, gates)?;
    Ok(amps)
}

/// Runs `gates` in place on an arbitrary input state.
pub fn run_gates_on(amps: &mut [Complex64], n_qubits: usize, gates: &[Gate]) -> Result<(), SimError> {
    check_width(n_qubits)?;
    for g in gates {
        g.validate(n_qubits).map_err(SimError::InvalidGate)?;
        apply_gate(amps, n_qubits, g);
    }
    if let Some(pos) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(SimError::NonFinite(pos));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub final_state: StateVector,
    /// Marginal of register `x` over all `2^n` labels (padding included).
    pub register_probs: Vec<f64>,
    /// The first `N` entries of `register_probs`.
    pub node_probs: Vec<f64>,
}

impl SimResult {
    fn from_state(state: StateVector, n_nodes: usize) -> Self {
        let register_probs = state.register_probabilities();
        let node_probs = register_probs[..n_nodes.min(register_probs.len())].to_vec();
        Self { final_state: state, register_probs, node_probs }
    }

    pub fn n_nodes(&self) -> usize {
        self.node_probs.len()
    }

    /// Probability mass on padded labels `x >= N`.
    pub fn invalid_mass(&self) -> f64 {
        self.register_probs[self.node_probs.len()..].iter().sum()
    }
}

fn walk_nodes(c: &Circuit, n: usize) -> usize {
    c.metadata.n_nodes.unwrap_or(1 << n)
}

/// Exact simulation of a dual-register circuit from `|0...0>`.
pub fn simulate(c: &Circuit) -> Result<SimResult, SimError> {
    let n = c.register_qubits().ok_or(SimError::OddWidth(c.n_qubits))?;
    let amps = run_gates(c.n_qubits, &c.gates)?;
    Ok(SimResult::from_state(StateVector::from_amplitudes(n, amps), walk_nodes(c, n)))
}

/// Shot counts per node, plus a bucket for padded labels `x >= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub per_node: Vec<u64>,
    pub invalid: u64,
}

impl Counts {
    pub fn shots(&self) -> u64 {
        self.per_node.iter().sum::<u64>() + self.invalid
    }

    /// Empirical distribution over the nodes followed by the invalid bucket.
    pub fn distribution(&self) -> Vec<f64> {
        let shots = self.shots() as f64;
        self.per_node.iter().chain(std::iter::once(&self.invalid)).map(|&c| c as f64 / shots).collect()
    }

    /// Empirical node distribution (invalid bucket dropped).
    pub fn node_distribution(&self) -> Vec<f64> {
        let shots = self.shots() as f64;
        self.per_node.iter().map(|&c| c as f64 / shots).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,count\n");
        for (i, c) in self.per_node.iter().enumerate() {
            out.push_str(&format!("{i},{c}\n"));
        }
        out.push_str(&format!("invalid,{}\n", self.invalid));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("counts serialization cannot fail")
    }
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Inverse-CDF draw of an outcome for the uniform `u` in `[0, 1)`.
fn draw(cdf: &[f64], u: f64) -> usize {
    let total = *cdf.last().expect("non-empty distribution");
    let idx = cdf.partition_point(|&c| c <= u * total);
    idx.min(cdf.len() - 1)
}

fn measurement_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tally(outcomes: impl IntoIterator<Item = usize>, n_nodes: usize) -> Counts {
    let mut counts = Counts { per_node: vec![0; n_nodes], invalid: 0 };
    for x in outcomes {
        match counts.per_node.get_mut(x) {
            Some(c) => *c += 1,
            None => counts.invalid += 1,
        }
    }
    counts
}

/// Draws `shots` measurements of register `x` from an exact result.
/// One uniform per shot from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn sample(result: &SimResult, shots: u64, seed: u64) -> Result<Counts, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let cdf = cumulative(&result.register_probs);
    let mut rng = measurement_rng(seed);
    let outcomes = (0..shots).map(|_| draw(&cdf, rng.gen::<f64>()));
    Ok(tally(outcomes, result.n_nodes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    pub epsilon: f64,
}

impl NoiseModel {
    pub fn new(epsilon: f64) -> Result<Self, SimError> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(SimError::BadEpsilon(epsilon));
        }
        Ok(Self { epsilon })
    }
}

#[derive(Debug, Clone, Copy)]
struct PauliError {
    gate: usize,
    qubit: usize,
    pauli: u8,
}

fn pauli_matrix(p: u8) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        0 => [[z, one], [one, z]],
        1 => [[z, -i], [i, z]],
        _ => [[one, z], [z, -one]],
    }
}

fn draw_errors(gates: &[Gate], epsilon: f64, rng: &mut ChaCha8Rng) -> Vec<PauliError> {
    let mut errors = Vec::new();
    if epsilon == 0.0 {
        return errors;
    }
    let log_keep = (1.0 - epsilon).ln();
    let mut next = 0usize;
    loop {
        // geometric gap to the next faulty gate
        let gap = if epsilon >= 1.0 {
            0
        } else {
            let u: f64 = 1.0 - rng.gen::<f64>();
            (u.ln() / log_keep).floor() as usize
        };
        next = match next.checked_add(gap) {
            Some(g) if g < gates.len() => g,
            _ => break,
        };
        let qubits = gates[next].qubits();
        let qubit = qubits[rng.gen_range(0..qubits.len())];
        errors.push(PauliError { gate: next, qubit, pauli: rng.gen_range(0..3) });
        next += 1;
    }
    errors
}

/// Monte Carlo trajectories of a basis circuit under [`NoiseModel`].
///
/// Each shot is one trajectory ending in a measurement of register `x`.
/// Measurement uniforms come from the same stream as [`sample`] and fault
/// locations from an independent stream, so `epsilon = 0` reproduces
/// `sample(simulate(c), shots, seed)` exactly.
pub fn simulate_noisy(c: &Circuit, noise: NoiseModel, shots: u64, seed: u64) -> Result<Counts, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    if let Some(g) = c.gates.iter().find(|g| !matches!(g, Gate::Single { .. } | Gate::Cx { .. })) {
        return Err(SimError::NotBasis(g.kind()));
    }
    let n = c.register_qubits().ok_or(SimError::OddWidth(c.n_qubits))?;
    let n_nodes = walk_nodes(c, n);
    check_width(c.n_qubits)?;

    // exact run with periodic checkpoints to resume faulty trajectories from
    let n_checkpoints = 64.min(c.gates.len().max(1));
    let stride = c.gates.len().div_ceil(n_checkpoints).max(1);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << c.n_qubits];
    amps[0] = Complex64::new(1.0, 0.0);
    let mut checkpoints = Vec::with_capacity(n_checkpoints + 1);
    for chunk in c.gates.chunks(stride) {
        checkpoints.push(amps.clone());
        run_gates_on(&mut amps, c.n_qubits, chunk)?;
    }
    let exact = SimResult::from_state(StateVector::from_amplitudes(n, amps), n_nodes);
    let exact_cdf = cumulative(&exact.register_probs);

    let mut meas_rng = measurement_rng(seed);
    let uniforms: Vec<f64> = (0..shots).map(|_| meas_rng.gen::<f64>()).collect();
    let mut err_rng = ChaCha8Rng::seed_from_u64(seed);
    err_rng.set_stream(1);
    let faults: Vec<Vec<PauliError>> =
        (0..shots).map(|_| draw_errors(&c.gates, noise.epsilon, &mut err_rng)).collect();

    let outcomes: Vec<usize> = uniforms
        .par_iter()
        .zip(faults.par_iter())
        .map(|(&u, errs)| {
            let Some(first) = errs.first() else {
                return draw(&exact_cdf, u);
            };
            let start = (first.gate / stride) * stride;
            let mut amps = checkpoints[first.gate / stride].clone();
            let mut pending = errs.iter().peekable();
            for (idx, g) in c.gates.iter().enumerate().skip(start) {
                apply_gate(&mut amps, c.n_qubits, g);
                while let Some(e) = pending.next_if(|e| e.gate == idx) {
                    apply_matrix(&mut amps, c.n_qubits, e.qubit, &pauli_matrix(e.pauli));
                }
            }
            let state = StateVector::from_amplitudes(n, amps);
            draw(&cumulative(&state.register_probabilities()), u)
        })
        .collect();
    Ok(tally(outcomes, n_nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Control, OneQubit};

    #[test]
    fn empty_circuit_is_ground_state() {
        let r = simulate(&Circuit::new(2)).unwrap();
        assert_eq!(r.final_state.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert_eq!(r.register_probs, vec![1.0, 0.0]);
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let amps = run_gates(1, &[Gate::h(0), Gate::h(0)]).unwrap();
        assert!((amps[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(amps[1].norm() < 1e-15);
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        let amps = run_gates(3, &[Gate::x(0)]).unwrap();
        assert_eq!(amps[4], Complex64::new(1.0, 0.0));
        let amps = run_gates(3, &[Gate::x(2), Gate::swap(2, 0)]).unwrap();
        assert_eq!(amps[4], Complex64::new(1.0, 0.0));
        let amps = run_gates(2, &[Gate::x(0), Gate::cx(0, 1)]).unwrap();
        assert_eq!(amps[3], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn open_controls_fire_on_zero() {
        let g = Gate::MultiControlled { op: OneQubit::X, controls: vec![Control::off(0), Control::on(1)], target: 2 };
        let amps = run_gates(3, &[Gate::x(1), g.clone()]).unwrap();
        assert_eq!(amps[0b011], Complex64::new(1.0, 0.0));
        let amps = run_gates(3, &[Gate::x(0), Gate::x(1), g]).unwrap();
        assert_eq!(amps[0b110], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn width_cap_and_bad_gates() {
        assert!(matches!(run_gates(30, &[]), Err(SimError::TooWide { .. })));
        assert!(matches!(run_gates(2, &[Gate::cx(0, 0)]), Err(SimError::InvalidGate(_))));
        assert!(matches!(run_gates(2, &[Gate::single(OneQubit::Rx(f64::NAN), 0)]), Err(SimError::InvalidGate(_))));
        assert!(matches!(simulate(&Circuit::new(3)), Err(SimError::OddWidth(3))));
    }

    #[test]
    fn point_mass_sampling() {
        let mut c = Circuit::new(4);
        c.metadata.n_nodes = Some(4);
        let r = simulate(&c).unwrap();
        let counts = sample(&r, 100, 3).unwrap();
        assert_eq!(counts.per_node, vec![100, 0, 0, 0]);
        assert_eq!(counts.invalid, 0);
        assert!(matches!(sample(&r, 0, 3), Err(SimError::NoShots)));
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut c = Circuit::with_gates(4, vec![Gate::h(0), Gate::h(1)]);
        c.metadata.n_nodes = Some(3);
        let r = simulate(&c).unwrap();
        let a = sample(&r, 1000, 5).unwrap();
        assert_eq!(a, sample(&r, 1000, 5).unwrap());
        assert_ne!(a, sample(&r, 1000, 6).unwrap());
        assert_eq!(a.shots(), 1000);
        assert!(a.invalid > 0);
    }

    #[test]
    fn noise_epsilon_bounds() {
        assert!(NoiseModel::new(-0.1).is_err());
        assert!(NoiseModel::new(1.1).is_err());
        let c = Circuit::with_gates(2, vec![Gate::swap(0, 1)]);
        assert!(matches!(simulate_noisy(&c, NoiseModel::new(0.1).unwrap(), 10, 0), Err(SimError::NotBasis(_))));
    }

    #[test]
    fn certain_noise_flips_something() {
        // epsilon = 1 on a lone X: a Pauli lands on qubit 0 every shot
        let c = Circuit::with_gates(2, vec![Gate::x(0)]);
        let counts = simulate_noisy(&c, NoiseModel::new(1.0).unwrap(), 300, 1).unwrap();
        assert_eq!(counts.shots(), 300);
        // X or Y sends qubit 0 back to |0>; Z leaves it at |1>
        assert!(counts.per_node[0] > 150 && counts.per_node[1] > 50);
    }
}
