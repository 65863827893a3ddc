//! Amplitude loading by a binary tree of multiplexed Y rotations.
//!
//! Level `l` rotates the `l`-th most significant qubit of the register, once
//! per `l`-bit prefix, controlled on that prefix. The rotation splits the
//! prefix's probability mass between its two children, so the final state has
//! amplitudes `sqrt(p_x)`, all real and nonnegative. A rotation is omitted
//! when its prefix carries no mass or when all of the mass stays on the `0`
//! child (the angle would be exactly zero).

use super::{Circuit, Control, Gate, OneQubit, Register};

/// Allowed deviation of the input distribution's total from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PrepError {
    #[error("distribution has {got} entries, register of {qubits} qubits needs {}", 1usize << .qubits)]
    Length { got: usize, qubits: usize },
    #[error("entry {index} is {value}; probabilities must be finite and nonnegative")]
    Entry { index: usize, value: f64 },
    #[error("distribution sums to {0}, not 1")]
    NotNormalized(f64),
}

/// Gates loading `dist` into `reg`, each extended by the extra `controls`.
pub fn state_prep_gates(
    dist: &[f64],
    reg: Register,
    controls: &[Control],
) -> Result<Vec<Gate>, PrepError> {
    if dist.len() != 1 << reg.len {
        return Err(PrepError::Length { got: dist.len(), qubits: reg.len });
    }
    if let Some((index, &value)) =
        dist.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0)
    {
        return Err(PrepError::Entry { index, value });
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(PrepError::NotNormalized(total));
    }

    // masses[l][b]: probability of the l-bit prefix b
    let mut masses = vec![dist.to_vec()];
    for _ in 0..reg.len {
        let below = masses.last().unwrap();
        let above: Vec<f64> = below.chunks(2).map(|pair| pair[0] + pair[1]).collect();
        masses.push(above);
    }
    masses.reverse();

    let mut gates = Vec::new();
    for level in 0..reg.len {
        for prefix in 0..1usize << level {
            let mass = masses[level][prefix];
            if mass == 0.0 {
                continue;
            }
            let left = masses[level + 1][2 * prefix];
            let theta = 2.0 * (left / mass).clamp(0.0, 1.0).sqrt().acos();
            if theta == 0.0 {
                continue;
            }
            let mut ctrls = controls.to_vec();
            ctrls.extend(reg.prefix_controls(level, prefix));
            gates.push(Gate::controlled(OneQubit::Ry(theta), ctrls, reg.qubit_at_level(level)));
        }
    }
    Ok(gates)
}

/// Standalone loader circuit on a fresh register of `log2(dist.len())` qubits.
pub fn build_state_prep(dist: &[f64]) -> Result<Circuit, PrepError> {
    if !dist.len().is_power_of_two() || dist.len() < 2 {
        return Err(PrepError::Length { got: dist.len(), qubits: dist.len().max(2).ilog2() as usize });
    }
    let qubits = dist.len().ilog2() as usize;
    let gates = state_prep_gates(dist, Register::new(0, qubits), &[])?;
    Ok(Circuit::with_gates(qubits, gates))
}
