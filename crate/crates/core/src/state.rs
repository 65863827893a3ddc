//! Dual-register state vectors.
//!
//! The walker state `|i>|j>` ("at node i, pointing at j") lives at basis index
//! `i * 2^n + j`, where `n` is the per-register qubit count. Qubit 0 is the
//! most significant bit of register `x`, qubit `n` the most significant bit of
//! register `y`.

use std::fmt::Write as _;

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on two registers of `register_qubits` qubits each.
    pub fn zero(register_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << (2 * register_qubits)];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { register_qubits, amplitudes }
    }

    pub fn from_amplitudes(register_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), 1 << (2 * register_qubits), "amplitude length mismatch");
        Self { register_qubits, amplitudes }
    }

    pub fn register_qubits(&self) -> usize {
        self.register_qubits
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.register_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        (i << self.register_qubits) | j
    }

    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[self.index(i, j)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Marginal of register `x` over all `2^n` labels, padding included.
    pub fn register_probabilities(&self) -> Vec<f64> {
        let dim = 1 << self.register_qubits;
        self.amplitudes
            .chunks(dim)
            .map(|row| row.iter().map(Complex64::norm_sqr).sum())
            .collect()
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.amplitudes.len(), other.amplitudes.len());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `index,re,im` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (idx, a) in self.amplitudes.iter().enumerate() {
            writeln!(out, "{idx},{:e},{:e}", a.re, a.im).unwrap();
        }
        out
    }
}
