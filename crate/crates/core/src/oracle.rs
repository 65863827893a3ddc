//! Exact dense-operator model of the coined walk.
//!
//! Builds the coin and flip-flop shift as full `D x D` matrices over the padded
//! dual-register space (`D = 4^n`) straight from their definitions. Nothing here
//! touches the gate-level pipeline, so it serves as ground truth for it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::graph::Graph;
use crate::state::StateVector;

/// Largest graph the dense model accepts.
pub const MAX_ORACLE_NODES: usize = 64;

/// Normalization slack accepted by [`node_probabilities`].
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("graph has {0} nodes; the dense oracle is limited to {MAX_ORACLE_NODES}")]
    TooLarge(usize),
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("state has {got} qubits per register, graph needs {want}")]
    RegisterMismatch { got: usize, want: usize },
}

pub type Matrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense coin, shift and step operators for one graph.
#[derive(Debug, Clone)]
pub struct WalkOperators {
    pub register_qubits: usize,
    pub dim: usize,
    pub coin: Matrix,
    pub shift: Matrix,
    pub step: Matrix,
}

impl WalkOperators {
    pub fn new(g: &Graph) -> Result<Self, OracleError> {
        check_size(g)?;
        let n = g.register_qubits();
        let coin = build_coin(g)?;
        let shift = build_shift(n);
        let step = &shift * &coin;
        Ok(Self { register_qubits: n, dim: 1 << (2 * n), coin, shift, step })
    }

    /// `(S C)^t |psi(0)>`.
    pub fn evolve_from(&self, initial: &StateVector, t: usize) -> StateVector {
        let mut v = nalgebra::DVector::from_column_slice(initial.amplitudes());
        for _ in 0..t {
            v = &self.step * v;
        }
        StateVector::from_amplitudes(self.register_qubits, v.as_slice().to_vec())
    }
}

fn check_size(g: &Graph) -> Result<(), OracleError> {
    if g.n_nodes() > MAX_ORACLE_NODES {
        return Err(OracleError::TooLarge(g.n_nodes()));
    }
    Ok(())
}

/// Uniform superposition over directed edges:
/// amplitude `1 / (sqrt(N) sqrt(k_i))` on every `(i, j)` with `j` adjacent to `i`.
pub fn initial_state(g: &Graph) -> StateVector {
    let n = g.register_qubits();
    let mut psi = StateVector::from_amplitudes(n, vec![c(0.0); 1 << (2 * n)]);
    let big_n = g.n_nodes() as f64;
    for i in 0..g.n_nodes() {
        let amp = 1.0 / (big_n.sqrt() * (g.degree(i) as f64).sqrt());
        for &j in g.neighbors(i) {
            let idx = psi.index(i, j);
            psi.amplitudes_mut()[idx] = c(amp);
        }
    }
    psi
}

/// Block-diagonal Grover coin. Node `i < N` gets `2|s_i><s_i| - I` on the full
/// `2^n` direction space, so directions that are not edges pick up `-1`;
/// padded nodes `i >= N` get the identity.
pub fn build_coin(g: &Graph) -> Result<Matrix, OracleError> {
    check_size(g)?;
    let n = g.register_qubits();
    let reg = 1 << n;
    let dim = reg * reg;
    let mut coin = Matrix::zeros(dim, dim);
    for i in 0..reg {
        let base = i * reg;
        if i >= g.n_nodes() {
            for j in 0..reg {
                coin[(base + j, base + j)] = c(1.0);
            }
            continue;
        }
        let k = g.degree(i) as f64;
        for j in 0..reg {
            coin[(base + j, base + j)] = c(-1.0);
        }
        for &a in g.neighbors(i) {
            for &b in g.neighbors(i) {
                coin[(base + a, base + b)] += c(2.0 / k);
            }
        }
    }
    Ok(coin)
}

/// Flip-flop shift: the permutation `|i>|j> -> |j>|i>` on the padded space.
pub fn build_shift(register_qubits: usize) -> Matrix {
    assert!(register_qubits >= 1);
    let reg = 1 << register_qubits;
    let dim = reg * reg;
    let mut shift = Matrix::zeros(dim, dim);
    for i in 0..reg {
        for j in 0..reg {
            shift[(j * reg + i, i * reg + j)] = c(1.0);
        }
    }
    shift
}

/// State after `t` walk steps from [`initial_state`].
pub fn evolve(g: &Graph, t: usize) -> Result<StateVector, OracleError> {
    let ops = WalkOperators::new(g)?;
    Ok(ops.evolve_from(&initial_state(g), t))
}

/// `P_i = sum_j |psi_ij|^2` for the `N` real nodes.
pub fn node_probabilities(psi: &StateVector, g: &Graph) -> Result<Vec<f64>, OracleError> {
    let want = g.register_qubits();
    if psi.register_qubits() != want {
        return Err(OracleError::RegisterMismatch { got: psi.register_qubits(), want });
    }
    let norm = psi.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(OracleError::NotNormalized(norm));
    }
    let mut probs = psi.register_probabilities();
    probs.truncate(g.n_nodes());
    Ok(probs)
}

/// Largest entry of `|M^dagger M - I|`.
pub fn unitarity_defect(m: &Matrix) -> f64 {
    let prod = m.adjoint() * m;
    max_identity_defect(&prod)
}

/// Largest entry of `|M - I|`.
pub fn max_identity_defect(m: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for col in 0..m.ncols() {
            let want = if r == col { c(1.0) } else { c(0.0) };
            worst = worst.max((m[(r, col)] - want).norm());
        }
    }
    worst
}
