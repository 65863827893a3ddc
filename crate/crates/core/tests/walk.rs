//! Gate-level walk against the dense operator model.
#![allow(clippy::excessive_precision)]

use num_complex::Complex64;
use qwalknet::analysis::compare_circuit_vs_oracle;
use qwalknet::circuit::{
    build_coin, build_controlled_u2, build_shift, build_u1, build_walk_circuit, circuit_to_json, decompose_to_basis,
    resource_report, Circuit,
};
use qwalknet::graph::{self, Graph, GraphParams, Model};
use qwalknet::oracle::{self, WalkOperators};
use qwalknet::sim::{run_gates, run_gates_on, simulate};
use qwalknet::StateVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn er10() -> Graph {
    GraphParams::new(Model::Er { p: 0.3 }, 10, 42).generate().unwrap()
}

fn test_graphs() -> Vec<(&'static str, Graph)> {
    vec![
        ("C4", graph::cycle(4)),
        ("P2", graph::path(2)),
        ("P5", graph::path(5)),
        ("K4", graph::complete(4)),
        ("ER10", er10()),
        ("WS8", GraphParams::new(Model::Ws { k: 2, beta: 0.2 }, 8, 1).generate().unwrap()),
        ("BA12", GraphParams::new(Model::Ba { m: 2 }, 12, 5).generate().unwrap()),
        ("ER16", GraphParams::new(Model::Er { p: 0.3 }, 16, 7).generate().unwrap()),
    ]
}

#[test]
fn er10_instance_is_pinned() {
    let g = er10();
    let want = [
        (0, 5), (0, 6), (1, 2), (1, 8), (2, 3), (2, 5), (2, 6), (2, 9),
        (3, 4), (3, 5), (4, 6), (4, 7), (4, 8), (5, 8), (7, 8),
    ];
    assert_eq!(g.edges(), want);
}

/// Node distributions of ER(10, 0.3, seed 42), computed by an independent
/// NumPy implementation of the coined walk on the unpadded `N x N` space.
const ER10_NODE_PROBS: [[f64; 10]; 4] = [
    [
        5.833333333333334e-02, 4.500000000000000e-02, 2.416666666666667e-01, 7.000000000000001e-02,
        1.416666666666667e-01, 1.283333333333333e-01, 9.499999999999997e-02, 5.000000000000000e-02,
        1.500000000000000e-01, 2.000000000000000e-02,
    ],
    [
        3.236956603489208e-02, 6.565543504557517e-02, 1.594858846366662e-01, 1.243103645630245e-01,
        1.329512062862400e-01, 1.762937623795460e-01, 1.203137492519785e-01, 4.744834821676465e-02,
        1.292882938883978e-01, 1.188338969691500e-02,
    ],
    [
        1.076321274777225e-01, 8.343160447730000e-02, 1.059297498132493e-01, 1.502564617600723e-01,
        1.307013621362410e-01, 1.152064888253983e-01, 6.643428339950228e-02, 7.931307757955036e-02,
        1.164155952414678e-01, 4.467924928949602e-02,
    ],
    [
        6.946790823582139e-02, 3.538984008250098e-02, 2.127994855046465e-01, 4.698840586679296e-02,
        1.483354157402500e-01, 1.321733500953735e-01, 9.390859892293149e-02, 7.437115040513449e-02,
        1.542731453582188e-01, 3.229269978832961e-02,
    ],
];

#[test]
fn er10_distributions_match_pinned_values() {
    let g = er10();
    for (k, want) in ER10_NODE_PROBS.iter().enumerate() {
        let t = k + 1;
        let exact = oracle::node_probabilities(&oracle::evolve(&g, t).unwrap(), &g).unwrap();
        let circuit = simulate(&build_walk_circuit(&g, t)).unwrap().node_probs;
        for i in 0..10 {
            assert!((exact[i] - want[i]).abs() < 1e-12, "oracle t={t} node {i}");
            assert!((circuit[i] - want[i]).abs() < 1e-10, "circuit t={t} node {i}");
        }
    }
}

#[test]
fn logical_circuit_matches_oracle_amplitudes() {
    for (name, g) in test_graphs() {
        let ops = WalkOperators::new(&g).unwrap();
        let psi0 = oracle::initial_state(&g);
        for t in 0..=4 {
            let got = simulate(&build_walk_circuit(&g, t)).unwrap();
            let want = ops.evolve_from(&psi0, t);
            let err = got.final_state.max_abs_diff(&want);
            assert!(err < 1e-8, "{name} t={t}: amplitude error {err}");
            assert!(got.invalid_mass() < 1e-20, "{name} t={t}: padding mass {}", got.invalid_mass());
        }
    }
}

#[test]
fn basis_circuit_matches_oracle_distributions() {
    for (name, g) in test_graphs() {
        let cmp = compare_circuit_vs_oracle(&g, 4, None).unwrap();
        for (t, l1) in cmp.l1 {
            assert!(l1 < 1e-9, "{name} t={t}: L1 {l1}");
        }
    }
}

#[test]
fn basis_circuit_matches_oracle_amplitudes() {
    let g = er10();
    let basis = decompose_to_basis(&build_walk_circuit(&g, 2));
    assert!(basis.is_basis());
    let got = StateVector::from_amplitudes(4, run_gates(8, &basis.gates).unwrap());
    let want = oracle::evolve(&g, 2).unwrap();
    assert!(got.max_abs_diff(&want) < 1e-8);
}

#[test]
fn u1_is_uniform_over_real_nodes() {
    for n_nodes in [3, 5, 8, 10, 13, 16] {
        let n = graph::register_qubits(n_nodes);
        let amps = run_gates(n, &build_u1(n_nodes)).unwrap();
        for (i, a) in amps.iter().enumerate() {
            let want = if i < n_nodes { 1.0 / (n_nodes as f64).sqrt() } else { 0.0 };
            assert!((a - Complex64::new(want, 0.0)).norm() < 1e-12, "N={n_nodes} i={i}: {a}");
        }
    }
}

#[test]
fn prep_matches_initial_state_formula() {
    let g = er10();
    let mut gates = build_u1(10);
    gates.extend(build_controlled_u2(&g));
    let psi = StateVector::from_amplitudes(4, run_gates(8, &gates).unwrap());
    assert!(psi.max_abs_diff(&oracle::initial_state(&g)) < 1e-10);
    for i in 0..16 {
        for j in 0..16 {
            let want = if i < 10 && g.has_edge(i, j) {
                1.0 / (10.0 * g.degree(i) as f64).sqrt()
            } else {
                0.0
            };
            assert!((psi.amplitude(i, j) - Complex64::new(want, 0.0)).norm() < 1e-10, "({i},{j})");
        }
    }
}

#[test]
fn coin_acts_like_dense_coin_on_random_valid_states() {
    let g = er10();
    let n = g.register_qubits();
    let dense = oracle::build_coin(&g).unwrap();
    let gates = build_coin(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let mut psi = StateVector::zero(n);
        for (i, j) in g.edges().into_iter().flat_map(|(a, b)| [(a, b), (b, a)]) {
            let idx = psi.index(i, j);
            psi.amplitudes_mut()[idx] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let norm = psi.norm_sqr().sqrt();
        psi.amplitudes_mut().iter_mut().for_each(|a| *a /= norm);

        let want = &dense * nalgebra::DVector::from_column_slice(psi.amplitudes());
        let mut got = psi.into_amplitudes();
        run_gates_on(&mut got, 2 * n, &gates).unwrap();
        let err = got.iter().zip(want.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "coin error {err}");
    }
}

#[test]
fn shift_swaps_registers_on_every_basis_state() {
    for n in 1..=4 {
        let gates = build_shift(n);
        for i in 0..1 << n {
            for j in 0..1 << n {
                let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * n)];
                amps[(i << n) | j] = Complex64::new(1.0, 0.0);
                run_gates_on(&mut amps, 2 * n, &gates).unwrap();
                assert_eq!(amps[(j << n) | i], Complex64::new(1.0, 0.0), "n={n} |{i},{j}>");
            }
        }
        let report = resource_report(&Circuit::with_gates(2 * n, gates));
        assert_eq!(report.cx_count, 3 * n);
        assert_eq!(report.basis_gate_count, 3 * n);
    }
}

#[test]
fn width_is_twice_register_size() {
    for (n_nodes, want) in [(2, 2), (3, 4), (4, 4), (5, 6), (8, 6), (9, 8), (10, 8), (16, 8), (17, 10), (33, 12), (64, 12)] {
        assert_eq!(build_walk_circuit(&graph::path(n_nodes), 1).n_qubits, want, "N={n_nodes}");
    }
}

#[test]
fn compilation_is_deterministic() {
    let g = er10();
    let a = build_walk_circuit(&g, 3);
    let b = build_walk_circuit(&er10(), 3);
    assert_eq!(circuit_to_json(&a), circuit_to_json(&b));
    assert_eq!(resource_report(&a), resource_report(&b));
    assert_eq!(simulate(&a).unwrap().final_state, simulate(&b).unwrap().final_state);
}

#[test]
fn c8_basis_depth_is_pinned() {
    let report = resource_report(&build_walk_circuit(&graph::cycle(8), 1));
    assert_eq!(report.width, 6);
    assert_eq!(report.depth_basis, 6303);
    assert_eq!(report.cx_count, 3369);
}

#[test]
fn depth_is_affine_and_increasing_in_steps() {
    for g in [graph::cycle(8), er10()] {
        let depths: Vec<usize> = (0..=5).map(|t| resource_report(&build_walk_circuit(&g, t)).depth_basis).collect();
        let step = depths[1] - depths[0];
        assert!(step > 0);
        for w in depths.windows(2) {
            assert_eq!(w[1] - w[0], step, "{depths:?}");
        }
    }
}

#[test]
fn zero_steps_is_preparation_only() {
    let g = er10();
    let c = build_walk_circuit(&g, 0);
    let mut prep = build_u1(10);
    prep.extend(build_controlled_u2(&g));
    assert_eq!(c.gates, prep);
}

#[test]
fn regular_graphs_stay_uniform() {
    for g in [graph::cycle(8), graph::complete(8), graph::cycle(5)] {
        let n = g.n_nodes();
        for t in 0..=10 {
            let p = simulate(&build_walk_circuit(&g, t)).unwrap().node_probs;
            let worst = p.iter().map(|x| (x - 1.0 / n as f64).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-10, "N={n} t={t}: {worst}");
        }
    }
}
