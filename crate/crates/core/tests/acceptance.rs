//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each.
//!
//! Run with `cargo test --test zz_acceptance -- --nocapture` to see the report
//! when everything passes.

use std::time::Instant;

use qwalknet::analysis::{compare_circuit_vs_oracle, fit_power_law, l1_distance, run_n_scaling, run_t_scaling, ScalingRun};
use qwalknet::circuit::{build_coin, build_shift, build_walk_circuit, decompose_to_basis, resource_report, Circuit};
use qwalknet::graph::{self, Graph, GraphParams, Model};
use qwalknet::oracle::{max_identity_defect, unitarity_defect, WalkOperators};
use qwalknet::sim::{sample, simulate, simulate_noisy, NoiseModel};

struct Report {
    lines: Vec<String>,
    failed: Vec<usize>,
}

impl Report {
    fn record(&mut self, k: usize, pass: bool, what: &str, detail: String) {
        let line = format!("[{}] criterion {k}: {what} | {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        if !pass {
            self.failed.push(k);
        }
    }
}

fn er10() -> Graph {
    GraphParams::new(Model::Er { p: 0.3 }, 10, 42).generate().unwrap()
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let cmp = compare_circuit_vs_oracle(&er10(), 4, None).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let worst = cmp.l1.iter().map(|x| x.1).fold(0.0, f64::max);
    let values: Vec<String> = cmp.l1.iter().map(|(t, d)| format!("t={t}: {d:.1e}")).collect();
    r.record(
        1,
        cmp.l1.len() == 4 && worst < 1e-9 && secs < 10.0,
        "ER(10, 0.3, seed 42) circuit vs oracle, L1 < 1e-9 for t = 1..4 within 10 s",
        format!("{} ({secs:.2} s)", values.join(", ")),
    );
}

fn criterion_2(r: &mut Report) {
    let cases = [(4, 4), (8, 6), (10, 8), (16, 8), (33, 12), (64, 12)];
    let mut got = Vec::new();
    let mut ok = true;
    for (n, want) in cases {
        for g in [graph::cycle(n), GraphParams::new(Model::Ba { m: 2 }, n, 1).generate().unwrap()] {
            ok &= build_walk_circuit(&g, 1).n_qubits == want;
        }
        got.push(format!("N={n}: {}", build_walk_circuit(&graph::cycle(n), 1).n_qubits));
    }
    r.record(2, ok, "width = 2 ceil(log2 N) for N in {4, 8, 10, 16, 33, 64}", got.join(", "));
}

fn criterion_3(r: &mut Report) {
    let mut ok = true;
    let mut detail = Vec::new();
    for n_nodes in [4, 8, 10, 16, 33, 64] {
        let g = graph::cycle(n_nodes);
        let n = g.register_qubits();
        let shift_cx = resource_report(&Circuit::with_gates(2 * n, build_shift(n))).cx_count;
        let coin_cx = resource_report(&Circuit::with_gates(2 * n, build_coin(&g))).cx_count;
        let step_cx = resource_report(&build_walk_circuit(&g, 2)).cx_count
            - resource_report(&build_walk_circuit(&g, 1)).cx_count;
        ok &= shift_cx == 3 * n && step_cx == coin_cx + 3 * n;
        detail.push(format!("N={n_nodes}: {shift_cx}"));
    }
    r.record(3, ok, "each shift block lowers to exactly 3 ceil(log2 N) CX", detail.join(", "));
}

fn fit_line(run: &ScalingRun) -> String {
    format!("b = {:.3} +- {:.3} (a = {:.1}, r2 = {:.4})", run.fit.b, run.fit.stderr_b, run.fit.a, run.fit.r_squared)
}

fn criterion_4(r: &mut Report) {
    let models = [
        (Model::Er { p: 0.4 }, "1.91(7)", "38(12)"),
        (Model::Ws { k: 4, beta: 0.5 }, "1.86(4)", "41(8)"),
        (Model::Ba { m: 4 }, "1.90(7)", "38(12)"),
    ];
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (model, ref_b, ref_a) in models {
        let run = run_n_scaling(model, &[8, 16, 24, 32, 48, 64], 1, 3, 0, None).unwrap();
        let inside = (1.6..=2.4).contains(&run.fit.b);
        ok &= inside && run.failures.is_empty();
        detail.push(format!(
            "{model}: {} {} [published b = {ref_b}, a = {ref_a}]",
            fit_line(&run),
            if inside { "in band" } else { "OUTSIDE [1.6, 2.4]" }
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 600.0;
    detail.push(format!("published prefactors come from a vendor optimizer and are not reproducible; {secs:.1} s"));
    r.record(4, ok, "N-scaling exponents in [1.6, 2.4], t = 1, 3 seeds", detail.join("; "));
}

/// Every instance's depth must be `d0 + t * delta` with a per-instance constant.
fn affine_in_t(run: &ScalingRun) -> Result<(), String> {
    let mut seeds: Vec<u64> = run.records.iter().map(|x| x.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    for seed in seeds {
        let mut pts: Vec<(usize, usize)> =
            run.records.iter().filter(|x| x.seed == seed).map(|x| (x.t, x.depth_basis)).collect();
        pts.sort_unstable();
        let (t0, d0) = pts[0];
        let (t1, d1) = pts[1];
        let delta = (d1 - d0) / (t1 - t0);
        if delta == 0 || pts.iter().any(|&(t, d)| d != d0 + (t - t0) * delta) {
            return Err(format!("seed {seed}: {pts:?}"));
        }
    }
    Ok(())
}

fn criterion_5(r: &mut Report) {
    let models = [(Model::Er { p: 0.4 }, "0.86(1)"), (Model::Ws { k: 4, beta: 0.5 }, "0.88(2)"), (Model::Ba { m: 4 }, "0.88(2)")];
    let mut ok = true;
    let mut detail = Vec::new();
    for (model, reference) in models {
        let run = run_t_scaling(model, 32, &[1, 2, 3, 4, 6, 8], 3, 0, None).unwrap();
        let affine = affine_in_t(&run);
        let inside = (0.95..=1.05).contains(&run.fit.b);
        ok &= affine.is_ok() && inside;
        detail.push(format!(
            "{model}: affine {}, {} {} [published b = {reference}]",
            if affine.is_ok() { "yes" } else { "NO" },
            fit_line(&run),
            if inside { "in band" } else { "OUTSIDE [0.95, 1.05]" }
        ));
        if let Err(e) = affine {
            detail.push(e);
        }
    }
    r.record(5, ok, "t-scaling at N = 32: depth affine in t, exponent in [0.95, 1.05]", detail.join("; "));
}

fn criterion_6(r: &mut Report) {
    let mut worst: f64 = 0.0;
    for g in [graph::cycle(8), graph::complete(8)] {
        let n = g.n_nodes() as f64;
        for t in 0..=10 {
            let p = simulate(&build_walk_circuit(&g, t)).unwrap().node_probs;
            worst = p.iter().map(|x| (x - 1.0 / n).abs()).fold(worst, f64::max);
        }
    }
    r.record(6, worst < 1e-10, "C8 and K8 stay uniform for t <= 10", format!("max deviation {worst:.1e}"));
}

fn criterion_7(r: &mut Report) {
    let graphs = vec![
        graph::path(2),
        graph::path(5),
        graph::cycle(4),
        graph::cycle(8),
        graph::complete(4),
        graph::complete(8),
        er10(),
        GraphParams::new(Model::Ws { k: 2, beta: 0.2 }, 8, 1).generate().unwrap(),
        GraphParams::new(Model::Ba { m: 2 }, 12, 5).generate().unwrap(),
        GraphParams::new(Model::Er { p: 0.3 }, 16, 7).generate().unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for g in &graphs {
        let ops = WalkOperators::new(g).unwrap();
        worst = worst
            .max(unitarity_defect(&ops.coin))
            .max(unitarity_defect(&ops.shift))
            .max(max_identity_defect(&(&ops.coin * &ops.coin)))
            .max(max_identity_defect(&(&ops.shift * &ops.shift)));
    }
    r.record(
        7,
        worst < 1e-12,
        "coin and shift unitary and self-inverse on all test graphs",
        format!("{} graphs, worst defect {worst:.1e}", graphs.len()),
    );
}

fn criterion_8(r: &mut Report) {
    let hand = [
        (vec![0.3, 0.7], vec![0.3, 0.7], 0.0),
        (vec![1.0, 0.0], vec![0.0, 1.0], 1.0),
        (vec![0.75, 0.25], vec![0.25, 0.75], 0.5),
    ];
    let l1_err = hand
        .iter()
        .map(|(p, q, want)| (l1_distance(p, q).unwrap() - want).abs())
        .fold(0.0, f64::max);
    let xs: Vec<f64> = [8.0, 16.0, 24.0, 32.0, 48.0, 64.0].to_vec();
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 40.0 * x.powf(1.9)).collect();
    let f = fit_power_law(&xs, &ys).unwrap();
    let (ea, eb) = ((f.a - 40.0).abs() / 40.0, (f.b - 1.9).abs() / 1.9);
    r.record(
        8,
        l1_err < 1e-12 && ea < 1e-9 && eb < 1e-9,
        "l1 hand cases exact, power-law fit recovers (40, 1.9)",
        format!("l1 error {l1_err:.1e}, relative error a {ea:.1e} b {eb:.1e}"),
    );
}

fn criterion_9(r: &mut Report) {
    let g = er10();
    let c = build_walk_circuit(&g, 2);
    let result = simulate(&c).unwrap();
    let mut exact = result.node_probs.clone();
    exact.push(0.0);
    let counts = sample(&result, 1_000_000, 42).unwrap();
    let l1 = l1_distance(&exact, &counts.distribution()).unwrap();

    let basis = decompose_to_basis(&c);
    let quiet = simulate_noisy(&basis, NoiseModel::new(0.0).unwrap(), 10_000, 42).unwrap();
    let identical = quiet == sample(&result, 10_000, 42).unwrap();

    let small = graph::path(4);
    let small_c = build_walk_circuit(&small, 1);
    let small_basis = decompose_to_basis(&small_c);
    let mut small_exact = simulate(&small_c).unwrap().node_probs;
    small_exact.push(0.0);
    let eps = [0.0, 1e-4, 3e-4, 1e-3, 3e-3];
    let mean_l1: Vec<f64> = eps
        .iter()
        .map(|&e| {
            (0..10)
                .map(|s| {
                    let k = simulate_noisy(&small_basis, NoiseModel::new(e).unwrap(), 2_000, s).unwrap();
                    l1_distance(&small_exact, &k.distribution()).unwrap()
                })
                .sum::<f64>()
                / 10.0
        })
        .collect();
    let monotone = mean_l1.windows(2).all(|w| w[0] < w[1]);
    let curve: Vec<String> = eps.iter().zip(&mean_l1).map(|(e, l)| format!("{e}: {l:.4}")).collect();
    r.record(
        9,
        l1 <= 0.005 && identical && monotone,
        "1e6 shots within L1 0.005, eps = 0 equals the noiseless sampler, L1 grows with eps",
        format!(
            "L1 {l1:.5}, eps=0 identical {identical}, mean L1 by eps (path P4, 10 seeds) {}",
            curve.join(", ")
        ),
    );
}

#[test]
fn acceptance() {
    let mut r = Report { lines: Vec::new(), failed: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    println!("{} of 9 criteria pass", 9 - r.failed.len());
    assert!(r.failed.is_empty(), "failing criteria {:?}:\n{}", r.failed, r.lines.join("\n"));
}
