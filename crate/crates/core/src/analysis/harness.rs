use rayon::prelude::*;
use serde::Serialize;

use super::{fit_power_law, l1_distance, AnalysisError, FitResult};
use crate::circuit::{
    build_coin, build_controlled_u2, build_shift, build_u1, build_walk_circuit, lower_gate, resource_report,
};
use crate::graph::{Graph, GraphParams, Model};
use crate::oracle::{self, WalkOperators};
use crate::sim::{self, apply_gate, SimResult};
use crate::state::StateVector;

pub const MAX_COMPARE_NODES: usize = 16;
pub const MAX_COMPARE_STEPS: usize = 8;

/// One compiled instance of a scaling sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub model: String,
    #[serde(skip)]
    pub params: GraphParams,
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub width: usize,
    pub depth_basis: usize,
    pub cx_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFailure {
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub reason: String,
}

/// Mean and sample standard deviation of basis depth at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub x: f64,
    pub mean_depth: f64,
    pub std_depth: f64,
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct ScalingRun {
    pub model: Model,
    pub records: Vec<ScalingRecord>,
    pub failures: Vec<ScalingFailure>,
    pub points: Vec<SweepPoint>,
    pub fit: FitResult,
}

/// Row of the fit-summary CSV.
#[derive(Debug, Clone, Serialize)]
pub struct FitSummaryRow {
    pub model: String,
    pub a: f64,
    pub stderr_a: f64,
    pub b: f64,
    pub stderr_b: f64,
    pub r2: f64,
}

impl ScalingRun {
    pub fn summary_row(&self) -> FitSummaryRow {
        FitSummaryRow {
            model: self.model.name().to_string(),
            a: self.fit.a,
            stderr_a: self.fit.stderr_a,
            b: self.fit.b,
            stderr_b: self.fit.stderr_b,
            r2: self.fit.r_squared,
        }
    }

    /// `model,n,t,seed,width,depth_basis,cx_count` rows with a header.
    pub fn records_csv(&self) -> Result<String, AnalysisError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }
}

fn job(params: GraphParams, t: usize) -> Result<ScalingRecord, String> {
    let g = params.generate().map_err(|e| e.to_string())?;
    let report = resource_report(&build_walk_circuit(&g, t));
    Ok(ScalingRecord {
        model: params.model.name().to_string(),
        params,
        n: params.n,
        t,
        seed: params.seed,
        width: report.width,
        depth_basis: report.depth_basis,
        cx_count: report.cx_count,
    })
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, AnalysisError> {
    match jobs {
        None => Ok(f()),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| AnalysisError::InvalidRequest(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs every `(x, seed)` job, groups by `x`, fits mean depth against `x`.
fn sweep(
    model: Model,
    specs: Vec<(f64, GraphParams, usize)>,
    jobs: Option<usize>,
) -> Result<ScalingRun, AnalysisError> {
    let results: Vec<_> = in_pool(jobs, || {
        specs
            .par_iter()
            .map(|&(x, params, t)| (x, params, t, job(params, t)))
            .collect::<Vec<_>>()
    })?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut points: Vec<SweepPoint> = Vec::new();
    let mut xs: Vec<f64> = specs.iter().map(|s| s.0).collect();
    xs.dedup();
    for x in xs {
        let depths: Vec<f64> = results
            .iter()
            .filter(|r| r.0 == x)
            .filter_map(|(_, params, t, res)| match res {
                Ok(rec) => {
                    records.push(rec.clone());
                    Some(rec.depth_basis as f64)
                }
                Err(reason) => {
                    eprintln!("warning: {} n={} seed={} excluded: {reason}", params.model, params.n, params.seed);
                    failures.push(ScalingFailure { n: params.n, t: *t, seed: params.seed, reason: reason.clone() });
                    None
                }
            })
            .collect();
        if depths.is_empty() {
            continue;
        }
        let k = depths.len() as f64;
        let mean = depths.iter().sum::<f64>() / k;
        let std = if depths.len() > 1 {
            (depths.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        points.push(SweepPoint { x, mean_depth: mean, std_depth: std, samples: depths.len() });
    }
    let fx: Vec<f64> = points.iter().map(|p| p.x).collect();
    let fy: Vec<f64> = points.iter().map(|p| p.mean_depth).collect();
    let fit = fit_power_law(&fx, &fy)?;
    Ok(ScalingRun { model, records, failures, points, fit })
}

/// Basis depth against node count at a fixed step count.
///
/// Instance `s` of every point uses seed `base_seed + s`.
pub fn run_n_scaling(
    model: Model,
    n_values: &[usize],
    t: usize,
    seeds_per_point: usize,
    base_seed: u64,
    jobs: Option<usize>,
) -> Result<ScalingRun, AnalysisError> {
    if seeds_per_point == 0 {
        return Err(AnalysisError::InvalidRequest("seeds_per_point must be at least 1".into()));
    }
    if let Some(n) = n_values.iter().find(|&&n| n < 4) {
        return Err(AnalysisError::InvalidRequest(format!("node counts must be >= 4, got {n}")));
    }
    let specs = n_values
        .iter()
        .flat_map(|&n| {
            (0..seeds_per_point as u64).map(move |s| (n as f64, GraphParams::new(model, n, base_seed + s), t))
        })
        .collect();
    sweep(model, specs, jobs)
}

/// Basis depth against step count at a fixed node count.
pub fn run_t_scaling(
    model: Model,
    n_nodes: usize,
    t_values: &[usize],
    seeds_per_point: usize,
    base_seed: u64,
    jobs: Option<usize>,
) -> Result<ScalingRun, AnalysisError> {
    if t_values.len() < 2 {
        return Err(AnalysisError::InvalidRequest(format!(
            "t-scaling needs at least two step counts, got {}",
            t_values.len()
        )));
    }
    if seeds_per_point == 0 {
        return Err(AnalysisError::InvalidRequest("seeds_per_point must be at least 1".into()));
    }
    if t_values.contains(&0) {
        return Err(AnalysisError::InvalidRequest("step counts must be positive for a power-law fit".into()));
    }
    let specs = t_values
        .iter()
        .flat_map(|&t| {
            (0..seeds_per_point as u64)
                .map(move |s| (t as f64, GraphParams::new(model, n_nodes, base_seed + s), t))
        })
        .collect();
    sweep(model, specs, jobs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub t: usize,
    pub node: usize,
    pub p_exact: f64,
    pub p_circuit: f64,
    pub p_sampled: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub n_nodes: usize,
    pub rows: Vec<ComparisonRow>,
    /// `(t, L1(circuit, exact))` for `t = 1..=t_max`.
    pub l1: Vec<(usize, f64)>,
    /// `(t, L1(sampled, exact))`, when shots were requested.
    pub l1_sampled: Vec<(usize, f64)>,
}

impl Comparison {
    /// `t,node,p_exact,p_circuit,p_sampled` rows with a header.
    pub fn to_csv(&self) -> Result<String, AnalysisError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
    }

    pub fn rows_at(&self, t: usize) -> Vec<ComparisonRow> {
        self.rows.iter().filter(|r| r.t == t).copied().collect()
    }
}

/// Node distributions from the basis-decomposed circuit against the dense
/// oracle for `t = 1..=t_max`. With `shots = Some((count, seed))` each circuit
/// distribution is also sampled (seed `seed + t`).
pub fn compare_circuit_vs_oracle(
    g: &Graph,
    t_max: usize,
    shots: Option<(u64, u64)>,
) -> Result<Comparison, AnalysisError> {
    if g.n_nodes() > MAX_COMPARE_NODES {
        return Err(AnalysisError::InvalidRequest(format!(
            "comparison is limited to {MAX_COMPARE_NODES} nodes, graph has {}",
            g.n_nodes()
        )));
    }
    if t_max == 0 || t_max > MAX_COMPARE_STEPS {
        return Err(AnalysisError::InvalidRequest(format!(
            "t_max must lie in 1..={MAX_COMPARE_STEPS}, got {t_max}"
        )));
    }
    let n = g.register_qubits();
    let width = 2 * n;
    let ops = WalkOperators::new(g)?;
    let mut exact = oracle::initial_state(g);

    let mut prep = build_u1(g.n_nodes());
    prep.extend(build_controlled_u2(g));
    let mut step = build_coin(g);
    step.extend(build_shift(n));
    let lower = |gates: Vec<_>| {
        let mut out = Vec::new();
        gates.iter().for_each(|gate| lower_gate(gate, width, &mut out));
        out
    };
    let (prep, step) = (lower(prep), lower(step));
    let mut amps = sim::run_gates(width, &prep)?;

    let mut rows = Vec::new();
    let mut l1 = Vec::new();
    let mut l1_sampled = Vec::new();
    for t in 1..=t_max {
        exact = ops.evolve_from(&exact, 1);
        for gate in &step {
            apply_gate(&mut amps, width, gate);
        }
        let p_exact = oracle::node_probabilities(&exact, g)?;
        let state = StateVector::from_amplitudes(n, amps.clone());
        let result = SimResult {
            register_probs: state.register_probabilities(),
            node_probs: oracle::node_probabilities(&state, g)?,
            final_state: state,
        };
        l1.push((t, l1_distance(&p_exact, &result.node_probs)?));
        let sampled = match shots {
            Some((count, seed)) => {
                let counts = sim::sample(&result, count, seed.wrapping_add(t as u64))?;
                let mut with_invalid = p_exact.clone();
                with_invalid.push(0.0);
                l1_sampled.push((t, l1_distance(&with_invalid, &counts.distribution())?));
                Some(counts.node_distribution())
            }
            None => None,
        };
        for node in 0..g.n_nodes() {
            rows.push(ComparisonRow {
                t,
                node,
                p_exact: p_exact[node],
                p_circuit: result.node_probs[node],
                p_sampled: sampled.as_ref().map(|s| s[node]),
            });
        }
    }
    Ok(Comparison { n_nodes: g.n_nodes(), rows, l1, l1_sampled })
}
