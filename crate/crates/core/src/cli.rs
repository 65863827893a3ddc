//! The `qwalknet` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 runtime or numeric failure, 3 I/O.
//! Every CSV, QASM and SVG output starts with comment lines echoing the
//! command and (unless `--no-timestamp`) the time it ran; graph files and
//! JSON outputs stay plain.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    compare_circuit_vs_oracle, histogram_svg, run_n_scaling, run_t_scaling, AnalysisError, ScalingRun, Series,
};
use crate::circuit::{
    build_walk_circuit, circuit_to_json, decompose_to_basis, depth_of, resource_report, write_lowered_qasm,
    ExportError,
};
use crate::graph::{load_graph, Graph, GraphError, GraphParams, Model};
use crate::oracle::OracleError;
use crate::sim::{self, NoiseModel, SimError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            GraphError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Graph(g) => g.into(),
            AnalysisError::Io(_) => CliError::Io(e.to_string()),
            AnalysisError::Csv(ref c) if c.is_io_error() => CliError::Io(e.to_string()),
            AnalysisError::InvalidRequest(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "qwalknet", version, about = "Coined quantum walks on complex networks as gate circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an ER, WS or BA graph and write it as edge list and JSON.
    Generate(GenerateArgs),
    /// Compile a walk circuit and report width, depth and gate counts.
    Compile(CompileArgs),
    /// Simulate a walk circuit, optionally sampling shots with or without noise.
    Run(RunArgs),
    /// Compare circuit simulation against the exact operator model.
    Compare(CompareArgs),
    /// Sweep node count or step count and fit depth to a power law.
    Scaling(ScalingArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModelKind {
    Er,
    Ws,
    Ba,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Random graph model.
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// ER edge probability.
    #[arg(long)]
    p: Option<f64>,
    /// WS ring degree (even).
    #[arg(long)]
    k: Option<usize>,
    /// WS rewiring probability.
    #[arg(long)]
    beta: Option<f64>,
    /// BA attachment count.
    #[arg(long)]
    m: Option<usize>,
}

impl ModelArgs {
    fn model(&self) -> Result<Model, CliError> {
        let kind = self.model.ok_or_else(|| CliError::Usage("--model is required".into()))?;
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| CliError::Usage(format!("--model {} requires --{name}", kind_name(kind))))
        };
        let stray: Vec<&str> = [
            ("p", self.p.is_some() && kind != ModelKind::Er),
            ("k", self.k.is_some() && kind != ModelKind::Ws),
            ("beta", self.beta.is_some() && kind != ModelKind::Ws),
            ("m", self.m.is_some() && kind != ModelKind::Ba),
        ]
        .into_iter()
        .filter_map(|(name, bad)| bad.then_some(name))
        .collect();
        if !stray.is_empty() {
            return Err(CliError::Usage(format!(
                "--model {} does not take --{}",
                kind_name(kind),
                stray.join(", --")
            )));
        }
        Ok(match kind {
            ModelKind::Er => Model::Er { p: need("p", self.p)? },
            ModelKind::Ws => Model::Ws {
                k: need("k", self.k.map(|k| k as f64))? as usize,
                beta: need("beta", self.beta)?,
            },
            ModelKind::Ba => Model::Ba { m: need("m", self.m.map(|m| m as f64))? as usize },
        })
    }
}

fn kind_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Er => "er",
        ModelKind::Ws => "ws",
        ModelKind::Ba => "ba",
    }
}

#[derive(Args, Debug, Clone)]
struct GraphSource {
    /// Graph file (edge list, or JSON when the name ends in `.json`).
    #[arg(long, conflicts_with_all = ["model", "n", "p", "k", "beta", "m"])]
    graph: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    /// Node count of a generated graph.
    #[arg(long)]
    n: Option<usize>,
    /// Graph generation seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GraphSource {
    fn load(&self) -> Result<Graph, CliError> {
        match &self.graph {
            Some(path) => Ok(load_graph(path)?),
            None => {
                if self.model.model.is_none() {
                    return Err(CliError::Usage("give either --graph <file> or --model with --n".into()));
                }
                let model = self.model.model()?;
                let n = self.n.ok_or_else(|| CliError::Usage("--n is required with --model".into()))?;
                Ok(GraphParams::new(model, n, self.seed).generate()?)
            }
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Leave the timestamp out of output headers.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    source: GraphSource,
    /// File stem for the outputs; defaults to `<model>_n<N>_s<seed>`.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CircuitFormat {
    Json,
    Qasm,
    Both,
}

#[derive(Args, Debug)]
struct CompileArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Walk steps.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Skip the basis lowering (no QASM, no basis depth).
    #[arg(long)]
    no_decompose: bool,
    /// Circuit files to write: logical JSON gate list, basis QASM, or both.
    #[arg(long, value_enum, default_value_t = CircuitFormat::Both)]
    format: CircuitFormat,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Walk steps.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Number of measurement shots.
    #[arg(long)]
    shots: Option<u64>,
    /// Per-gate depolarizing probability for noisy shots.
    #[arg(long, requires = "shots")]
    epsilon: Option<f64>,
    /// Seed of the measurement sampler (default: --seed).
    #[arg(long)]
    sample_seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Compare steps 1..=t-max.
    #[arg(long, default_value_t = 4)]
    t_max: usize,
    /// Also sample this many shots per step.
    #[arg(long)]
    shots: Option<u64>,
    /// Seed of the measurement sampler (default: --seed).
    #[arg(long)]
    sample_seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Sweep {
    N,
    T,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Sweep node count (`n`) or step count (`t`).
    #[arg(long, value_enum, default_value_t = Sweep::N)]
    vary: Sweep,
    /// Node counts of an `n` sweep.
    #[arg(long, value_delimiter = ',', default_value = "8,16,24,32,48,64")]
    n_values: Vec<usize>,
    /// Step count of an `n` sweep.
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Node count of a `t` sweep.
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Step counts of a `t` sweep.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,6,8")]
    t_values: Vec<usize>,
    /// Random instances per point; instance s uses seed `--seed + s`.
    #[arg(long, default_value_t = 3)]
    seeds: usize,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Comment lines put at the top of text outputs.
struct Provenance {
    lines: Vec<String>,
}

impl Provenance {
    fn new(argv: &[String], output: &OutputArgs) -> Self {
        let mut lines = vec![
            format!("qwalknet {}", env!("CARGO_PKG_VERSION")),
            format!("command: qwalknet {}", argv.join(" ")),
        ];
        if !output.no_timestamp {
            lines.push(format!(
                "generated: {}",
                chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
            ));
        }
        Self { lines }
    }

    fn hash_prefixed(&self, body: &str) -> String {
        let mut out: String = self.lines.iter().map(|l| format!("# {l}\n")).collect();
        out.push_str(body);
        out
    }

    /// SVG with the provenance in a `<desc>` element right after the root tag.
    fn svg(&self, svg: &str) -> String {
        let (first, rest) = svg.split_once('\n').unwrap_or((svg, ""));
        let desc = self.lines.join("\n").replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        format!("{first}\n<desc>\n{desc}\n</desc>\n{rest}")
    }
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn degree_summary(g: &Graph) -> String {
    let d = g.degrees();
    let min = d.iter().min().copied().unwrap_or(0);
    let max = d.iter().max().copied().unwrap_or(0);
    let mean = d.iter().sum::<usize>() as f64 / d.len().max(1) as f64;
    format!("degree min {min} mean {mean:.3} max {max}")
}

fn cmd_generate(args: &GenerateArgs, _prov: &Provenance) -> Result<(), CliError> {
    if args.source.graph.is_some() {
        return Err(CliError::Usage("generate takes --model, not --graph".into()));
    }
    let g = args.source.load()?;
    let model = args.source.model.model()?;
    let stem = args.name.clone().unwrap_or_else(|| format!("{}_n{}_s{}", model.name(), g.n_nodes(), args.source.seed));
    prepare_dir(&args.output.out)?;
    let txt = args.output.out.join(format!("{stem}.txt"));
    let json = args.output.out.join(format!("{stem}.json"));
    write_file(&txt, &g.to_edge_list())?;
    write_file(&json, &g.to_json())?;
    println!("{model} N={} |E|={} {}", g.n_nodes(), g.n_edges(), degree_summary(&g));
    println!("wrote {} and {}", txt.display(), json.display());
    Ok(())
}

#[derive(Serialize)]
struct CompileReport<'a> {
    provenance: &'a [String],
    graph_hash: String,
    n_nodes: usize,
    n_edges: usize,
    t: usize,
    width: usize,
    depth_logical: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth_basis: Option<usize>,
    counts: std::collections::BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_counts: Option<std::collections::BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_gate_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cx_count: Option<usize>,
}

fn cmd_compile(args: &CompileArgs, prov: &Provenance) -> Result<(), CliError> {
    let g = args.source.load()?;
    let circuit = build_walk_circuit(&g, args.t);
    prepare_dir(&args.output.out)?;
    let out = &args.output.out;

    let mut report = CompileReport {
        provenance: &prov.lines,
        graph_hash: g.content_hash(),
        n_nodes: g.n_nodes(),
        n_edges: g.n_edges(),
        t: args.t,
        width: circuit.n_qubits,
        depth_logical: depth_of(circuit.n_qubits, &circuit.gates),
        depth_basis: None,
        counts: Default::default(),
        basis_counts: None,
        basis_gate_count: None,
        cx_count: None,
    };
    for gate in &circuit.gates {
        *report.counts.entry(gate.kind()).or_default() += 1;
    }
    if !args.no_decompose {
        let r = resource_report(&circuit);
        report.depth_basis = Some(r.depth_basis);
        report.basis_counts = Some(r.basis_counts);
        report.basis_gate_count = Some(r.basis_gate_count);
        report.cx_count = Some(r.cx_count);
    }

    if args.format != CircuitFormat::Qasm {
        write_file(&out.join("circuit.json"), &circuit_to_json(&circuit))?;
    }
    if args.format != CircuitFormat::Json && !args.no_decompose {
        let path = out.join("circuit.qasm");
        let io_err = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
        let file = fs::File::create(&path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        write_lowered_qasm(&circuit, &prov.lines, &mut w).map_err(io_err)?;
        w.flush().map_err(io_err)?;
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&out.join("report.json"), &json)?;

    println!("N={} |E|={} t={} width={}", g.n_nodes(), g.n_edges(), args.t, report.width);
    println!("logical: {} gates, depth {}", circuit.len(), report.depth_logical);
    if let (Some(d), Some(n), Some(cx)) = (report.depth_basis, report.basis_gate_count, report.cx_count) {
        println!("basis:   {n} gates, depth {d}, cx {cx}");
    }
    Ok(())
}

fn cmd_run(args: &RunArgs, prov: &Provenance) -> Result<(), CliError> {
    let g = args.source.load()?;
    let circuit = build_walk_circuit(&g, args.t);
    let seed = args.sample_seed.unwrap_or(args.source.seed);
    let noise = args.epsilon.map(NoiseModel::new).transpose().map_err(|e| CliError::Usage(e.to_string()))?;
    if args.shots == Some(0) {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let result = sim::simulate(&circuit)?;
    prepare_dir(&args.output.out)?;
    let out = &args.output.out;

    let mut probs = String::from("node,probability\n");
    for (i, p) in result.node_probs.iter().enumerate() {
        probs.push_str(&format!("{i},{p:.17e}\n"));
    }
    probs.push_str(&format!("invalid,{:.17e}\n", result.invalid_mass()));
    write_file(&out.join("probs.csv"), &prov.hash_prefixed(&probs))?;
    write_file(&out.join("state.csv"), &prov.hash_prefixed(&result.final_state.to_csv()))?;

    println!("N={} t={} width={} invalid mass {:.3e}", g.n_nodes(), args.t, circuit.n_qubits, result.invalid_mass());
    for (i, p) in result.node_probs.iter().enumerate() {
        println!("  node {i:>3}  {p:.10}");
    }
    if let Some(shots) = args.shots {
        let counts = match noise {
            Some(noise) => sim::simulate_noisy(&decompose_to_basis(&circuit), noise, shots, seed)?,
            None => sim::sample(&result, shots, seed)?,
        };
        write_file(&out.join("counts.csv"), &prov.hash_prefixed(&counts.to_csv()))?;
        write_file(&out.join("counts.json"), &counts.to_json())?;
        let mut with_invalid = result.node_probs.clone();
        with_invalid.push(result.invalid_mass());
        let l1 = crate::analysis::l1_distance(&with_invalid, &counts.distribution())
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        println!("{} shots ({} invalid), L1 to exact {l1:.6}", counts.shots(), counts.invalid);
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs, prov: &Provenance) -> Result<(), CliError> {
    let g = args.source.load()?;
    let seed = args.sample_seed.unwrap_or(args.source.seed);
    let cmp = compare_circuit_vs_oracle(&g, args.t_max, args.shots.map(|s| (s, seed)))?;
    prepare_dir(&args.output.out)?;
    let out = &args.output.out;
    write_file(&out.join("comparison.csv"), &prov.hash_prefixed(&cmp.to_csv()?))?;

    let mut l1 = String::from(if cmp.l1_sampled.is_empty() { "t,l1_circuit\n" } else { "t,l1_circuit,l1_sampled\n" });
    for (k, (t, d)) in cmp.l1.iter().enumerate() {
        match cmp.l1_sampled.get(k) {
            Some((_, s)) => l1.push_str(&format!("{t},{d:e},{s:e}\n")),
            None => l1.push_str(&format!("{t},{d:e}\n")),
        }
        let rows = cmp.rows_at(*t);
        let mut series = vec![
            Series::new("exact", rows.iter().map(|r| r.p_exact).collect()),
            Series::new("circuit", rows.iter().map(|r| r.p_circuit).collect()),
        ];
        if rows.iter().all(|r| r.p_sampled.is_some()) {
            series.push(Series::new("sampled", rows.iter().map(|r| r.p_sampled.unwrap_or(0.0)).collect()));
        }
        let svg = histogram_svg(&format!("node distribution, N={}, t={t}", g.n_nodes()), &series)?;
        write_file(&out.join(format!("histogram_t{t}.svg")), &prov.svg(&svg))?;
    }
    write_file(&out.join("l1.csv"), &prov.hash_prefixed(&l1))?;

    println!("N={} |E|={}", g.n_nodes(), g.n_edges());
    for (k, (t, d)) in cmp.l1.iter().enumerate() {
        match cmp.l1_sampled.get(k) {
            Some((_, s)) => println!("t={t}  L1(circuit, exact) = {d:.3e}  L1(sampled, exact) = {s:.5}"),
            None => println!("t={t}  L1(circuit, exact) = {d:.3e}"),
        }
    }
    Ok(())
}

/// Published fits, printed next to ours: `(prefactor, exponent)` as text.
fn reference_fit(model: &Model, sweep: Sweep) -> (&'static str, &'static str) {
    match (model, sweep) {
        (Model::Er { .. }, Sweep::N) => ("38(12)", "1.91(7)"),
        (Model::Ws { .. }, Sweep::N) => ("41(8)", "1.86(4)"),
        (Model::Ba { .. }, Sweep::N) => ("38(12)", "1.90(7)"),
        (Model::Er { .. }, Sweep::T) => ("8969(669)", "0.86(1)"),
        (Model::Ws { .. }, Sweep::T) | (Model::Ba { .. }, Sweep::T) => ("8841(743)", "0.88(2)"),
    }
}

fn cmd_scaling(args: &ScalingArgs, prov: &Provenance) -> Result<(), CliError> {
    let model = args.model.model()?;
    if args.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let run: ScalingRun = match args.vary {
        Sweep::N => run_n_scaling(model, &args.n_values, args.t, args.seeds, args.seed, args.jobs)?,
        Sweep::T => run_t_scaling(model, args.n, &args.t_values, args.seeds, args.seed, args.jobs)?,
    };
    prepare_dir(&args.output.out)?;
    let out = &args.output.out;
    let tag = match args.vary {
        Sweep::N => "n",
        Sweep::T => "t",
    };
    write_file(
        &out.join(format!("scaling_{}_{tag}.csv", model.name())),
        &prov.hash_prefixed(&run.records_csv()?),
    )?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(run.summary_row()).map_err(|e| CliError::Runtime(e.to_string()))?;
    let summary = String::from_utf8(w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?)
        .expect("csv is utf-8");
    write_file(&out.join(format!("fit_{}_{tag}.csv", model.name())), &prov.hash_prefixed(&summary))?;

    let var = if args.vary == Sweep::N { "N" } else { "t" };
    println!("{model}, depth vs {var}");
    for p in &run.points {
        println!("  {var}={:<4} depth {:>14.1} +- {:<12.1} ({} instances)", p.x, p.mean_depth, p.std_depth, p.samples);
    }
    let f = &run.fit;
    println!(
        "fit: D = {:.2}({:.2}) {var}^{:.4}({:.4})  r2 = {:.5}",
        f.a, f.stderr_a, f.b, f.stderr_b, f.r_squared
    );
    let (pa, pb) = reference_fit(&model, args.vary);
    println!("published: D = {pa} {var}^{pb} (vendor-optimized circuits; prefactors are not comparable)");
    if !run.failures.is_empty() {
        println!("{} instance(s) excluded after generation failures", run.failures.len());
    }
    Ok(())
}

/// Only `scaling` fans out; everything else runs on one worker.
fn single_threaded(f: impl FnOnce() -> Result<(), CliError> + Send) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    pool.install(f)
}

/// Parses `args` (program name first) and runs the subcommand; returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match &cli.command {
        Command::Scaling(a) => cmd_scaling(a, &Provenance::new(&argv, &a.output)),
        other => single_threaded(|| match other {
            Command::Generate(a) => cmd_generate(a, &Provenance::new(&argv, &a.output)),
            Command::Compile(a) => cmd_compile(a, &Provenance::new(&argv, &a.output)),
            Command::Run(a) => cmd_run(a, &Provenance::new(&argv, &a.output)),
            Command::Compare(a) => cmd_compare(a, &Provenance::new(&argv, &a.output)),
            Command::Scaling(_) => unreachable!(),
        }),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
