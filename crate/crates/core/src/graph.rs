//! Undirected simple graphs and the three random network models the walk is
//! studied on: Erdős–Rényi, Watts–Strogatz and Barabási–Albert.
//!
//! All generators are driven by a `ChaCha8Rng` seeded with `seed_from_u64`
//! (rand_chacha 0.3). Pinned regression values in the tests depend on that
//! exact stream; changing the PRNG means regenerating them.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Number of sub-seeds tried by [`generate_er`] before giving up on finding
/// a graph without isolated nodes.
pub const ER_MAX_RETRIES: u64 = 64;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: u64, reason: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Random network family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Er { p: f64 },
    Ws { k: usize, beta: f64 },
    Ba { m: usize },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Er { .. } => "er",
            Model::Ws { .. } => "ws",
            Model::Ba { .. } => "ba",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Er { p } => write!(f, "er(p={p})"),
            Model::Ws { k, beta } => write!(f, "ws(k={k},beta={beta})"),
            Model::Ba { m } => write!(f, "ba(m={m})"),
        }
    }
}

/// Full generation request: a model, a node count and a seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    #[serde(flatten)]
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl GraphParams {
    pub fn new(model: Model, n: usize, seed: u64) -> Self {
        Self { model, n, seed }
    }

    pub fn generate(&self) -> Result<Graph, GraphError> {
        match self.model {
            Model::Er { p } => generate_er(self.n, p, self.seed),
            Model::Ws { k, beta } => generate_ws(self.n, k, beta, self.seed),
            Model::Ba { m } => generate_ba(self.n, m, self.seed),
        }
    }
}

/// Undirected simple graph on nodes `0..n` with sorted neighbor lists.
///
/// Every node has degree at least one: the coin space of an isolated node
/// would be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges (in either orientation), out-of-range labels and isolated nodes.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::Invalid(format!("need at least 2 nodes, got {n}")));
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            check_edge(n, a, b).map_err(GraphError::Invalid)?;
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::Invalid(format!("duplicate edge {a}-{b}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Self::from_adjacency(adjacency)
    }

    fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        for nbrs in adjacency.iter_mut() {
            nbrs.sort_unstable();
        }
        if let Some(i) = adjacency.iter().position(Vec::is_empty) {
            return Err(GraphError::Invalid(format!("node {i} is isolated")));
        }
        Ok(Self { adjacency })
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbors of `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    /// Qubits per register, `ceil(log2 N)`.
    pub fn register_qubits(&self) -> usize {
        register_qubits(self.n_nodes())
    }

    /// True when every node has the same degree.
    pub fn is_regular(&self) -> bool {
        let k = self.degree(0);
        self.adjacency.iter().all(|nbrs| nbrs.len() == k)
    }

    /// Neighbor distribution of node `i` over a register of `2^n_qubits`
    /// basis states: `A_ij / k_i`.
    pub fn neighbor_distribution(&self, i: usize, n_qubits: usize) -> Vec<f64> {
        let mut dist = vec![0.0; 1 << n_qubits];
        let k = self.degree(i) as f64;
        for &j in self.neighbors(i) {
            dist[j] = 1.0 / k;
        }
        dist
    }

    /// Edge-list text form: `N <n>` followed by one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("N {}\n", self.n_nodes());
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, l)| (idx + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "empty file".into(),
        })?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["N", count] => count.parse::<usize>().map_err(|e| GraphError::Parse {
                line,
                msg: format!("bad node count: {e}"),
            })?,
            _ => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("expected header `N <n_nodes>`, got `{header}`"),
                })
            }
        };
        if n < 2 {
            return Err(GraphError::Parse { line, msg: format!("need at least 2 nodes, got {n}") });
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        for (line, l) in lines {
            let fields: Vec<_> = l.split_whitespace().collect();
            let [a, b] = fields.as_slice() else {
                return Err(GraphError::Parse { line, msg: format!("expected `i j`, got `{l}`") });
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| GraphError::Parse {
                    line,
                    msg: format!("bad node label `{s}`: {e}"),
                })
            };
            let (a, b) = (parse(a)?, parse(b)?);
            check_edge(n, a, b).map_err(|msg| GraphError::Parse { line, msg })?;
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::Parse { line, msg: format!("duplicate edge {a}-{b}") });
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Self::from_adjacency(adjacency)
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            n: self.n_nodes(),
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphJson = serde_json::from_str(text)?;
        let edges: Vec<_> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::from_edges(doc.n, &edges)
    }

    /// Short content hash of the canonical edge list.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.to_edge_list().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn check_edge(n: usize, a: usize, b: usize) -> Result<(), String> {
    if a == b {
        return Err(format!("self-loop on node {a}"));
    }
    if a >= n || b >= n {
        return Err(format!("edge {a}-{b} references a node outside 0..{n}"));
    }
    Ok(())
}

/// `ceil(log2 n)` for `n >= 2`.
pub fn register_qubits(n: usize) -> usize {
    assert!(n >= 2, "register needs at least two labels");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Loads a graph, choosing the JSON reader for `.json` files and the
/// edge-list reader otherwise.
pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        Graph::from_json(&text)
    } else {
        Graph::from_edge_list(&text)
    }
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let path = path.as_ref();
    let text = if path.extension().is_some_and(|e| e == "json") {
        g.to_json()
    } else {
        g.to_edge_list()
    };
    fs::write(path, text)?;
    Ok(())
}

fn check_probability(name: &str, p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Erdős–Rényi `G(n, p)`. Draws that leave a node isolated are discarded and
/// redrawn with the next sub-seed (`seed + 1`, `seed + 2`, ...).
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("ER needs n >= 2, got {n}")));
    }
    check_probability("p", p)?;
    for attempt in 0..ER_MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        if adjacency.iter().all(|a| !a.is_empty()) {
            return Graph::from_adjacency(adjacency);
        }
    }
    Err(GraphError::GenerationFailed {
        attempts: ER_MAX_RETRIES,
        reason: format!("every draw of G({n}, {p}) had an isolated node"),
    })
}

/// Watts–Strogatz small world: a ring lattice where each node links to its
/// `k/2` nearest neighbors per side, then each lattice edge `(i, i+d)` is
/// visited for `d = 1..=k/2`, `i = 0..n` and, with probability `beta`, its far
/// endpoint is moved to a uniformly chosen node that is neither `i` nor already
/// adjacent to `i`. Rewiring is skipped when no such node exists.
pub fn generate_ws(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph, GraphError> {
    if k < 2 || !k.is_multiple_of(2) || k >= n {
        return Err(GraphError::InvalidParameter(format!(
            "WS needs an even k with 2 <= k < n, got k={k}, n={n}"
        )));
    }
    check_probability("beta", beta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for d in 1..=k / 2 {
            let j = (i + d) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    for d in 1..=k / 2 {
        for i in 0..n {
            let j = (i + d) % n;
            if rng.gen::<f64>() >= beta {
                continue;
            }
            // the edge may already have been moved away by an earlier rewiring
            if !adj[i].contains(&j) || adj[i].len() >= n - 1 {
                continue;
            }
            let candidates: Vec<usize> = (0..n).filter(|&w| w != i && !adj[i].contains(&w)).collect();
            let &w = candidates.choose(&mut rng).expect("non-empty by degree check");
            adj[i].remove(&j);
            adj[j].remove(&i);
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    Graph::from_adjacency(adj.into_iter().map(|s| s.into_iter().collect()).collect())
        .map_err(|e| GraphError::GenerationFailed { attempts: 1, reason: e.to_string() })
}

/// Barabási–Albert preferential attachment grown from a star on `m + 1`
/// nodes (hub 0). Each arriving node links to `m` distinct existing nodes
/// drawn with probability proportional to degree; duplicate draws are redrawn.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    if m < 1 || m >= n {
        return Err(GraphError::InvalidParameter(format!(
            "BA needs 1 <= m < n, got m={m}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency = vec![Vec::new(); n];
    // one entry per edge endpoint, so a uniform pick is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * m * n);
    for leaf in 1..=m {
        adjacency[0].push(leaf);
        adjacency[leaf].push(0);
        endpoints.extend([0, leaf]);
    }
    for v in m + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(endpoints[rng.gen_range(0..endpoints.len())]);
        }
        for t in targets {
            adjacency[v].push(t);
            adjacency[t].push(v);
            endpoints.extend([v, t]);
        }
    }
    Graph::from_adjacency(adjacency)
}

/// Cycle `C_n`.
pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle is a valid graph")
}

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &edges).expect("complete graph is valid")
}

/// Path graph `P_n`.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges).expect("path is a valid graph")
}
