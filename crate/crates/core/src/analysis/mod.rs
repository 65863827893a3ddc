//! Distribution metrics, power-law fits and the experiment harness.

mod fit;
mod harness;
mod metrics;
mod svg;

pub use fit::{fit_power_law, FitResult};
pub use harness::{
    compare_circuit_vs_oracle, run_n_scaling, run_t_scaling, Comparison, ComparisonRow, FitSummaryRow,
    ScalingFailure, ScalingRecord, ScalingRun, MAX_COMPARE_NODES, MAX_COMPARE_STEPS,
};
pub use metrics::l1_distance;
pub use svg::{emit_histogram_svg, histogram_svg, Series};

use crate::graph::GraphError;
use crate::oracle::OracleError;
use crate::sim::SimError;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("need at least 3 points for a fit, got {0}")]
    TooFewPoints(usize),
    #[error("power-law fit needs positive finite data, got {0}")]
    NonPositive(f64),
    #[error("degenerate fit: {0}")]
    Degenerate(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("nothing to plot: {0}")]
    EmptyPlot(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
