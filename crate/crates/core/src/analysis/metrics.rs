use super::AnalysisError;

/// Slack allowed on each input's total before it is rejected.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// Total variation distance `(1/2) sum |p_x - q_x|`.
pub fn l1_distance(p: &[f64], q: &[f64]) -> Result<f64, AnalysisError> {
    if p.len() != q.len() {
        return Err(AnalysisError::LengthMismatch(p.len(), q.len()));
    }
    for (name, d) in [("p", p), ("q", q)] {
        let total: f64 = d.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(AnalysisError::NotADistribution(format!("{name} sums to {total}")));
        }
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
