use serde::Serialize;

use super::AnalysisError;

/// `y = a x^b` fitted by ordinary least squares on `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    /// Delta-method error of `a = exp(intercept)`.
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.a * x.powf(self.b)
    }
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(AnalysisError::TooFewPoints(xs.len()));
    }
    if let Some(v) = xs.iter().chain(ys).find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(AnalysisError::NonPositive(*v));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::Degenerate("all x values are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let b = sxy / sxx;
    let intercept = my - b * mx;
    let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - b * x).powi(2)).sum();
    let s2 = ssr / (n - 2.0);
    let stderr_b = (s2 / sxx).sqrt();
    let stderr_intercept = (s2 * (1.0 / n + mx * mx / sxx)).sqrt();
    let a = intercept.exp();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ssr / syy).clamp(0.0, 1.0) };
    Ok(FitResult { a, b, stderr_a: a * stderr_intercept, stderr_b, r_squared, n_points: xs.len() })
}
