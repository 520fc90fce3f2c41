use serde::{Deserialize, Serialize};

use super::trial::TrialLog;

/// Summary curves and scalars of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Trailing moving average of the latent loss (shorter at the start).
    pub smoothed_latent: Vec<f64>,
    pub cumulative_corrections: Vec<usize>,
    /// Cumulative latent regret `R(t)`.
    pub cumulative_regret: Vec<f64>,
    /// `R(T) / R(T/4)`: about 2 for square-root growth, 4 for linear.
    pub regret_ratio: f64,
    /// Mean of the smoothed curve over the last tenth of the run (at least one window).
    pub final_latent: f64,
    pub total_corrections: usize,
}

pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    // summing each window directly keeps runs of exact zeros at exactly zero
    (0..values.len())
        .map(|i| {
            let lo = (i + 1).saturating_sub(window);
            values[lo..=i].iter().sum::<f64>() / (i + 1 - lo) as f64
        })
        .collect()
}

/// `R(T) / R(floor(T/4))`, defined as 1 when no regret was incurred.
pub fn regret_ratio(cumulative: &[f64]) -> f64 {
    let n = cumulative.len();
    if n == 0 {
        return 1.0;
    }
    let total = cumulative[n - 1];
    let quarter = n / 4;
    let early = if quarter == 0 { 0.0 } else { cumulative[quarter - 1] };
    if total == 0.0 {
        1.0
    } else if early == 0.0 {
        f64::INFINITY
    } else {
        total / early
    }
}

pub fn compute_metrics(log: &TrialLog, window: usize) -> Metrics {
    let latent: Vec<f64> = log.records.iter().map(|r| r.latent_loss).collect();
    let smoothed_latent = moving_average(&latent, window);
    let cumulative_regret = log.cumulative_regret();
    let cumulative_corrections = log.cumulative_corrections();
    let tail = (latent.len() / 10).max(window).min(latent.len()).max(1);
    let final_latent = if smoothed_latent.is_empty() {
        0.0
    } else {
        smoothed_latent[smoothed_latent.len() - tail..].iter().sum::<f64>() / tail as f64
    };
    Metrics {
        regret_ratio: regret_ratio(&cumulative_regret),
        total_corrections: cumulative_corrections.last().copied().unwrap_or(0),
        smoothed_latent,
        cumulative_corrections,
        cumulative_regret,
        final_latent,
    }
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
