use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::metrics::{compute_metrics, mean_std};
use super::trial::Experiment;
use crate::error::{Error, Result};
use crate::teacher::Channel;

/// Noise levels of the reference noise sweep.
pub const SIGMA_VALUES: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
/// Correction thresholds of the reference threshold sweep.
pub const THRESHOLD_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// One axis of a sweep with the values to visit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", content = "values", rename_all = "lowercase")]
pub enum SweepAxis {
    Channel(Vec<Channel>),
    Sigma(Vec<f64>),
    Threshold(Vec<f64>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Channel(_) => "channel",
            SweepAxis::Sigma(_) => "sigma",
            SweepAxis::Threshold(_) => "threshold",
        }
    }

    /// The axis with its reference values.
    pub fn standard(name: &str) -> Result<Self> {
        match name {
            "channel" => Ok(SweepAxis::Channel(vec![Channel::Action, Channel::Preference, Channel::Semantic])),
            "sigma" => Ok(SweepAxis::Sigma(SIGMA_VALUES.to_vec())),
            "threshold" => Ok(SweepAxis::Threshold(THRESHOLD_VALUES.to_vec())),
            other => Err(Error::invalid(format!("unknown sweep axis {other:?}"))),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepAxis::Channel(v) => v.len(),
            SweepAxis::Sigma(v) | SweepAxis::Threshold(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn label(&self, i: usize) -> String {
        match self {
            SweepAxis::Channel(v) => v[i].to_string(),
            SweepAxis::Sigma(v) | SweepAxis::Threshold(v) => v[i].to_string(),
        }
    }

    fn apply(&self, i: usize, base: &ExperimentConfig) -> ExperimentConfig {
        let mut cfg = base.clone();
        match self {
            SweepAxis::Channel(v) => cfg.teacher.channel = v[i],
            SweepAxis::Sigma(v) => cfg.teacher.sigma = v[i],
            SweepAxis::Threshold(v) => cfg.teacher.threshold = v[i],
        }
        cfg
    }
}

/// Aggregate of all trials at one axis value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: String,
    pub trials: usize,
    pub failed: usize,
    pub final_latent_mean: f64,
    pub final_latent_std: f64,
    pub corrections_mean: f64,
    pub corrections_std: f64,
    pub regret_ratio_mean: f64,
    pub errors: Vec<String>,
}

/// `(final_latent, corrections, regret_ratio)` of one trial, or its error.
type CellOutcome = std::result::Result<(f64, usize, f64), String>;

/// Runs `base.trials` trials per axis value. A failing cell is recorded in
/// its row and the rest of the sweep continues.
pub fn run_sweep(base: &ExperimentConfig, axis: &SweepAxis) -> Result<Vec<SweepRow>> {
    if axis.is_empty() {
        return Err(Error::invalid("sweep axis has no values"));
    }
    base.validate()?;
    let map = base.load_map()?;
    let experiments: Vec<Result<Experiment>> = (0..axis.len())
        .map(|i| Experiment::with_map(axis.apply(i, base), map.clone()))
        .collect();

    let cells: Vec<(usize, usize)> = (0..axis.len())
        .flat_map(|v| (0..base.trials).map(move |t| (v, t)))
        .collect();
    let results: Vec<((usize, usize), CellOutcome)> = cells
        .par_iter()
        .map(|&(v, t)| {
            let outcome = match &experiments[v] {
                Ok(exp) => exp
                    .run_trial(exp.trial_seed(t))
                    .map(|log| {
                        let m = compute_metrics(&log, base.window);
                        (m.final_latent, m.total_corrections, m.regret_ratio)
                    })
                    .map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            ((v, t), outcome)
        })
        .collect();

    let rows = (0..axis.len())
        .map(|v| {
            let mut finals = Vec::new();
            let mut corrections = Vec::new();
            let mut ratios = Vec::new();
            let mut errors = Vec::new();
            for ((cv, t), outcome) in &results {
                if *cv != v {
                    continue;
                }
                match outcome {
                    Ok((f, c, r)) => {
                        finals.push(*f);
                        corrections.push(*c as f64);
                        ratios.push(*r);
                    }
                    Err(e) => errors.push(format!("trial {t}: {e}")),
                }
            }
            let (final_latent_mean, final_latent_std) = mean_std(&finals);
            let (corrections_mean, corrections_std) = mean_std(&corrections);
            SweepRow {
                axis: axis.name().to_string(),
                value: axis.label(v),
                trials: base.trials,
                failed: errors.len(),
                final_latent_mean,
                final_latent_std,
                corrections_mean,
                corrections_std,
                regret_ratio_mean: mean_std(&ratios).0,
                errors,
            }
        })
        .collect();
    Ok(rows)
}

pub const SUMMARY_CSV_HEADER: &str =
    "axis,value,trials,failed,final_latent_mean,final_latent_std,corrections_mean,corrections_std,regret_ratio_mean";

pub fn summary_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.axis,
            r.value,
            r.trials,
            r.failed,
            r.final_latent_mean,
            r.final_latent_std,
            r.corrections_mean,
            r.corrections_std,
            r.regret_ratio_mean
        )
        .unwrap();
    }
    out
}
