use std::fmt::Write as _;
use std::path::Path;

use super::trial::TrialLog;
use crate::error::{Error, Result};
use crate::learner::Weights;

pub const TRIAL_CSV_HEADER: &str = "t,chosen_index,latent_loss,corrected,feedback_kind,pseudo_regret_increment,reset";

/// Serializes a trial as CSV: one row per step, booleans as 0/1.
pub fn trial_csv(log: &TrialLog) -> String {
    let mut out = String::with_capacity(64 * (log.records.len() + 1));
    out.push_str(TRIAL_CSV_HEADER);
    out.push('\n');
    for r in &log.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            r.chosen_index,
            r.latent_loss,
            r.corrected as u8,
            r.feedback_kind,
            r.pseudo_regret_increment,
            r.reset as u8
        )
        .unwrap();
    }
    out
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn write_trial_csv(path: &Path, log: &TrialLog) -> Result<()> {
    write_file(path, trial_csv(log).as_bytes())
}

pub fn write_weights(path: &Path, w: &Weights) -> Result<()> {
    write_file(path, serde_json::to_string(w)?.as_bytes())
}

pub fn read_weights(path: &Path) -> Result<Weights> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_slice(&bytes)?)
}
