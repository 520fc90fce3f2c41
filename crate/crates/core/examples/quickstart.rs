//! One online trial: the learner starts from zero weights on `houseC` and a
//! teacher who dislikes doors corrects it with a better action whenever the
//! learner's choice costs more than the threshold.
//!
//! ```bash
//! cargo run --release --example quickstart
//! ```

use corrlearn::harness::{compute_metrics, Experiment, ExperimentConfig};
use corrlearn::world::FeatureVector;
use corrlearn::Teacher;

fn main() -> anyhow::Result<()> {
    let config = ExperimentConfig {
        teacher: Teacher::avoid_doors(),
        steps: 5000,
        trials: 1,
        ..Default::default()
    };
    let exp = Experiment::new(config)?;
    let log = exp.run_trial(exp.trial_seed(0))?;
    let m = compute_metrics(&log, exp.config.window);

    println!("{:>6} {:>14} {:>12} {:>10}", "t", "smoothed_loss", "corrections", "regret");
    for t in (499..log.steps()).step_by(500) {
        println!(
            "{:>6} {:>14.3} {:>12} {:>10.1}",
            t + 1,
            m.smoothed_latent[t],
            m.cumulative_corrections[t],
            m.cumulative_regret[t]
        );
    }
    println!("\nupdates {}  resets {}  laps {}", log.update_count, log.reset_count, log.arrivals);
    println!("R(T)/R(T/4) = {:.2}", m.regret_ratio);
    println!("\nlearned weights (teacher's in brackets):");
    for (i, name) in FeatureVector::NAMES.iter().enumerate() {
        println!("  {name:<13} {:>8.3}  [{}]", log.final_weights.0[i], exp.config.teacher.w_star.0[i]);
    }
    Ok(())
}
