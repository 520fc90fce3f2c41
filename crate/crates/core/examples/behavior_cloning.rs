//! Behavior cloning from 50 teacher demonstrations, then a frozen rollout,
//! next to the online learner given the same budget of steps.
//!
//! ```bash
//! cargo run --release --example behavior_cloning
//! ```

use corrlearn::harness::{compute_metrics, Experiment, ExperimentConfig};
use corrlearn::learner::bc_fit;

fn main() -> anyhow::Result<()> {
    let exp = Experiment::new(ExperimentConfig::default())?;
    let seed = exp.trial_seed(0);

    let demos = exp.collect_demonstrations(exp.config.bc_samples)?;
    let w = bc_fit(&demos, exp.config.bc_epochs, exp.config.eta)?;
    println!("fitted on {} demonstrations: {:?}", demos.len(), w.0);

    let bc = exp.evaluate_frozen(w, seed)?;
    let online = exp.run_trial(seed)?;
    let mb = compute_metrics(&bc, exp.config.window);
    let mo = compute_metrics(&online, exp.config.window);

    println!("\n{:>6} {:>10} {:>10}", "t", "bc", "online");
    for t in (499..bc.steps()).step_by(500) {
        println!("{:>6} {:>10.3} {:>10.3}", t + 1, mb.smoothed_latent[t], mo.smoothed_latent[t]);
    }
    let digests: std::collections::HashSet<_> = bc.records.iter().map(|r| &r.weights_digest).collect();
    println!(
        "\nbc: {} updates, {} distinct weight digests; online: {} updates",
        bc.update_count,
        digests.len(),
        online.update_count
    );
    Ok(())
}
