//! Learns the avoid-doors teacher on `houseC` from each feedback channel and
//! prints how the latent loss and the correction count evolve.
//!
//! ```bash
//! cargo run --release --example feedback_variety -- [steps] [trials]
//! ```

use corrlearn::harness::{compute_metrics, mean_std, Experiment, ExperimentConfig};
use corrlearn::{Channel, Teacher};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5000);
    let trials: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10);

    println!("channel     first10%_latent  last10%_latent  corrections(first/last 10%)  R(T)/R(T/4)");
    for channel in [Channel::Action, Channel::Preference, Channel::Semantic, Channel::Coactive] {
        let config = ExperimentConfig {
            map: "houseC".into(),
            teacher: Teacher::avoid_doors().with_channel(channel),
            steps,
            trials,
            ..Default::default()
        };
        let exp = Experiment::new(config)?;
        let tenth = steps / 10;
        let mut early = Vec::new();
        let mut late = Vec::new();
        let mut corr_early = Vec::new();
        let mut corr_late = Vec::new();
        let mut ratios = Vec::new();
        for log in exp.run_trials() {
            let log = log?;
            let m = compute_metrics(&log, exp.config.window);
            let latent: Vec<f64> = log.records.iter().map(|r| r.latent_loss).collect();
            early.push(latent[..tenth].iter().sum::<f64>() / tenth as f64);
            late.push(m.final_latent);
            corr_early.push(log.corrections_in(0..tenth) as f64);
            corr_late.push(log.corrections_in(steps - tenth..steps) as f64);
            ratios.push(m.regret_ratio);
        }
        println!(
            "{:<11} {:>15.3}  {:>14.3}  {:>14.1} / {:<12.1} {:>11.3}",
            channel.to_string(),
            mean_std(&early).0,
            mean_std(&late).0,
            mean_std(&corr_early).0,
            mean_std(&corr_late).0,
            mean_std(&ratios).0
        );
    }
    Ok(())
}
