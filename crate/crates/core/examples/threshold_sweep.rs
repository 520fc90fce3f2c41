//! Varies how bad an action must be before the teacher speaks up. A picky
//! teacher (low threshold) corrects often and ends with a lower loss; a
//! tolerant one corrects less and accepts more.
//!
//! ```bash
//! cargo run --release --example threshold_sweep -- [trials]
//! ```

use corrlearn::harness::{run_sweep, ExperimentConfig, SweepAxis};
use corrlearn::Teacher;

fn main() -> anyhow::Result<()> {
    let trials = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10);
    let config = ExperimentConfig {
        map: "houseB".into(),
        teacher: Teacher::avoid_stairs_and_chairs(),
        trials,
        ..Default::default()
    };
    let rows = run_sweep(&config, &SweepAxis::standard("threshold")?)?;
    println!("{:>9} {:>18} {:>14} {:>12}", "threshold", "final latent loss", "corrections", "R(T)/R(T/4)");
    for r in &rows {
        println!(
            "{:>9} {:>18.4} {:>14.1} {:>12.2}",
            r.value, r.final_latent_mean, r.corrections_mean, r.regret_ratio_mean
        );
    }
    Ok(())
}
