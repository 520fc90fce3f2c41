//! Action feedback with Gaussian noise on the teacher's latent loss. Noisier
//! teachers correct more often and settle at a worse policy.
//!
//! ```bash
//! cargo run --release --example noise_sweep -- [trials]
//! ```

use corrlearn::harness::{run_sweep, summary_csv, ExperimentConfig, SweepAxis};
use corrlearn::Teacher;

fn main() -> anyhow::Result<()> {
    let trials = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10);
    let config = ExperimentConfig {
        teacher: Teacher::avoid_doors(),
        trials,
        ..Default::default()
    };
    let rows = run_sweep(&config, &SweepAxis::standard("sigma")?)?;
    println!("{:>6} {:>20} {:>20}", "sigma", "final latent loss", "corrections");
    for r in &rows {
        println!(
            "{:>6} {:>11.3} ± {:<6.3} {:>11.1} ± {:<6.1}",
            r.value, r.final_latent_mean, r.final_latent_std, r.corrections_mean, r.corrections_std
        );
    }
    println!("\n{}", summary_csv(&rows));
    Ok(())
}
