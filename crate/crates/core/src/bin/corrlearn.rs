use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use corrlearn::harness::{
    compute_metrics, run_sweep, summary_csv, write_file, write_trial_csv, write_weights, Experiment,
    ExperimentConfig, SweepAxis,
};

#[derive(Parser)]
#[command(name = "corrlearn", version, about = "Online learning from corrective feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured trial; writes trial_<i>.csv and weights_<i>.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one axis over its reference values; writes summary.csv.
    Sweep {
        #[arg(long, value_parser = ["channel", "sigma", "threshold"])]
        axis: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Behavior-cloning baseline; writes trial_0.csv and weights.json.
    Bc {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the live teaching protocol at ws://HOST:PORT/ws.
    Serve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

fn load(path: &PathBuf, out: Option<PathBuf>) -> anyhow::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_file(path)?;
    if let Some(out) = out {
        config.output = out;
    }
    Ok(config)
}

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    match Cli::parse().command {
        Command::Run { config, seed, out } => {
            let mut config = load(&config, out)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let dir = config.output.clone();
            let exp = Experiment::new(config)?;
            for (i, log) in exp.run_trials().into_iter().enumerate() {
                let log = log.with_context(|| format!("trial {i}"))?;
                write_trial_csv(&dir.join(format!("trial_{i}.csv")), &log)?;
                write_weights(&dir.join(format!("weights_{i}.json")), &log.final_weights)?;
                let m = compute_metrics(&log, exp.config.window);
                println!(
                    "trial {i}: final_latent {:.4} corrections {} resets {} regret_ratio {:.3}",
                    m.final_latent, m.total_corrections, log.reset_count, m.regret_ratio
                );
            }
            println!("wrote {}", dir.display());
        }
        Command::Sweep { axis, config, out } => {
            let config = load(&config, out)?;
            let rows = run_sweep(&config, &SweepAxis::standard(&axis)?)?;
            for r in &rows {
                println!(
                    "{}={:<11} final_latent {:.4} ± {:.4}  corrections {:.1} ± {:.1}  failed {}",
                    r.axis, r.value, r.final_latent_mean, r.final_latent_std, r.corrections_mean, r.corrections_std, r.failed
                );
                for e in &r.errors {
                    eprintln!("  {e}");
                }
            }
            let path = config.output.join("summary.csv");
            write_file(&path, summary_csv(&rows).as_bytes())?;
            println!("wrote {}", path.display());
        }
        Command::Bc { config, out } => {
            let config = load(&config, out)?;
            let dir = config.output.clone();
            let exp = Experiment::new(config)?;
            let log = exp.run_bc_baseline(exp.trial_seed(0))?;
            write_trial_csv(&dir.join("trial_0.csv"), &log)?;
            write_weights(&dir.join("weights.json"), &log.final_weights)?;
            let m = compute_metrics(&log, exp.config.window);
            println!(
                "bc: final_latent {:.4} updates {} weights {:?}",
                m.final_latent, log.update_count, log.final_weights.0
            );
            println!("wrote {}", dir.display());
        }
        Command::Serve { config, port, host } => {
            let config = load(&config, None)?;
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(corrlearn::service::serve(config, addr))?;
        }
    }
    Ok(())
}
