//! Drives a live teaching session in process: a scripted teacher answers
//! each proposal, rotating between action, preference and semantic feedback,
//! then the export is replayed to reproduce the same weights.
//!
//! ```bash
//! cargo run --example teach_session -- [proposals]
//! ```

use corrlearn::feedback::semantic_signals;
use corrlearn::harness::ExperimentConfig;
use corrlearn::service::{replay, Mode, Proposal, TeachSession};
use corrlearn::{FeatureVector, Feedback, Teacher};

/// What a human might say about `p`, or nothing if it looks fine.
fn answer(teacher: &Teacher, p: &Proposal, turn: usize) -> anyhow::Result<Feedback> {
    let features: Vec<FeatureVector> = p.candidates.iter().map(|c| c.features).collect();
    let open: Vec<usize> = p.candidates.iter().filter(|c| !c.blocked).map(|c| c.index).collect();
    let latent = teacher.latent_eval(&features, &open)?;
    if latent.loss_of(p.chosen) <= teacher.threshold {
        return Ok(Feedback::None);
    }
    let best = latent.best_index;
    Ok(match turn % 3 {
        0 => Feedback::Action { teacher_index: best },
        1 => match p.alternative {
            Some(alt) if latent.loss_of(alt) < latent.loss_of(p.chosen) => Feedback::Preference {
                preferred_index: alt,
                other_index: p.chosen,
            },
            Some(alt) => Feedback::Preference {
                preferred_index: p.chosen,
                other_index: alt,
            },
            None => Feedback::None,
        },
        _ => match semantic_signals(&features, best, p.chosen, teacher.epsilon) {
            Ok(s) => Feedback::semantic(s),
            Err(_) => Feedback::Action { teacher_index: best },
        },
    })
}

fn main() -> anyhow::Result<()> {
    let proposals: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(300);
    let config = ExperimentConfig::default();
    let teacher = config.teacher;
    let mut session = TeachSession::start("demo", config.clone(), Mode::Stepper)?;

    let mut weights = Vec::new();
    for turn in 0..proposals {
        let p = session.propose()?;
        let fb = answer(&teacher, &p, turn)?;
        let ack = session.submit(p.proposal, fb)?;
        if ack.updated {
            println!("t={:<4} {:<10} hinge {:>8.3}  digest {}", ack.t, fb.kind(), ack.hinge_loss.unwrap_or(0.0), &ack.weights_digest[..12]);
        }
        weights.push(ack.weights);
    }

    let export = session.export();
    let replayed = replay(&config, &export.feedback)?;
    println!(
        "\n{} steps, {} updates; export has {} CSV lines; replay identical: {}",
        export.steps,
        session.update_count(),
        export.csv.lines().count(),
        replayed == weights
    );
    Ok(())
}
