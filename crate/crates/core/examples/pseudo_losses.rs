//! Every kind of feedback becomes a pseudo-loss over the same candidate set.
//! Prints each pseudo-loss, the hinge surrogate at the current weights and
//! the weights after one gradient step.
//!
//! ```bash
//! cargo run --example pseudo_losses
//! ```

use corrlearn::feedback::{LossScales, SemanticSignals, Signal};
use corrlearn::learner::{hinge_eval, ogd_update, select_action, DEFAULT_ETA};
use corrlearn::{FeatureVector, Feedback, Weights};

fn main() -> anyhow::Result<()> {
    // [obstacle, door, stair, chair, cross_track, along_track, lateral]
    let features = vec![
        FeatureVector([6.0, 2.0, 24.0, 24.0, 1.5, 4.0, -0.4]),
        FeatureVector([7.0, 5.0, 24.0, 24.0, 0.5, 4.2, 0.0]),
        FeatureVector([8.0, 9.0, 24.0, 24.0, 2.5, 4.6, 0.4]),
        FeatureVector([5.0, 1.0, 24.0, 24.0, 3.0, 3.9, -0.8]),
    ];
    let w = Weights([0.0, 0.1, 0.0, 0.0, 0.0, 0.0, -0.5]);
    let all: Vec<usize> = (0..features.len()).collect();
    let chosen = select_action(&w, &features, &all)?;
    println!("learner picks action {chosen}\n");

    let stay_on_path = SemanticSignals {
        path: Signal::Prefer,
        ..Default::default()
    };
    let cases = [
        ("none", Feedback::None),
        ("action 2", Feedback::Action { teacher_index: 2 }),
        ("coactive 1", Feedback::Coactive { improved_index: 1 }),
        (
            "prefer 2 over 3",
            Feedback::Preference {
                preferred_index: 2,
                other_index: 3,
            },
        ),
        ("stay on path", Feedback::semantic(stay_on_path)),
    ];
    for (label, fb) in cases {
        let Some(pseudo) = LossScales::default().pseudo_loss(&fb, &features, chosen)? else {
            println!("{label:<16} no loss, weights untouched");
            continue;
        };
        let eval = hinge_eval(&w, &features, &pseudo)?;
        let next = ogd_update(&w, &eval.subgradient, DEFAULT_ETA)?;
        let values: Vec<String> = pseudo.values.iter().map(|v| format!("{v:.2}")).collect();
        println!(
            "{label:<16} pseudo-loss [{}] best {}  hinge {:.3}  next pick {}",
            values.join(", "),
            pseudo.best_index,
            eval.loss,
            select_action(&next, &features, &all)?
        );
        println!("{:<16} serialized {}", "", serde_json::to_string(&fb)?);
    }
    Ok(())
}
