//! With a 0/1 pseudo-loss that favours the teacher's improvement, one hinge
//! gradient step with unit learning rate is the preference perceptron update.
//!
//! ```bash
//! cargo run --example coactive_equivalence
//! ```

use corrlearn::feedback::coactive_pseudo_loss;
use corrlearn::learner::{coactive_update, hinge_eval, ogd_update, select_action};
use corrlearn::{FeatureVector, Weights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = 16;
    let mut worst = 0.0_f64;
    let mut checked = 0;
    for _ in 0..10_000 {
        let features: Vec<FeatureVector> = (0..k)
            .map(|_| FeatureVector(std::array::from_fn(|_| rng.random_range(-3.0..3.0))))
            .collect();
        let w = Weights(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
        let all: Vec<usize> = (0..k).collect();
        let chosen = select_action(&w, &features, &all)?;
        let improved = rng.random_range(0..k);
        if improved == chosen {
            continue;
        }
        let eval = hinge_eval(&w, &features, &coactive_pseudo_loss(improved, k)?)?;
        // the hinge's maximizer is the learner's own action
        if eval.selected_index != chosen {
            continue;
        }
        let via_hinge = ogd_update(&w, &eval.subgradient, 1.0)?;
        let perceptron = coactive_update(&w, &features[improved], &features[chosen]);
        for i in 0..w.0.len() {
            worst = worst.max((via_hinge.0[i] - perceptron.0[i]).abs());
        }
        checked += 1;
    }
    println!("{checked} random cases, largest coordinate difference {worst:e}");
    Ok(())
}
