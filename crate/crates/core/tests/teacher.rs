use corrlearn::feedback::LossScales;
use corrlearn::teacher::{latent_eval, perturb};
use corrlearn::world::FEATURE_DIM;
use corrlearn::{Channel, FeatureVector, Feedback, Teacher, Weights};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn feature_set(max: usize) -> impl Strategy<Value = Vec<FeatureVector>> {
    prop::collection::vec(prop::array::uniform7(-5.0..5.0f64), 2..max)
        .prop_map(|v| v.into_iter().map(FeatureVector).collect())
}

fn weights() -> impl Strategy<Value = Weights> {
    prop::array::uniform7(-3.0..3.0f64).prop_map(Weights)
}

fn channel() -> impl Strategy<Value = Channel> {
    prop::sample::select(Channel::ALL.to_vec())
}

proptest! {
    #[test]
    fn latent_eval_matches_an_exhaustive_oracle(f in feature_set(30), w in weights(), mask in any::<u32>()) {
        let selectable: Vec<usize> = (0..f.len()).filter(|i| mask >> (i % 32) & 1 == 1).collect();
        prop_assume!(!selectable.is_empty());
        let eval = latent_eval(&w, &f, &selectable).unwrap();
        let utility = |i: usize| (0..FEATURE_DIM).map(|d| w.0[d] * f[i][d]).sum::<f64>();
        let top = selectable.iter().map(|&i| utility(i)).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(selectable.contains(&eval.best_index));
        prop_assert!((utility(eval.best_index) - top).abs() < 1e-9);
        for &i in &selectable {
            prop_assert!(eval.losses[i] >= 0.0);
            prop_assert!((eval.losses[i] - (top - utility(i))).abs() < 1e-9);
        }
        prop_assert_eq!(eval.losses[eval.best_index], 0.0);
    }

    #[test]
    fn silent_exactly_within_the_threshold(
        f in feature_set(24), w in weights(), tau in 0.0..5.0f64, sigma in 0.0..1.0f64,
        ch in channel(), learner in 0usize..24, seed in any::<u64>(),
    ) {
        let learner = learner % f.len();
        let teacher = Teacher::new(w, tau, sigma, ch).unwrap();
        let all: Vec<usize> = (0..f.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noisy = perturb(&teacher.latent_eval(&f, &all).unwrap(), sigma, &mut rng).unwrap();
        let fb = teacher.decide_correction(&noisy, learner, &f, &mut rng).unwrap();
        let over = noisy.loss_of(learner) > tau;
        if !over {
            prop_assert_eq!(fb, Feedback::None);
        }
        match fb {
            Feedback::None => prop_assert!(!over || ch == Channel::Semantic),
            Feedback::Action { teacher_index } => {
                prop_assert_eq!(ch, Channel::Action);
                prop_assert_eq!(teacher_index, noisy.best_index);
            }
            Feedback::Coactive { improved_index } => {
                prop_assert_eq!(ch, Channel::Coactive);
                prop_assert_eq!(improved_index, noisy.best_index);
            }
            Feedback::Preference { preferred_index, other_index } => {
                prop_assert_eq!(ch, Channel::Preference);
                prop_assert!(preferred_index == learner || other_index == learner);
                prop_assert!(noisy.loss_of(preferred_index) <= noisy.loss_of(other_index));
            }
            Feedback::Semantic { .. } => prop_assert_eq!(ch, Channel::Semantic),
        }
        if fb != Feedback::None {
            // every emitted correction is a valid pseudo-loss whose minimizer is not worse than the learner
            let loss = LossScales::default().pseudo_loss(&fb, &f, learner).unwrap().unwrap();
            prop_assert_eq!(loss.len(), f.len());
            prop_assert!(loss.values[loss.best_index] <= loss.values[learner]);
        }
    }

    #[test]
    fn noiseless_teachers_are_faithful(f in feature_set(24), w in weights(), learner in 0usize..24) {
        let learner = learner % f.len();
        let teacher = Teacher::new(w, 0.0, 0.0, Channel::Action).unwrap();
        let all: Vec<usize> = (0..f.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let eval = teacher.latent_eval(&f, &all).unwrap();
        let noisy = perturb(&eval, 0.0, &mut rng).unwrap();
        prop_assert_eq!(&noisy, &eval);
        match teacher.decide_correction(&noisy, learner, &f, &mut rng).unwrap() {
            Feedback::None => prop_assert_eq!(eval.loss_of(learner), 0.0),
            Feedback::Action { teacher_index } => {
                prop_assert_eq!(teacher_index, eval.best_index);
                prop_assert!(eval.loss_of(learner) > 0.0);
            }
            other => prop_assert!(false, "unexpected {other:?}"),
        }
    }

    #[test]
    fn corrections_never_increase_with_the_threshold(
        states in prop::collection::vec((feature_set(16), 0usize..16), 20..40), w in weights(), seed in any::<u64>(),
    ) {
        let taus = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0];
        let counts: Vec<usize> = taus.iter().map(|&tau| {
            let teacher = Teacher::new(w, tau, 0.5, Channel::Action).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            states.iter().filter(|(f, l)| {
                let all: Vec<usize> = (0..f.len()).collect();
                let noisy = perturb(&teacher.latent_eval(f, &all).unwrap(), teacher.sigma, &mut rng).unwrap();
                !teacher.decide_correction(&noisy, l % f.len(), f, &mut rng).unwrap().is_none()
            }).count()
        }).collect();
        prop_assert!(counts.windows(2).all(|c| c[0] >= c[1]), "{counts:?}");
    }
}

#[test]
fn perturbation_has_the_configured_spread() {
    let f: Vec<FeatureVector> = (0..4).map(|i| FeatureVector([i as f64; FEATURE_DIM])).collect();
    let eval = latent_eval(&Weights([1.0; FEATURE_DIM]), &f, &[0, 1, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 10_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| {
            let noisy = perturb(&eval, 1.0, &mut rng).unwrap();
            // non-candidates are left alone
            assert_eq!(noisy.losses[3], eval.losses[3]);
            noisy.losses[1] - eval.losses[1]
        })
        .collect();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let std = (draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    assert!(mean.abs() < 0.03, "mean {mean}");
    assert!((0.97..=1.03).contains(&std), "std {std}");
    assert!(perturb(&eval, -1.0, &mut rng).is_err());
    assert!(perturb(&eval, f64::NAN, &mut rng).is_err());
}

#[test]
fn teacher_configuration_is_validated() {
    let w = Weights::zeros();
    assert!(Teacher::new(w, -0.1, 0.0, Channel::Action).is_err());
    assert!(Teacher::new(w, 0.0, -1.0, Channel::Action).is_err());
    assert!(Teacher::new(Weights([f64::INFINITY; FEATURE_DIM]), 0.0, 0.0, Channel::Action).is_err());
    for name in ["avoid_doors", "avoid_stairs_stay_right", "avoid_stairs_and_chairs"] {
        let t = Teacher::fixture_named(name).unwrap();
        assert!(t.validate().is_ok());
        assert!(t.w_star.0[FeatureVector::OBSTACLE] > 0.0 && t.w_star.0[FeatureVector::CROSS_TRACK] < 0.0);
    }
    assert!(Teacher::fixture_named("nobody").is_err());
    for ch in Channel::ALL {
        assert_eq!(ch.to_string().parse::<Channel>().unwrap(), ch);
    }
    let f = vec![FeatureVector([0.0; FEATURE_DIM]); 3];
    let t = Teacher::new(w, 0.0, 0.0, Channel::Action).unwrap();
    let eval = t.latent_eval(&f, &[0, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(t.decide_correction(&eval, 1, &f, &mut rng).is_err(), "learner outside the candidates");
    assert!(t.latent_eval(&f, &[]).is_err());
    assert!(t.latent_eval(&f, &[3]).is_err());
}
