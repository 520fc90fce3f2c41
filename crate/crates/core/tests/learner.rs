use corrlearn::feedback::{action_pseudo_loss, coactive_pseudo_loss, zero_bias};
use corrlearn::learner::{
    bc_fit, coactive_update, empirical_alpha, hinge_eval, ogd_update, select_action, Demonstration,
};
use corrlearn::world::FEATURE_DIM;
use corrlearn::{FeatureVector, Weights};
use proptest::prelude::*;

fn feature_set(max: usize) -> impl Strategy<Value = Vec<FeatureVector>> {
    prop::collection::vec(prop::array::uniform7(-5.0..5.0f64), 2..max)
        .prop_map(|v| v.into_iter().map(FeatureVector).collect())
}

fn weights() -> impl Strategy<Value = Weights> {
    prop::array::uniform7(-3.0..3.0f64).prop_map(Weights)
}

fn dot(w: &Weights, phi: &FeatureVector) -> f64 {
    (0..FEATURE_DIM).map(|i| w.0[i] * phi[i]).sum()
}

proptest! {
    #[test]
    fn selection_matches_an_exhaustive_scan(f in feature_set(40), w in weights(), mask in any::<u64>()) {
        let selectable: Vec<usize> = (0..f.len()).filter(|i| mask >> (i % 64) & 1 == 1).collect();
        prop_assume!(!selectable.is_empty());
        let chosen = select_action(&w, &f, &selectable).unwrap();
        prop_assert!(selectable.contains(&chosen));
        let best = selectable.iter().map(|&i| w.score(&f[i])).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(w.score(&f[chosen]), best);
        let first = selectable.iter().copied().find(|&i| w.score(&f[i]) == best).unwrap();
        prop_assert_eq!(chosen, first);
    }

    #[test]
    fn selection_ignores_positive_scaling_and_common_offsets(
        f in feature_set(30), w in weights(), lambda in 0.01..100.0f64, offset in prop::array::uniform7(-2.0..2.0f64),
    ) {
        let all: Vec<usize> = (0..f.len()).collect();
        let chosen = select_action(&w, &f, &all).unwrap();
        let scores: Vec<f64> = f.iter().map(|phi| dot(&w, phi)).collect();
        let top = scores[chosen];
        let margin = scores.iter().enumerate().filter(|&(i, _)| i != chosen)
            .map(|(_, s)| top - s).fold(f64::INFINITY, f64::min);
        prop_assume!(margin > 1e-6);
        prop_assert_eq!(select_action(&w.scaled(lambda), &f, &all).unwrap(), chosen);
        let shifted: Vec<FeatureVector> = f.iter()
            .map(|phi| FeatureVector(std::array::from_fn(|i| phi[i] + offset[i])))
            .collect();
        prop_assert_eq!(select_action(&w, &shifted, &all).unwrap(), chosen);
    }

    #[test]
    fn hinge_bounds_the_pseudo_loss_of_the_policy(f in feature_set(30), w in weights(), raw in prop::collection::vec(0.0..10.0f64, 30)) {
        let k = f.len();
        let pseudo = zero_bias(&raw[..k]).unwrap();
        let eval = hinge_eval(&w, &f, &pseudo).unwrap();
        let all: Vec<usize> = (0..k).collect();
        let chosen = select_action(&w, &f, &all).unwrap();
        prop_assert!(eval.loss >= -1e-9);
        prop_assert!(eval.loss + 1e-9 >= pseudo.values[chosen]);
        // oracle recomputation of the max term
        let oracle = (0..k).map(|i| pseudo.values[i] + dot(&w, &f[i])).fold(f64::NEG_INFINITY, f64::max)
            - dot(&w, &f[pseudo.best_index]);
        prop_assert!((eval.loss - oracle).abs() < 1e-9);
        for d in 0..FEATURE_DIM {
            prop_assert_eq!(eval.subgradient[d], f[eval.selected_index][d] - f[pseudo.best_index][d]);
        }
    }

    #[test]
    fn ogd_step_is_the_plain_algebra(w in weights(), g in prop::array::uniform7(-10.0..10.0f64), eta in 1e-4..1.0f64) {
        let next = ogd_update(&w, &g, eta).unwrap();
        for i in 0..FEATURE_DIM {
            prop_assert_eq!(next.0[i], w.0[i] - eta * g[i]);
        }
    }

    #[test]
    fn coactive_update_equals_a_unit_rate_hinge_step(f in feature_set(20), w in weights(), improved in 0usize..20) {
        let k = f.len();
        let improved = improved % k;
        let all: Vec<usize> = (0..k).collect();
        let chosen = select_action(&w, &f, &all).unwrap();
        prop_assume!(chosen != improved);
        let pseudo = coactive_pseudo_loss(improved, k).unwrap();
        let eval = hinge_eval(&w, &f, &pseudo).unwrap();
        prop_assume!(eval.selected_index == chosen);
        let via_ogd = ogd_update(&w, &eval.subgradient, 1.0).unwrap();
        prop_assert_eq!(coactive_update(&w, &f[improved], &f[chosen]), via_ogd);
    }

    #[test]
    fn bc_is_deterministic(seed_feats in prop::collection::vec(feature_set(10), 1..6), picks in prop::collection::vec(0usize..10, 6)) {
        let data: Vec<Demonstration> = seed_feats.into_iter().zip(picks)
            .map(|(features, p)| Demonstration { teacher_index: p % features.len(), features })
            .collect();
        prop_assert_eq!(bc_fit(&data, 5, 0.01).unwrap(), bc_fit(&data, 5, 0.01).unwrap());
    }
}

#[test]
fn bc_separates_a_separable_demonstration() {
    let f: Vec<FeatureVector> = (0..5)
        .map(|i| {
            let mut v = [0.0; FEATURE_DIM];
            v[0] = i as f64;
            v[1] = 1.0;
            FeatureVector(v)
        })
        .collect();
    let demo = Demonstration { features: f.clone(), teacher_index: 4 };
    let w = bc_fit(&[demo], 200, 1.0).unwrap();
    let all: Vec<usize> = (0..5).collect();
    assert_eq!(select_action(&w, &f, &all).unwrap(), 4);
    let eval = hinge_eval(&w, &f, &action_pseudo_loss(4, 5).unwrap()).unwrap();
    assert_eq!(eval.loss, 0.0);
    assert!(bc_fit(&[], 0, 0.1).is_err());
    assert_eq!(bc_fit(&[], 3, 0.1).unwrap(), Weights::zeros());
}

#[test]
fn alpha_is_the_worst_informative_ratio() {
    // half of the way to the best action on every step
    let gaps: Vec<(f64, f64)> = (1..20).map(|i| (0.5 * i as f64, i as f64)).collect();
    assert!((empirical_alpha(&gaps).unwrap() - 0.5).abs() < 1e-12);
    let mut mixed = gaps.clone();
    mixed.push((0.1, 1.0));
    mixed.push((-3.0, 0.0));
    assert!((empirical_alpha(&mixed).unwrap() - 0.1).abs() < 1e-12);
    assert!(empirical_alpha(&[(0.0, 0.0)]).is_err());
}

#[test]
fn weights_digest_tracks_every_bit() {
    let w = Weights([0.1, -0.2, 0.3, 0.0, 1.0, 2.0, -1.0]);
    let mut v = w;
    v.0[6] = f64::from_bits(v.0[6].to_bits() + 1);
    assert_eq!(w.digest(), w.digest());
    assert_ne!(w.digest(), v.digest());
    assert_eq!(w.digest().len(), 16);
}
