//! Linear argmax policy trained online through the generalized hinge loss.
//!
//! The policy picks `argmax_a w . phi(a)`. A pseudo-loss `delta` over the
//! actions is upper bounded by the convex surrogate
//!
//! ```text
//! loss(w) = max_i [delta_i + w . phi_i] - w . phi_best
//! ```
//!
//! where `best` is the pseudo-loss minimizer. A descent step along its
//! subgradient `phi_sel - phi_best` moves weight toward the best action and
//! away from the most violating one.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::feedback::{action_pseudo_loss, PseudoLoss};
use crate::world::{FeatureVector, FEATURE_DIM};

/// Default online gradient descent step size.
pub const DEFAULT_ETA: f64 = 0.01;

/// Linear policy weights. Serialized as a JSON array of 7 numbers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weights(pub [f64; FEATURE_DIM]);

impl Weights {
    pub fn zeros() -> Self {
        Self([0.0; FEATURE_DIM])
    }

    pub fn score(&self, phi: &FeatureVector) -> f64 {
        phi.dot(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.map(|v| v * factor))
    }

    /// Short hex digest of the exact bit pattern, for change detection.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for v in &self.0 {
            hasher.update(v.to_bits().to_le_bytes());
        }
        hasher.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Value of the hinge surrogate and its subgradient at some `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateEval {
    pub loss: f64,
    /// Maximizer inside the hinge (lowest index on ties).
    pub selected_index: usize,
    /// Minimizer of the pseudo-loss.
    pub best_index: usize,
    pub subgradient: [f64; FEATURE_DIM],
}

/// `argmax` of `w . phi` over `selectable`, lowest index on ties.
pub fn select_action(w: &Weights, features_all: &[FeatureVector], selectable: &[usize]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &i in selectable {
        let phi = features_all
            .get(i)
            .ok_or_else(|| Error::invalid(format!("selectable index {i} out of range")))?;
        let s = w.score(phi);
        match best {
            Some((bi, bs)) if s < bs || (s == bs && i > bi) => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
        .ok_or_else(|| Error::invalid("no selectable action"))
}

/// Evaluates the generalized hinge loss for `pseudo` at `w`.
pub fn hinge_eval(w: &Weights, features_all: &[FeatureVector], pseudo: &PseudoLoss) -> Result<SurrogateEval> {
    if features_all.len() != pseudo.len() || features_all.is_empty() {
        return Err(Error::invalid(format!(
            "pseudo-loss has {} entries for {} actions",
            pseudo.len(),
            features_all.len()
        )));
    }
    let best = pseudo.best_index;
    let best_score = w.score(&features_all[best]);
    let mut selected = 0;
    let mut top = f64::NEG_INFINITY;
    for (i, (phi, delta)) in features_all.iter().zip(&pseudo.values).enumerate() {
        let term = delta + w.score(phi);
        if term > top {
            top = term;
            selected = i;
        }
    }
    Ok(SurrogateEval {
        loss: top - best_score,
        selected_index: selected,
        best_index: best,
        subgradient: features_all[selected].sub(&features_all[best]),
    })
}

/// `w - eta * g`.
pub fn ogd_update(w: &Weights, g: &[f64; FEATURE_DIM], eta: f64) -> Result<Weights> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!("learning rate must be positive, got {eta}")));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("gradient has non-finite entries"));
    }
    Ok(Weights(std::array::from_fn(|i| w.0[i] - eta * g[i])))
}

/// Preference perceptron step `w + (phi_improved - phi_chosen)`; bit-identical to a
/// unit-rate gradient step on the 0/1 coactive pseudo-loss when the hinge picks `phi_chosen`.
pub fn coactive_update(w: &Weights, phi_improved: &FeatureVector, phi_chosen: &FeatureVector) -> Weights {
    Weights(std::array::from_fn(|i| w.0[i] + (phi_improved[i] - phi_chosen[i])))
}

/// An online update rule over the weight vector.
pub trait OnlineUpdate {
    fn apply(&self, w: &Weights, subgradient: &[f64; FEATURE_DIM]) -> Result<Weights>;
}

/// Online gradient descent with a constant step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientDescent {
    pub eta: f64,
}

impl Default for GradientDescent {
    fn default() -> Self {
        Self { eta: DEFAULT_ETA }
    }
}

impl OnlineUpdate for GradientDescent {
    fn apply(&self, w: &Weights, subgradient: &[f64; FEATURE_DIM]) -> Result<Weights> {
        ogd_update(w, subgradient, self.eta)
    }
}

/// One demonstration for behavior cloning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demonstration {
    pub features: Vec<FeatureVector>,
    pub teacher_index: usize,
}

/// Fits weights from zero by repeated hinge/OGD passes over action feedback.
pub fn bc_fit(dataset: &[Demonstration], epochs: usize, eta: f64) -> Result<Weights> {
    if epochs == 0 {
        return Err(Error::invalid("epochs must be >= 1"));
    }
    let rule = GradientDescent { eta };
    let mut w = Weights::zeros();
    for _ in 0..epochs {
        for demo in dataset {
            let pseudo = action_pseudo_loss(demo.teacher_index, demo.features.len())?;
            let eval = hinge_eval(&w, &demo.features, &pseudo)?;
            w = rule.apply(&w, &eval.subgradient)?;
        }
    }
    Ok(w)
}

/// Largest `alpha` consistent with the observed steps.
///
/// Each entry is `(gap_to_pseudo_best, gap_to_latent_best)` measured in latent
/// loss; entries with a non-positive latent gap carry no information and are
/// skipped.
pub fn empirical_alpha(latent_gaps: &[(f64, f64)]) -> Result<f64> {
    latent_gaps
        .iter()
        .filter(|(_, latent)| *latent > 0.0)
        .map(|(pseudo, latent)| pseudo / latent)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))))
        .ok_or(Error::UndefinedAlpha)
}
