//! Programmatic teachers with a latent linear utility `w_star . phi`.
//!
//! A teacher measures the learner's latent loss, optionally corrupts it with
//! Gaussian noise, stays silent when the (noisy) loss is within its
//! threshold, and otherwise answers on one feedback channel.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feedback::{semantic_signals, Feedback, FeedbackKind, DEFAULT_SEMANTIC_EPSILON};
use crate::learner::Weights;
use crate::world::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Action,
    Preference,
    Semantic,
    Coactive,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::Action, Channel::Preference, Channel::Semantic, Channel::Coactive];

    pub fn kind(&self) -> FeedbackKind {
        match self {
            Channel::Action => FeedbackKind::Action,
            Channel::Preference => FeedbackKind::Preference,
            Channel::Semantic => FeedbackKind::Semantic,
            Channel::Coactive => FeedbackKind::Coactive,
        }
    }
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.kind().as_str())
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "action" => Ok(Channel::Action),
            "preference" => Ok(Channel::Preference),
            "semantic" => Ok(Channel::Semantic),
            "coactive" => Ok(Channel::Coactive),
            other => Err(Error::invalid(format!("unknown channel {other:?}"))),
        }
    }
}

/// Teacher block of an experiment config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Teacher {
    pub w_star: Weights,
    /// Latent loss at or below which the teacher stays silent.
    pub threshold: f64,
    /// Standard deviation of the noise added to every latent loss.
    pub sigma: f64,
    pub channel: Channel,
    #[serde(default)]
    pub seed: u64,
    /// Dead zone for semantic signal extraction (m).
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    DEFAULT_SEMANTIC_EPSILON
}

impl Teacher {
    pub fn new(w_star: Weights, threshold: f64, sigma: f64, channel: Channel) -> Result<Self> {
        let t = Self {
            w_star,
            threshold,
            sigma,
            channel,
            seed: 0,
            epsilon: DEFAULT_SEMANTIC_EPSILON,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.w_star.is_finite() {
            return Err(Error::Config("teacher w_star must be finite".into()));
        }
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(Error::Config(format!("teacher threshold must be >= 0, got {}", self.threshold)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!("teacher sigma must be >= 0, got {}", self.sigma)));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::Config("teacher epsilon must be >= 0".into()));
        }
        Ok(())
    }

    /// Wants to stay on the path and keep away from doors.
    pub fn avoid_doors() -> Self {
        Self::fixture([3.0, 6.0, 0.0, 0.0, -6.0, -3.0, 0.0])
    }

    /// Wants to stay on the path, keep away from stairs and drift right.
    pub fn avoid_stairs_stay_right() -> Self {
        Self::fixture([3.0, 0.0, 6.0, 0.0, -3.0, -3.0, 2.0])
    }

    /// Wants to stay on the path and keep away from stairs and chairs.
    pub fn avoid_stairs_and_chairs() -> Self {
        Self::fixture([3.0, 0.0, 6.0, 6.0, -3.0, -3.0, 0.0])
    }

    pub fn fixture_named(name: &str) -> Result<Self> {
        match name {
            "avoid_doors" => Ok(Self::avoid_doors()),
            "avoid_stairs_stay_right" => Ok(Self::avoid_stairs_stay_right()),
            "avoid_stairs_and_chairs" => Ok(Self::avoid_stairs_and_chairs()),
            other => Err(Error::invalid(format!("unknown teacher fixture {other:?}"))),
        }
    }

    fn fixture(w_star: [f64; 7]) -> Self {
        Self {
            w_star: Weights(w_star),
            threshold: 1.0,
            sigma: 0.0,
            channel: Channel::Action,
            seed: 0,
            epsilon: DEFAULT_SEMANTIC_EPSILON,
        }
    }

    pub fn with_channel(mut self, channel: Channel) -> Self {
        self.channel = channel;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn latent_eval(&self, features_all: &[FeatureVector], selectable: &[usize]) -> Result<LatentEval> {
        latent_eval(&self.w_star, features_all, selectable)
    }

    pub fn decide_correction<R: Rng + ?Sized>(
        &self,
        noisy: &LatentEval,
        learner_index: usize,
        features_all: &[FeatureVector],
        rng: &mut R,
    ) -> Result<Feedback> {
        decide_correction(self, noisy, learner_index, features_all, rng)
    }
}

/// The teacher's view of one state.
///
/// `utilities` and `losses` cover every action; the best action and the
/// noise only range over `candidates`, the collision-free actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentEval {
    pub candidates: Vec<usize>,
    pub utilities: Vec<f64>,
    /// `utility(best) - utility(a)`, possibly perturbed.
    pub losses: Vec<f64>,
    pub best_index: usize,
}

impl LatentEval {
    pub fn loss_of(&self, index: usize) -> f64 {
        self.losses[index]
    }

    pub fn is_candidate(&self, index: usize) -> bool {
        self.candidates.binary_search(&index).is_ok()
    }
}

/// Latent utilities and losses; the best action maximizes utility over
/// `selectable` (lowest index on ties).
pub fn latent_eval(w_star: &Weights, features_all: &[FeatureVector], selectable: &[usize]) -> Result<LatentEval> {
    if selectable.is_empty() {
        return Err(Error::invalid("no selectable action"));
    }
    let mut candidates = selectable.to_vec();
    candidates.sort_unstable();
    candidates.dedup();
    if candidates.last().is_some_and(|&i| i >= features_all.len()) {
        return Err(Error::invalid("selectable index out of range"));
    }
    let utilities: Vec<f64> = features_all.iter().map(|phi| w_star.score(phi)).collect();
    let mut best_index = candidates[0];
    for &i in &candidates {
        if utilities[i] > utilities[best_index] {
            best_index = i;
        }
    }
    let top = utilities[best_index];
    let losses = utilities.iter().map(|u| top - u).collect();
    Ok(LatentEval {
        candidates,
        utilities,
        losses,
        best_index,
    })
}

/// Adds independent `N(0, sigma^2)` noise to each candidate's latent loss and
/// re-picks the best as the noisy argmin. `sigma == 0` draws nothing and
/// returns the input unchanged.
pub fn perturb<R: Rng + ?Sized>(latent: &LatentEval, sigma: f64, rng: &mut R) -> Result<LatentEval> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(latent.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let mut out = latent.clone();
    for &i in &latent.candidates {
        out.losses[i] += normal.sample(rng);
    }
    let mut best = out.candidates[0];
    for &i in &out.candidates {
        if out.losses[i] < out.losses[best] {
            best = i;
        }
    }
    out.best_index = best;
    Ok(out)
}

/// Silence when the learner's (noisy) latent loss is within the threshold,
/// otherwise feedback on the teacher's channel.
///
/// Randomness is drawn only for preference queries (one uniform pick of the
/// alternative action).
pub fn decide_correction<R: Rng + ?Sized>(
    teacher: &Teacher,
    noisy: &LatentEval,
    learner_index: usize,
    features_all: &[FeatureVector],
    rng: &mut R,
) -> Result<Feedback> {
    if !noisy.is_candidate(learner_index) {
        return Err(Error::invalid(format!("learner action {learner_index} is not selectable")));
    }
    if noisy.loss_of(learner_index) <= teacher.threshold {
        return Ok(Feedback::None);
    }
    let best = noisy.best_index;
    let feedback = match teacher.channel {
        Channel::Action => Feedback::Action { teacher_index: best },
        Channel::Coactive => Feedback::Coactive { improved_index: best },
        Channel::Preference => {
            let others: Vec<usize> = noisy.candidates.iter().copied().filter(|&i| i != learner_index).collect();
            if others.is_empty() {
                return Ok(Feedback::None);
            }
            let alt = others[rng.random_range(0..others.len())];
            if noisy.loss_of(alt) < noisy.loss_of(learner_index) {
                Feedback::Preference {
                    preferred_index: alt,
                    other_index: learner_index,
                }
            } else {
                Feedback::Preference {
                    preferred_index: learner_index,
                    other_index: alt,
                }
            }
        }
        Channel::Semantic => match semantic_signals(features_all, best, learner_index, teacher.epsilon) {
            Ok(signals) => Feedback::semantic(signals),
            Err(Error::NoSemanticSignal) => Feedback::None,
            Err(e) => return Err(e),
        },
    };
    Ok(feedback)
}
