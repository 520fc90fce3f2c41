//! Teacher feedback and its conversion into zero-biased pseudo-losses over
//! the action set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::world::FeatureVector;

/// Loss assigned to non-teacher actions by action feedback.
pub const ACTION_LOSS: f64 = 100.0;
/// Loss per unsatisfied semantic channel.
pub const SEMANTIC_LOSS: f64 = 100.0;
/// Loss of every non-improved action under coactive feedback.
pub const COACTIVE_LOSS: f64 = 1.0;
/// Default dead zone (m) when extracting semantic signals.
pub const DEFAULT_SEMANTIC_EPSILON: f64 = 0.1;

/// Direction a semantic command pushes a channel.
///
/// `Prefer` asks for a smaller feature value (closer to the object, or
/// closer to the path); `Avoid` asks for a larger one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signal {
    Prefer,
    Avoid,
    #[default]
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SemanticSignals {
    #[serde(default)]
    pub doors: Signal,
    #[serde(default)]
    pub stairs: Signal,
    #[serde(default)]
    pub chairs: Signal,
    #[serde(default)]
    pub path: Signal,
}

impl SemanticSignals {
    /// `(signal, feature index)` per channel; the path channel reads cross-track error.
    pub fn channels(&self) -> [(Signal, usize); 4] {
        [
            (self.doors, FeatureVector::DOOR),
            (self.stairs, FeatureVector::STAIR),
            (self.chairs, FeatureVector::CHAIR),
            (self.path, FeatureVector::CROSS_TRACK),
        ]
    }

    pub fn is_neutral(&self) -> bool {
        self.channels().iter().all(|(s, _)| *s == Signal::Neutral)
    }
}

/// One piece of teacher feedback. Serialized as `{"kind": ..., ...payload}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Feedback {
    None,
    Action {
        teacher_index: usize,
    },
    Preference {
        preferred_index: usize,
        other_index: usize,
    },
    Semantic {
        #[serde(default)]
        doors: Signal,
        #[serde(default)]
        stairs: Signal,
        #[serde(default)]
        chairs: Signal,
        #[serde(default)]
        path: Signal,
    },
    Coactive {
        improved_index: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackKind {
    None,
    Action,
    Preference,
    Semantic,
    Coactive,
}

impl FeedbackKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeedbackKind::None => "none",
            FeedbackKind::Action => "action",
            FeedbackKind::Preference => "preference",
            FeedbackKind::Semantic => "semantic",
            FeedbackKind::Coactive => "coactive",
        }
    }
}

impl std::fmt::Display for FeedbackKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Feedback {
    pub fn semantic(signals: SemanticSignals) -> Self {
        Feedback::Semantic {
            doors: signals.doors,
            stairs: signals.stairs,
            chairs: signals.chairs,
            path: signals.path,
        }
    }

    pub fn kind(&self) -> FeedbackKind {
        match self {
            Feedback::None => FeedbackKind::None,
            Feedback::Action { .. } => FeedbackKind::Action,
            Feedback::Preference { .. } => FeedbackKind::Preference,
            Feedback::Semantic { .. } => FeedbackKind::Semantic,
            Feedback::Coactive { .. } => FeedbackKind::Coactive,
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Feedback::None)
    }

    /// Checks index ranges against an action set of size `k`.
    pub fn validate(&self, k: usize) -> Result<()> {
        let check = |name: &str, i: usize| {
            if i < k {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} {i} out of range for {k} actions")))
            }
        };
        match *self {
            Feedback::None => Ok(()),
            Feedback::Action { teacher_index } => check("teacher_index", teacher_index),
            Feedback::Coactive { improved_index } => check("improved_index", improved_index),
            Feedback::Preference {
                preferred_index,
                other_index,
            } => {
                check("preferred_index", preferred_index)?;
                check("other_index", other_index)?;
                if preferred_index == other_index {
                    return Err(Error::invalid("preference indices must differ"));
                }
                Ok(())
            }
            Feedback::Semantic {
                doors,
                stairs,
                chairs,
                path,
            } => {
                let s = SemanticSignals {
                    doors,
                    stairs,
                    chairs,
                    path,
                };
                if s.is_neutral() {
                    Err(Error::NoSemanticSignal)
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A non-negative loss over the action set whose minimum is exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoLoss {
    pub values: Vec<f64>,
    /// Lowest index attaining the minimum.
    pub best_index: usize,
}

impl PseudoLoss {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Shifts `raw` so that its minimum becomes zero.
pub fn zero_bias(raw: &[f64]) -> Result<PseudoLoss> {
    if raw.is_empty() {
        return Err(Error::invalid("pseudo-loss needs at least one action"));
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("pseudo-loss values must be finite"));
    }
    let mut best_index = 0;
    for (i, &v) in raw.iter().enumerate() {
        if v < raw[best_index] {
            best_index = i;
        }
    }
    let min = raw[best_index];
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, &v)| if i == best_index { 0.0 } else { (v - min).max(0.0) })
        .collect();
    Ok(PseudoLoss { values, best_index })
}

fn one_hot_loss(best: usize, k: usize, scale: f64, name: &str) -> Result<PseudoLoss> {
    if best >= k {
        return Err(Error::invalid(format!("{name} {best} out of range for {k} actions")));
    }
    let raw: Vec<f64> = (0..k).map(|i| if i == best { 0.0 } else { scale }).collect();
    zero_bias(&raw)
}

/// Teacher's action costs 0, every other action [`ACTION_LOSS`].
pub fn action_pseudo_loss(teacher_index: usize, k: usize) -> Result<PseudoLoss> {
    one_hot_loss(teacher_index, k, ACTION_LOSS, "teacher_index")
}

/// 0-1 loss around the improved action.
pub fn coactive_pseudo_loss(improved_index: usize, k: usize) -> Result<PseudoLoss> {
    one_hot_loss(improved_index, k, COACTIVE_LOSS, "improved_index")
}

/// `||phi(a_p) - phi(a)|| - ||phi(a_np) - phi(a)||`, zero-biased.
pub fn preference_pseudo_loss(
    features_all: &[FeatureVector],
    preferred_index: usize,
    other_index: usize,
) -> Result<PseudoLoss> {
    Feedback::Preference {
        preferred_index,
        other_index,
    }
    .validate(features_all.len())?;
    let p = &features_all[preferred_index];
    let np = &features_all[other_index];
    let raw: Vec<f64> = features_all
        .iter()
        .map(|phi| p.distance(phi) - np.distance(phi))
        .collect();
    zero_bias(&raw)
}

/// Compares teacher and learner features channel by channel.
///
/// A channel fires when the values differ by more than `epsilon`: `Avoid`
/// when the teacher's value is larger, `Prefer` when it is smaller.
pub fn semantic_signals(
    features_all: &[FeatureVector],
    teacher_index: usize,
    learner_index: usize,
    epsilon: f64,
) -> Result<SemanticSignals> {
    let k = features_all.len();
    if teacher_index >= k || learner_index >= k {
        return Err(Error::invalid("semantic feedback index out of range"));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::invalid("semantic epsilon must be non-negative"));
    }
    let t = &features_all[teacher_index];
    let l = &features_all[learner_index];
    let signal = |idx: usize| {
        if t[idx] > l[idx] + epsilon {
            Signal::Avoid
        } else if t[idx] < l[idx] - epsilon {
            Signal::Prefer
        } else {
            Signal::Neutral
        }
    };
    let signals = SemanticSignals {
        doors: signal(FeatureVector::DOOR),
        stairs: signal(FeatureVector::STAIR),
        chairs: signal(FeatureVector::CHAIR),
        path: signal(FeatureVector::CROSS_TRACK),
    };
    if signals.is_neutral() {
        Err(Error::NoSemanticSignal)
    } else {
        Ok(signals)
    }
}

/// Sums per-channel losses: an action scores 0 on a channel when it moves
/// further than the learner's choice in the signalled direction, else `scale`.
pub fn semantic_pseudo_loss_from_signals(
    features_all: &[FeatureVector],
    signals: &SemanticSignals,
    learner_index: usize,
    scale: f64,
) -> Result<PseudoLoss> {
    if learner_index >= features_all.len() {
        return Err(Error::invalid("learner index out of range"));
    }
    if signals.is_neutral() {
        return Err(Error::NoSemanticSignal);
    }
    let learner = &features_all[learner_index];
    let raw: Vec<f64> = features_all
        .iter()
        .map(|phi| {
            signals
                .channels()
                .iter()
                .map(|&(signal, idx)| {
                    let satisfied = match signal {
                        Signal::Avoid => phi[idx] > learner[idx],
                        Signal::Prefer => phi[idx] < learner[idx],
                        Signal::Neutral => return 0.0,
                    };
                    if satisfied {
                        0.0
                    } else {
                        scale
                    }
                })
                .sum()
        })
        .collect();
    zero_bias(&raw)
}

pub fn semantic_pseudo_loss(
    features_all: &[FeatureVector],
    teacher_index: usize,
    learner_index: usize,
    epsilon: f64,
) -> Result<PseudoLoss> {
    let signals = semantic_signals(features_all, teacher_index, learner_index, epsilon)?;
    semantic_pseudo_loss_from_signals(features_all, &signals, learner_index, SEMANTIC_LOSS)
}

/// Scale constants for the one-hot and semantic losses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LossScales {
    pub action: f64,
    pub semantic: f64,
    pub coactive: f64,
}

impl Default for LossScales {
    fn default() -> Self {
        Self {
            action: ACTION_LOSS,
            semantic: SEMANTIC_LOSS,
            coactive: COACTIVE_LOSS,
        }
    }
}

impl LossScales {
    /// Converts any feedback into its pseudo-loss. `Feedback::None` yields `None`.
    pub fn pseudo_loss(
        &self,
        feedback: &Feedback,
        features_all: &[FeatureVector],
        learner_index: usize,
    ) -> Result<Option<PseudoLoss>> {
        let k = features_all.len();
        feedback.validate(k)?;
        let loss = match *feedback {
            Feedback::None => return Ok(None),
            Feedback::Action { teacher_index } => one_hot_loss(teacher_index, k, self.action, "teacher_index")?,
            Feedback::Coactive { improved_index } => {
                one_hot_loss(improved_index, k, self.coactive, "improved_index")?
            }
            Feedback::Preference {
                preferred_index,
                other_index,
            } => preference_pseudo_loss(features_all, preferred_index, other_index)?,
            Feedback::Semantic {
                doors,
                stairs,
                chairs,
                path,
            } => semantic_pseudo_loss_from_signals(
                features_all,
                &SemanticSignals {
                    doors,
                    stairs,
                    chairs,
                    path,
                },
                learner_index,
                self.semantic,
            )?,
        };
        Ok(Some(loss))
    }
}
