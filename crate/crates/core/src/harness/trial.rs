use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::feedback::{Feedback, FeedbackKind};
use crate::learner::{bc_fit, hinge_eval, select_action, Demonstration, GradientDescent, OnlineUpdate, Weights};
use crate::teacher::{perturb, Channel};
use crate::world::{
    features_all, mask_colliding, normalize_angle, step, ActionSpace, FeatureVector, Map, Pose, Trajectory, WorldState,
};

/// One step of a trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub chosen_index: usize,
    /// Noise-free latent loss of the chosen action.
    pub latent_loss: f64,
    pub corrected: bool,
    pub feedback_kind: FeedbackKind,
    /// Pseudo-loss of the chosen action on corrected steps, else 0.
    pub pseudo_regret_increment: f64,
    /// The pose was sent back to the start after this step.
    pub reset: bool,
    pub feedback: Feedback,
    /// Noise-free latent loss of the pseudo-loss minimizer, on corrected steps.
    pub pseudo_best_latent_loss: Option<f64>,
    pub hinge_loss: Option<f64>,
    /// Digest of the weights after this step's update.
    pub weights_digest: String,
}

/// Complete record of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLog {
    pub config_hash: String,
    pub trial_seed: u64,
    pub records: Vec<StepRecord>,
    pub initial_weights: Weights,
    pub final_weights: Weights,
    pub update_count: usize,
    pub reset_count: u64,
    pub arrivals: u64,
}

impl TrialLog {
    pub fn steps(&self) -> usize {
        self.records.len()
    }

    pub fn total_corrections(&self) -> usize {
        self.records.iter().filter(|r| r.corrected).count()
    }

    pub fn cumulative_corrections(&self) -> Vec<usize> {
        self.records
            .iter()
            .scan(0, |acc, r| {
                *acc += r.corrected as usize;
                Some(*acc)
            })
            .collect()
    }

    pub fn cumulative_regret(&self) -> Vec<f64> {
        self.records
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r.latent_loss;
                Some(*acc)
            })
            .collect()
    }

    pub fn corrections_in(&self, range: std::ops::Range<usize>) -> usize {
        self.records[range].iter().filter(|r| r.corrected).count()
    }

    /// `(gap_to_pseudo_best, gap_to_latent_best)` per corrected step.
    pub fn latent_gaps(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter_map(|r| {
                r.pseudo_best_latent_loss
                    .map(|best| (r.latent_loss - best, r.latent_loss))
            })
            .collect()
    }
}

/// Everything the learner and teacher see at one state.
pub struct Observation {
    pub trajectories: Vec<Trajectory>,
    pub features: Vec<FeatureVector>,
    pub selectable: Vec<usize>,
}

impl std::fmt::Debug for Observation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Observation")
            .field("actions", &self.trajectories.len())
            .field("selectable", &self.selectable.len())
            .finish()
    }
}

pub fn observe(map: &Map, state: &WorldState, space: &ActionSpace, clip: f64) -> Result<Observation> {
    let trajectories = space.generate(state.pose)?;
    let features = features_all(map, state, &trajectories, clip)?;
    let selectable = mask_colliding(map, &trajectories);
    Ok(Observation {
        trajectories,
        features,
        selectable,
    })
}

/// Keeps the start-pose draws independent of the teacher's noise stream.
const START_STREAM: u64 = 0x0053_5441_5254;

fn mix_seed(a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over the combined seeds
    let mut z = a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_add(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A validated config with its map loaded, ready to run trials.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub map: Map,
    config_hash: String,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let map = config.load_map()?;
        Self::with_map(config, map)
    }

    pub fn with_map(config: ExperimentConfig, map: Map) -> Result<Self> {
        config.validate()?;
        let start = WorldState::new(&map);
        let obs = observe(&map, &start, &config.action_space(), config.clip)?;
        if obs.selectable.is_empty() {
            return Err(Error::Config("every action collides at the start pose".into()));
        }
        let config_hash = config.hash();
        Ok(Self {
            config,
            map,
            config_hash,
        })
    }

    /// Seed of trial `i`.
    pub fn trial_seed(&self, i: usize) -> u64 {
        self.config.seed.wrapping_add(i as u64)
    }

    /// Start pose of the trial with `trial_seed`: the map's start, jittered
    /// per `config.start_jitter`. Draws that land in an occupied cell or with
    /// no collision-free action are redrawn; after 64 misses the unjittered
    /// start is used.
    pub fn trial_start(&self, trial_seed: u64) -> Pose {
        let base = self.map.start_pose();
        let j = self.config.start_jitter;
        if j.position == 0.0 && j.heading == 0.0 {
            return base;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(trial_seed, START_STREAM));
        let space = self.config.action_space();
        for _ in 0..64 {
            let pose = Pose::new(
                base.x + rng.random_range(-j.position..=j.position),
                base.y + rng.random_range(-j.position..=j.position),
                normalize_angle(base.heading + rng.random_range(-j.heading..=j.heading)),
            );
            if self.map.is_occupied(pose.point()) {
                continue;
            }
            let ok = space
                .generate(pose)
                .map(|trajs| !mask_colliding(&self.map, &trajs).is_empty())
                .unwrap_or(false);
            if ok {
                return pose;
            }
        }
        base
    }

    fn rng(&self, trial_seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix_seed(self.config.teacher.seed, trial_seed))
    }

    /// Runs the online correction loop for `config.steps` steps.
    ///
    /// Per step: observe, select, let the teacher judge the chosen action,
    /// and on a correction convert the feedback to a pseudo-loss and take one
    /// hinge/OGD step. The chosen action is then executed.
    pub fn run_trial(&self, trial_seed: u64) -> Result<TrialLog> {
        let cfg = &self.config;
        let space = cfg.action_space();
        let teacher = &cfg.teacher;
        let rule = GradientDescent { eta: cfg.eta };
        let mut rng = self.rng(trial_seed);
        let initial = cfg.init_weights.unwrap_or_default();
        let mut w = initial;
        let mut state = WorldState::starting_at(self.trial_start(trial_seed));
        let mut records = Vec::with_capacity(cfg.steps);
        let mut updates = 0;

        for t in 0..cfg.steps {
            let obs = observe(&self.map, &state, &space, cfg.clip)?;
            let chosen = select_action(&w, &obs.features, &obs.selectable)?;
            let clean = teacher.latent_eval(&obs.features, &obs.selectable)?;
            let noisy = perturb(&clean, teacher.sigma, &mut rng)?;
            let feedback = teacher.decide_correction(&noisy, chosen, &obs.features, &mut rng)?;

            let mut increment = 0.0;
            let mut pseudo_best_latent_loss = None;
            let mut hinge_loss = None;
            if let Some(pseudo) = cfg.scales.pseudo_loss(&feedback, &obs.features, chosen)? {
                let eval = hinge_eval(&w, &obs.features, &pseudo)?;
                w = rule.apply(&w, &eval.subgradient)?;
                if !w.is_finite() {
                    return Err(Error::invalid(format!("weights diverged at step {t}")));
                }
                updates += 1;
                increment = pseudo.values[chosen];
                pseudo_best_latent_loss = Some(clean.loss_of(pseudo.best_index));
                hinge_loss = Some(eval.loss);
            }

            let out = step(&self.map, &state, &obs.trajectories[chosen], &space);
            state = out.state;
            records.push(StepRecord {
                t,
                chosen_index: chosen,
                latent_loss: clean.loss_of(chosen),
                corrected: !feedback.is_none(),
                feedback_kind: feedback.kind(),
                pseudo_regret_increment: increment,
                reset: out.reset.is_some(),
                feedback,
                pseudo_best_latent_loss,
                hinge_loss,
                weights_digest: w.digest(),
            });
        }

        Ok(TrialLog {
            config_hash: self.config_hash.clone(),
            trial_seed,
            records,
            initial_weights: initial,
            final_weights: w,
            update_count: updates,
            reset_count: state.reset_count,
            arrivals: state.arrivals,
        })
    }

    /// Runs every configured trial in parallel; results are ordered by trial index.
    pub fn run_trials(&self) -> Vec<Result<TrialLog>> {
        (0..self.config.trials)
            .into_par_iter()
            .map(|i| self.run_trial(self.trial_seed(i)))
            .collect()
    }

    /// Demonstrations from rolling out the teacher's own (noise-free) policy.
    pub fn collect_demonstrations(&self, count: usize) -> Result<Vec<Demonstration>> {
        let space = self.config.action_space();
        let mut state = WorldState::new(&self.map);
        let mut demos = Vec::with_capacity(count);
        for _ in 0..count {
            let obs = observe(&self.map, &state, &space, self.config.clip)?;
            let best = self.config.teacher.latent_eval(&obs.features, &obs.selectable)?.best_index;
            state = step(&self.map, &state, &obs.trajectories[best], &space).state;
            demos.push(Demonstration {
                features: obs.features,
                teacher_index: best,
            });
        }
        Ok(demos)
    }

    /// Behavior cloning baseline: fit on `bc_samples` teacher demonstrations,
    /// then run `steps` steps with the weights frozen.
    pub fn run_bc_baseline(&self, trial_seed: u64) -> Result<TrialLog> {
        if self.config.teacher.channel != Channel::Action {
            return Err(Error::Config("behavior cloning needs the action channel".into()));
        }
        let demos = self.collect_demonstrations(self.config.bc_samples)?;
        let w = bc_fit(&demos, self.config.bc_epochs, self.config.eta)?;
        self.evaluate_frozen(w, trial_seed)
    }

    /// Rolls out fixed weights; no feedback is consumed and no update applied.
    pub fn evaluate_frozen(&self, w: Weights, trial_seed: u64) -> Result<TrialLog> {
        let cfg = &self.config;
        let space = cfg.action_space();
        let mut state = WorldState::starting_at(self.trial_start(trial_seed));
        let mut records = Vec::with_capacity(cfg.steps);
        let digest = w.digest();
        for t in 0..cfg.steps {
            let obs = observe(&self.map, &state, &space, cfg.clip)?;
            let chosen = select_action(&w, &obs.features, &obs.selectable)?;
            let clean = cfg.teacher.latent_eval(&obs.features, &obs.selectable)?;
            let out = step(&self.map, &state, &obs.trajectories[chosen], &space);
            state = out.state;
            records.push(StepRecord {
                t,
                chosen_index: chosen,
                latent_loss: clean.loss_of(chosen),
                corrected: false,
                feedback_kind: FeedbackKind::None,
                pseudo_regret_increment: 0.0,
                reset: out.reset.is_some(),
                feedback: Feedback::None,
                pseudo_best_latent_loss: None,
                hinge_loss: None,
                weights_digest: digest.clone(),
            });
        }
        Ok(TrialLog {
            config_hash: self.config_hash.clone(),
            trial_seed,
            records,
            initial_weights: w,
            final_weights: w,
            update_count: 0,
            reset_count: state.reset_count,
            arrivals: state.arrivals,
        })
    }
}

/// Loads the config's map and runs one trial.
pub fn run_trial(config: &ExperimentConfig, trial_seed: u64) -> Result<TrialLog> {
    Experiment::new(config.clone())?.run_trial(trial_seed)
}

pub fn run_bc_baseline(config: &ExperimentConfig) -> Result<TrialLog> {
    let exp = Experiment::new(config.clone())?;
    exp.run_bc_baseline(exp.trial_seed(0))
}
