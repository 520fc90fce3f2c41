use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::protocol::{Ack, Candidate, Export, Mode, Proposal, Welcome};
use crate::error::{Error, Result};
use crate::feedback::Feedback;
use crate::harness::{observe, trial_csv, Experiment, ExperimentConfig, Observation, StepRecord, TrialLog};
use crate::learner::{hinge_eval, ogd_update, select_action, Weights};
use crate::teacher::LatentEval;
use crate::world::{step, FeatureVector, WorldState};

/// Waypoints shown ahead of the robot, counted from the tracked segment's start.
const PATH_WINDOW_WAYPOINTS: usize = 4;

/// One live teaching session, independent of any transport.
///
/// The cycle is `propose` then `submit`; the proposed action executes once
/// feedback for it arrives, and the update only affects later proposals.
/// The configured teacher's `w_star` is used solely to fill the
/// `latent_loss` column of the log.
#[derive(Debug)]
pub struct TeachSession {
    id: String,
    mode: Mode,
    experiment: Experiment,
    state: WorldState,
    weights: Weights,
    initial_weights: Weights,
    obs: Observation,
    latent: LatentEval,
    chosen: usize,
    alternative: Option<usize>,
    pending: Option<u64>,
    next_proposal: u64,
    records: Vec<StepRecord>,
    feedback: Vec<Feedback>,
    updates: usize,
    rng: ChaCha8Rng,
}

impl TeachSession {
    pub fn start(id: impl Into<String>, config: ExperimentConfig, mode: Mode) -> Result<Self> {
        if let Mode::Timed { auto_advance_ms: 0 } = mode {
            return Err(Error::Config("auto_advance_ms must be positive".into()));
        }
        let experiment = Experiment::new(config)?;
        let weights = experiment.config.init_weights.unwrap_or_default();
        let rng = ChaCha8Rng::seed_from_u64(experiment.config.seed);
        let state = WorldState::new(&experiment.map);
        let mut session = Self {
            id: id.into(),
            mode,
            obs: Observation {
                trajectories: Vec::new(),
                features: Vec::new(),
                selectable: Vec::new(),
            },
            latent: LatentEval {
                candidates: Vec::new(),
                utilities: Vec::new(),
                losses: Vec::new(),
                best_index: 0,
            },
            experiment,
            state,
            weights,
            initial_weights: weights,
            chosen: 0,
            alternative: None,
            pending: None,
            next_proposal: 1,
            records: Vec::new(),
            feedback: Vec::new(),
            updates: 0,
            rng,
        };
        session.observe()?;
        Ok(session)
    }

    fn observe(&mut self) -> Result<()> {
        let cfg = &self.experiment.config;
        self.obs = observe(&self.experiment.map, &self.state, &cfg.action_space(), cfg.clip)?;
        self.chosen = select_action(&self.weights, &self.obs.features, &self.obs.selectable)?;
        self.latent = cfg.teacher.latent_eval(&self.obs.features, &self.obs.selectable)?;
        let others: Vec<usize> = self
            .obs
            .selectable
            .iter()
            .copied()
            .filter(|&i| i != self.chosen)
            .collect();
        self.alternative = (!others.is_empty()).then(|| others[self.rng.random_range(0..others.len())]);
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.experiment.config
    }

    pub fn weights(&self) -> Weights {
        self.weights
    }

    pub fn steps(&self) -> usize {
        self.records.len()
    }

    pub fn update_count(&self) -> usize {
        self.updates
    }

    pub fn awaiting_feedback(&self) -> bool {
        self.pending.is_some()
    }

    pub fn pending_proposal(&self) -> Option<u64> {
        self.pending
    }

    pub fn welcome(&self) -> Welcome {
        Welcome {
            mode: self.mode,
            k: self.experiment.config.k,
            feature_names: FeatureVector::NAMES.iter().map(|s| s.to_string()).collect(),
            map: self.experiment.map.to_document(),
            weights: self.weights,
        }
    }

    /// Emits the next proposal. Fails while a proposal is still pending.
    pub fn propose(&mut self) -> Result<Proposal> {
        if let Some(id) = self.pending {
            return Err(Error::Protocol(format!("proposal {id} is still awaiting feedback")));
        }
        let id = self.next_proposal;
        self.next_proposal += 1;
        self.pending = Some(id);

        let pose = self.state.pose;
        let path = self.experiment.map.path().waypoints();
        let from = self.state.path_cursor.min(path.len() - 1);
        let to = (from + PATH_WINDOW_WAYPOINTS).min(path.len());
        let candidates = self
            .obs
            .trajectories
            .iter()
            .zip(&self.obs.features)
            .map(|(traj, phi)| Candidate {
                index: traj.index,
                curvature: traj.curvature,
                points: traj.points().iter().map(|p| [p.x, p.y]).collect(),
                features: *phi,
                score: self.weights.score(phi),
                blocked: !self.latent.is_candidate(traj.index),
            })
            .collect();
        Ok(Proposal {
            proposal: id,
            t: self.records.len(),
            pose: [pose.x, pose.y, pose.heading],
            path_window: path[from..to].iter().map(|p| [p.x, p.y]).collect(),
            candidates,
            chosen: self.chosen,
            alternative: self.alternative,
            weights_digest: self.weights.digest(),
        })
    }

    fn check_unblocked(&self, feedback: &Feedback) -> Result<()> {
        let indices: &[usize] = match feedback {
            Feedback::Action { teacher_index } => &[*teacher_index],
            Feedback::Coactive { improved_index } => &[*improved_index],
            Feedback::Preference {
                preferred_index,
                other_index,
            } => &[*preferred_index, *other_index],
            Feedback::None | Feedback::Semantic { .. } => &[],
        };
        match indices.iter().find(|&&i| !self.latent.is_candidate(i)) {
            Some(i) => Err(Error::invalid(format!("candidate {i} is blocked"))),
            None => Ok(()),
        }
    }

    /// Applies feedback for `proposal`, executes the proposed action and
    /// prepares the next observation.
    ///
    /// A stale id or invalid feedback is rejected without touching the
    /// session. `Feedback::None` is a skip: the world advances, the weights
    /// do not change.
    pub fn submit(&mut self, proposal: u64, feedback: Feedback) -> Result<Ack> {
        if self.pending != Some(proposal) {
            return Err(Error::StaleProposal {
                expected: self.pending,
                got: proposal,
            });
        }
        let cfg = &self.experiment.config;
        feedback.validate(self.obs.features.len())?;
        self.check_unblocked(&feedback)?;
        let pseudo = cfg.scales.pseudo_loss(&feedback, &self.obs.features, self.chosen)?;
        let update = match &pseudo {
            Some(pseudo) => {
                let eval = hinge_eval(&self.weights, &self.obs.features, pseudo)?;
                let next = ogd_update(&self.weights, &eval.subgradient, cfg.eta)?;
                Some((eval.loss, next))
            }
            None => None,
        };

        let space = cfg.action_space();
        let out = step(&self.experiment.map, &self.state, &self.obs.trajectories[self.chosen], &space);
        let hinge_loss = update.map(|(loss, _)| loss);
        if let Some((_, next)) = update {
            self.weights = next;
            self.updates += 1;
        }
        let t = self.records.len();
        self.records.push(StepRecord {
            t,
            chosen_index: self.chosen,
            latent_loss: self.latent.loss_of(self.chosen),
            corrected: !feedback.is_none(),
            feedback_kind: feedback.kind(),
            pseudo_regret_increment: pseudo.as_ref().map_or(0.0, |p| p.values[self.chosen]),
            reset: out.reset.is_some(),
            feedback,
            pseudo_best_latent_loss: pseudo.as_ref().map(|p| self.latent.loss_of(p.best_index)),
            hinge_loss,
            weights_digest: self.weights.digest(),
        });
        self.feedback.push(feedback);
        self.state = out.state;
        self.pending = None;
        self.observe()?;

        Ok(Ack {
            proposal,
            t,
            updated: hinge_loss.is_some(),
            hinge_loss,
            weights: self.weights,
            weights_digest: self.weights.digest(),
            reset: out.reset.is_some(),
            corrections: self.records.iter().filter(|r| r.corrected).count(),
        })
    }

    /// Snapshot of the session as a trial log.
    pub fn log(&self) -> TrialLog {
        TrialLog {
            config_hash: self.experiment.config.hash(),
            trial_seed: self.experiment.config.seed,
            records: self.records.clone(),
            initial_weights: self.initial_weights,
            final_weights: self.weights,
            update_count: self.updates,
            reset_count: self.state.reset_count,
            arrivals: self.state.arrivals,
        }
    }

    pub fn export(&self) -> Export {
        Export {
            steps: self.records.len(),
            csv: trial_csv(&self.log()),
            feedback: self.feedback.clone(),
            final_weights: self.weights,
        }
    }
}

/// Re-runs a recorded feedback sequence from the config's start state with
/// the library's loop primitives and returns the weights after every step.
pub fn replay(config: &ExperimentConfig, feedback: &[Feedback]) -> Result<Vec<Weights>> {
    let exp = Experiment::new(config.clone())?;
    let space = config.action_space();
    let mut state = WorldState::new(&exp.map);
    let mut w = config.init_weights.unwrap_or_default();
    let mut history = Vec::with_capacity(feedback.len());
    for fb in feedback {
        let obs = observe(&exp.map, &state, &space, config.clip)?;
        let chosen = select_action(&w, &obs.features, &obs.selectable)?;
        if let Some(pseudo) = config.scales.pseudo_loss(fb, &obs.features, chosen)? {
            let eval = hinge_eval(&w, &obs.features, &pseudo)?;
            w = ogd_update(&w, &eval.subgradient, config.eta)?;
        }
        state = step(&exp.map, &state, &obs.trajectories[chosen], &space).state;
        history.push(w);
    }
    Ok(history)
}
