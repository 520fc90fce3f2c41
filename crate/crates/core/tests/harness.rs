use corrlearn::harness::{
    compute_metrics, run_sweep, summary_csv, trial_csv, Experiment, ExperimentConfig, StartJitter, SweepAxis,
    SUMMARY_CSV_HEADER, TRIAL_CSV_HEADER,
};
use corrlearn::learner::{hinge_eval, ogd_update, select_action};
use corrlearn::teacher::latent_eval;
use corrlearn::world::{features_all, mask_colliding, step, WorldState};
use corrlearn::{Channel, Feedback, Teacher, Weights};

fn corridor(steps: usize) -> ExperimentConfig {
    ExperimentConfig {
        map: concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/corridor.json").into(),
        teacher: Teacher::new(Weights([1.0, 2.0, 0.0, 1.0, -1.0, -1.0, 0.0]), 0.0, 0.0, Channel::Action).unwrap(),
        steps,
        trials: 2,
        k: 9,
        samples: 4,
        window: 10,
        ..ExperimentConfig::default()
    }
}

/// Re-simulates a logged trial with the world and learner primitives only,
/// feeding back the logged feedback, and checks every logged quantity.
fn replay_and_check(exp: &Experiment, seed: u64) {
    let cfg = &exp.config;
    let log = exp.run_trial(seed).unwrap();
    let map = cfg.load_map().unwrap();
    let space = cfg.action_space();
    let mut state = WorldState::starting_at(exp.trial_start(seed));
    let mut w = Weights::zeros();
    let mut updates = 0;
    let mut resets = 0;
    for r in &log.records {
        let trajs = space.generate(state.pose).unwrap();
        let f = features_all(&map, &state, &trajs, cfg.clip).unwrap();
        let selectable = mask_colliding(&map, &trajs);
        let chosen = select_action(&w, &f, &selectable).unwrap();
        assert_eq!(r.chosen_index, chosen, "step {}", r.t);
        let latent = latent_eval(&cfg.teacher.w_star, &f, &selectable).unwrap();
        assert_eq!(r.latent_loss, latent.loss_of(chosen));
        assert_eq!(r.corrected, !r.feedback.is_none());
        assert_eq!(r.feedback_kind, r.feedback.kind());
        match cfg.scales.pseudo_loss(&r.feedback, &f, chosen).unwrap() {
            Some(pseudo) => {
                assert_eq!(r.pseudo_regret_increment, pseudo.values[chosen]);
                let eval = hinge_eval(&w, &f, &pseudo).unwrap();
                assert_eq!(r.hinge_loss, Some(eval.loss));
                w = ogd_update(&w, &eval.subgradient, cfg.eta).unwrap();
                updates += 1;
            }
            None => {
                assert_eq!(r.pseudo_regret_increment, 0.0);
                assert_eq!(r.hinge_loss, None);
            }
        }
        assert_eq!(r.weights_digest, w.digest(), "step {}", r.t);
        let out = step(&map, &state, &trajs[chosen], &space);
        assert_eq!(r.reset, out.reset.is_some());
        resets += r.reset as usize;
        state = out.state;
    }
    assert_eq!(log.final_weights, w);
    assert_eq!(log.update_count, updates);
    assert_eq!(log.update_count, log.total_corrections());
    assert_eq!(log.reset_count + log.arrivals, resets as u64);
}

#[test]
fn logged_trials_replay_from_primitives() {
    let mut cfg = corridor(120);
    replay_and_check(&Experiment::new(cfg.clone()).unwrap(), 3);
    cfg.teacher.channel = Channel::Preference;
    cfg.teacher.sigma = 0.3;
    cfg.teacher.threshold = 0.2;
    replay_and_check(&Experiment::new(cfg.clone()).unwrap(), 4);
    cfg.map = "houseA".into();
    cfg.k = 64;
    cfg.samples = 8;
    cfg.teacher = Teacher::avoid_stairs_stay_right().with_channel(Channel::Semantic);
    replay_and_check(&Experiment::new(cfg).unwrap(), 5);
}

#[test]
fn weights_survive_resets() {
    let exp = Experiment::new(corridor(200)).unwrap();
    let log = exp.run_trial(0).unwrap();
    assert!(log.arrivals + log.reset_count >= 5, "the short corridor should restart often");
    for pair in log.records.windows(2) {
        if !pair[1].corrected {
            assert_eq!(pair[0].weights_digest, pair[1].weights_digest, "update without feedback at {}", pair[1].t);
        }
    }
}

#[test]
fn trials_are_deterministic_and_seed_dependent() {
    let mut cfg = corridor(80);
    cfg.teacher.sigma = 0.5;
    cfg.teacher.threshold = 0.3;
    let exp = Experiment::new(cfg.clone()).unwrap();
    let a = exp.run_trial(11).unwrap();
    assert_eq!(a, exp.run_trial(11).unwrap());
    assert_eq!(a, Experiment::new(cfg).unwrap().run_trial(11).unwrap());
    assert_ne!(a.records, exp.run_trial(12).unwrap().records);
    let parallel: Vec<_> = exp.run_trials().into_iter().map(Result::unwrap).collect();
    for (i, log) in parallel.iter().enumerate() {
        assert_eq!(*log, exp.run_trial(exp.trial_seed(i)).unwrap());
    }
}

#[test]
fn single_step_runs_and_zero_steps_are_rejected() {
    let exp = Experiment::new(corridor(1)).unwrap();
    let log = exp.run_trial(0).unwrap();
    assert_eq!(log.steps(), 1);
    assert_eq!(log.records[0].t, 0);
    assert!(Experiment::new(corridor(0)).is_err());
    let csv = trial_csv(&log);
    assert_eq!(csv.lines().count(), 2);
    assert_eq!(csv.lines().next().unwrap(), TRIAL_CSV_HEADER);
}

#[test]
fn start_jitter_stays_close_and_is_per_trial() {
    let exp = Experiment::new(ExperimentConfig::quick()).unwrap();
    let base = exp.map.start_pose();
    let starts: Vec<_> = (0..10).map(|s| exp.trial_start(s)).collect();
    for p in &starts {
        assert!((p.x - base.x).abs() <= 0.2 && (p.y - base.y).abs() <= 0.2);
        assert!(corrlearn::world::normalize_angle(p.heading - base.heading).abs() <= 0.1 + 1e-12);
    }
    assert_ne!(starts[0], starts[1]);
    assert_eq!(starts[3], exp.trial_start(3));
    let still = Experiment::new(ExperimentConfig {
        start_jitter: StartJitter::NONE,
        ..ExperimentConfig::quick()
    })
    .unwrap();
    assert_eq!(still.trial_start(7), base);
}

#[test]
fn trial_csv_matches_the_records() {
    let mut cfg = corridor(60);
    cfg.teacher.channel = Channel::Coactive;
    let log = Experiment::new(cfg).unwrap().run_trial(1).unwrap();
    let csv = trial_csv(&log);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), TRIAL_CSV_HEADER);
    for (line, r) in lines.zip(&log.records) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        assert_eq!(cols[0].parse::<usize>().unwrap(), r.t);
        assert_eq!(cols[1].parse::<usize>().unwrap(), r.chosen_index);
        assert_eq!(cols[2].parse::<f64>().unwrap(), r.latent_loss);
        assert_eq!(cols[3], if r.corrected { "1" } else { "0" });
        assert_eq!(cols[4], r.feedback_kind.as_str());
        assert_eq!(cols[5].parse::<f64>().unwrap(), r.pseudo_regret_increment);
        assert_eq!(cols[6], if r.reset { "1" } else { "0" });
    }
    assert_eq!(csv.lines().count(), log.steps() + 1);
}

#[test]
fn exact_teacher_drives_latent_loss_down() {
    let log = Experiment::new(corridor(600)).unwrap().run_trial(0).unwrap();
    let n = log.steps() / 10;
    let head: f64 = log.records[..n].iter().map(|r| r.latent_loss).sum::<f64>() / n as f64;
    let tail: f64 = log.records[log.steps() - n..].iter().map(|r| r.latent_loss).sum::<f64>() / n as f64;
    assert!(tail < head, "head {head} tail {tail}");
    let early = log.corrections_in(0..n);
    let late = log.corrections_in(log.steps() - n..log.steps());
    assert!(late < early, "corrections early {early} late {late}");
    let m = compute_metrics(&log, 10);
    assert_eq!(m.total_corrections, log.total_corrections());
    assert_eq!(m.cumulative_regret.len(), log.steps());
}

#[test]
fn sweeps_count_cells_and_isolate_failures() {
    let cfg = corridor(40);
    let rows = run_sweep(&cfg, &SweepAxis::Sigma(vec![0.0, 0.5])).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!((r.trials, r.failed), (2, 0));
        assert_eq!(r.axis, "sigma");
    }
    let csv = summary_csv(&rows);
    assert_eq!(csv.lines().next().unwrap(), SUMMARY_CSV_HEADER);
    assert_eq!(csv.lines().count(), 3);

    let rows = run_sweep(&cfg, &SweepAxis::Threshold(vec![-1.0, 0.5])).unwrap();
    assert_eq!(rows[0].failed, 2);
    assert_eq!(rows[0].errors.len(), 2);
    assert_eq!(rows[1].failed, 0);
    assert!(run_sweep(&cfg, &SweepAxis::Channel(vec![])).is_err());

    let channels = run_sweep(&cfg, &SweepAxis::standard("channel").unwrap()).unwrap();
    let names: Vec<&str> = channels.iter().map(|r| r.value.as_str()).collect();
    assert_eq!(names, ["action", "preference", "semantic"]);
}

#[test]
fn behavior_cloning_never_updates_online() {
    let mut cfg = corridor(50);
    cfg.bc_samples = 30;
    let exp = Experiment::new(cfg.clone()).unwrap();
    let log = exp.run_bc_baseline(0).unwrap();
    assert_eq!(log.update_count, 0);
    assert_eq!(log.initial_weights, log.final_weights);
    assert!(log.records.iter().all(|r| !r.corrected && r.feedback == Feedback::None));
    assert_eq!(log, exp.run_bc_baseline(0).unwrap());

    cfg.bc_samples = 0;
    let empty = Experiment::new(cfg.clone()).unwrap().run_bc_baseline(0).unwrap();
    assert_eq!(empty.final_weights, Weights::zeros());

    cfg.teacher.channel = Channel::Preference;
    assert!(Experiment::new(cfg).unwrap().run_bc_baseline(0).is_err());
}

#[test]
fn configs_are_validated() {
    for bad in [
        r#"{"steps": 0}"#,
        r#"{"trials": 0}"#,
        r#"{"eta": -0.1}"#,
        r#"{"k": 1}"#,
        r#"{"teacher": {"w_star": [0,0,0,0,0,0,0], "threshold": 1, "sigma": 0, "channel": "telepathy"}}"#,
        r#"{"teacher": {"w_star": [0,0,0], "threshold": 1, "sigma": 0, "channel": "action"}}"#,
        r#"{"start_jitter": {"position": -1}}"#,
        r#"not json"#,
    ] {
        assert!(ExperimentConfig::from_json(bad).is_err(), "{bad}");
    }
    let missing = ExperimentConfig {
        map: "/no/such/map.json".into(),
        ..ExperimentConfig::quick()
    };
    assert!(Experiment::new(missing).is_err());
    let cfg = ExperimentConfig::from_json(r#"{"map": "houseB", "seed": 9}"#).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_ne!(cfg.hash(), ExperimentConfig::default().hash());
}
