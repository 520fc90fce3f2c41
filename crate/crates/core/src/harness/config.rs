use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::feedback::LossScales;
use crate::learner::{Weights, DEFAULT_ETA};
use crate::teacher::Teacher;
use crate::world::{ActionSpace, Map, BUNDLED_MAPS, DEFAULT_CLIP};

/// Per-trial perturbation of the start pose: uniform in `±position` meters
/// on each axis and `±heading` radians. Zero keeps every trial on the map's
/// start pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StartJitter {
    pub position: f64,
    pub heading: f64,
}

impl Default for StartJitter {
    fn default() -> Self {
        Self {
            position: 0.2,
            heading: 0.1,
        }
    }
}

impl StartJitter {
    pub const NONE: StartJitter = StartJitter {
        position: 0.0,
        heading: 0.0,
    };
}

/// JSON experiment configuration.
///
/// `map` is either the name of a bundled map (`houseA`, `houseB`, `houseC`)
/// or a path to a map file, relative to the config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub map: String,
    pub teacher: Teacher,
    pub steps: usize,
    pub trials: usize,
    pub eta: f64,
    pub k: usize,
    pub kappa_max: f64,
    pub samples: usize,
    pub clip: f64,
    pub seed: u64,
    /// Moving-average window for latent-loss curves.
    pub window: usize,
    pub output: PathBuf,
    pub scales: LossScales,
    /// Starting weights; zero when absent.
    pub init_weights: Option<Weights>,
    pub start_jitter: StartJitter,
    pub bc_samples: usize,
    pub bc_epochs: usize,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let space = ActionSpace::default();
        Self {
            map: "houseC".into(),
            teacher: Teacher::avoid_doors(),
            steps: 5000,
            trials: 10,
            eta: DEFAULT_ETA,
            k: space.k,
            kappa_max: space.kappa_max,
            samples: space.samples,
            clip: DEFAULT_CLIP,
            seed: 0,
            window: 100,
            output: PathBuf::from("out"),
            scales: LossScales::default(),
            init_weights: None,
            start_jitter: StartJitter::default(),
            bc_samples: 50,
            bc_epochs: 10,
            base_dir: None,
        }
    }
}

impl ExperimentConfig {
    /// Smaller profile for quick checks.
    pub fn quick() -> Self {
        Self {
            steps: 1000,
            trials: 3,
            ..Self::default()
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_slice(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn action_space(&self) -> ActionSpace {
        ActionSpace {
            k: self.k,
            kappa_max: self.kappa_max,
            samples: self.samples,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::Config("steps must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::Config(format!("eta must be positive, got {}", self.eta)));
        }
        if !(self.clip > 0.0 && self.clip.is_finite()) {
            return Err(Error::Config(format!("clip must be positive, got {}", self.clip)));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be >= 1".into()));
        }
        if self.bc_epochs == 0 {
            return Err(Error::Config("bc_epochs must be >= 1".into()));
        }
        let j = self.start_jitter;
        if !(j.position >= 0.0 && j.position.is_finite() && j.heading >= 0.0 && j.heading.is_finite()) {
            return Err(Error::Config("start_jitter entries must be finite and non-negative".into()));
        }
        if let Some(w) = &self.init_weights {
            if !w.is_finite() {
                return Err(Error::Config("init_weights must be finite".into()));
            }
        }
        self.action_space()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.teacher.validate()
    }

    pub fn load_map(&self) -> Result<Map> {
        if BUNDLED_MAPS.contains(&self.map.as_str()) {
            return Map::bundled(&self.map);
        }
        let mut path = PathBuf::from(&self.map);
        if path.is_relative() {
            if let Some(dir) = &self.base_dir {
                path = dir.join(path);
            }
        }
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        crate::world::load_map(&bytes)
    }

    /// Hex SHA-256 of the serialized config.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
