use serde::{Deserialize, Serialize};

use super::map::{Map, Point};
use super::Pose;
use crate::error::{Error, Result};

/// Arc length of every candidate trajectory, in meters.
pub const TRAJECTORY_LENGTH: f64 = 1.0;

/// Parameters of the discrete action set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionSpace {
    /// Number of candidate arcs.
    pub k: usize,
    /// Largest absolute curvature (1/m).
    pub kappa_max: f64,
    /// Equally spaced arc-length samples per trajectory.
    pub samples: usize,
}

impl Default for ActionSpace {
    fn default() -> Self {
        Self {
            k: 64,
            kappa_max: 1.0,
            samples: 8,
        }
    }
}

impl ActionSpace {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid(format!("action count k must be >= 2, got {}", self.k)));
        }
        if !(self.kappa_max.is_finite() && self.kappa_max > 0.0) {
            return Err(Error::invalid(format!("kappa_max must be positive, got {}", self.kappa_max)));
        }
        if self.samples == 0 {
            return Err(Error::invalid("trajectories need at least one sample"));
        }
        Ok(())
    }

    pub fn curvature(&self, index: usize) -> f64 {
        let step = 2.0 * self.kappa_max / (self.k - 1) as f64;
        let c = -self.kappa_max + step * index as f64;
        // the middle arc of an odd-sized set is exactly straight
        if self.k % 2 == 1 && index == self.k / 2 {
            0.0
        } else {
            c
        }
    }

    pub fn generate(&self, pose: Pose) -> Result<Vec<Trajectory>> {
        generate_action_set(pose, self.k, self.kappa_max, self.samples)
    }
}

/// A constant-curvature arc of length [`TRAJECTORY_LENGTH`] rooted at `origin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub index: usize,
    /// Signed curvature, positive turns left.
    pub curvature: f64,
    pub origin: Pose,
    /// World-frame poses at arc lengths `L/n, 2L/n, ..., L`.
    pub samples: Vec<Pose>,
    pub endpoint: Pose,
}

impl Trajectory {
    pub fn arc(index: usize, curvature: f64, origin: Pose, samples: usize) -> Self {
        let poses: Vec<Pose> = (1..=samples)
            .map(|i| {
                let s = TRAJECTORY_LENGTH * i as f64 / samples as f64;
                arc_pose(origin, curvature, s)
            })
            .collect();
        let endpoint = *poses.last().expect("at least one sample");
        Self {
            index,
            curvature,
            origin,
            samples: poses,
            endpoint,
        }
    }

    /// Arc length recovered from the sample chords (origin included).
    pub fn arc_length(&self) -> f64 {
        let mut prev = self.origin.point();
        let mut total = 0.0;
        for s in &self.samples {
            let chord = prev.dist(s.point());
            total += if self.curvature == 0.0 {
                chord
            } else {
                let k = self.curvature.abs();
                2.0 * (k * chord / 2.0).min(1.0).asin() / k
            };
            prev = s.point();
        }
        total
    }

    /// Endpoint lateral offset in the origin frame, right positive.
    pub fn lateral_displacement(&self) -> f64 {
        -self.origin.to_local(self.endpoint.point()).y
    }

    pub fn points(&self) -> Vec<Point> {
        std::iter::once(self.origin.point())
            .chain(self.samples.iter().map(|p| p.point()))
            .collect()
    }
}

fn arc_pose(origin: Pose, curvature: f64, s: f64) -> Pose {
    let (lx, ly) = if curvature == 0.0 {
        (s, 0.0)
    } else {
        let theta = curvature * s;
        (theta.sin() / curvature, (1.0 - theta.cos()) / curvature)
    };
    let p = origin.to_world(Point::new(lx, ly));
    Pose::new(p.x, p.y, origin.heading + curvature * s)
}

/// Builds `k` arcs with curvatures evenly spaced on `[-kappa_max, kappa_max]`,
/// indexed in increasing curvature order.
pub fn generate_action_set(pose: Pose, k: usize, kappa_max: f64, samples: usize) -> Result<Vec<Trajectory>> {
    let space = ActionSpace {
        k,
        kappa_max,
        samples,
    };
    space.validate()?;
    Ok((0..k)
        .map(|i| Trajectory::arc(i, space.curvature(i), pose, samples))
        .collect())
}

/// Indices of the trajectories whose every sample lies in free space, in input order.
pub fn mask_colliding(map: &Map, actions: &[Trajectory]) -> Vec<usize> {
    actions
        .iter()
        .enumerate()
        .filter(|(_, t)| t.samples.iter().all(|s| !map.is_occupied(s.point())))
        .map(|(i, _)| i)
        .collect()
}
