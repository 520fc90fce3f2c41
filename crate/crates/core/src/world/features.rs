use serde::{Deserialize, Serialize};

use super::action::{Trajectory, TRAJECTORY_LENGTH};
use super::map::{Map, Point};
use super::state::WorldState;
use crate::error::{Error, Result};

pub const FEATURE_DIM: usize = 7;

/// Per-sample distance clip used when none is configured, in meters.
pub const DEFAULT_CLIP: f64 = 3.0;

/// Features of one candidate trajectory.
///
/// Layout: `[obstacle, door, stair, chair, cross_track, along_track, lateral]`.
/// The first six entries are sums over trajectory samples; the last is the
/// signed endpoint offset in the robot frame (right positive).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub [f64; FEATURE_DIM]);

impl FeatureVector {
    pub const OBSTACLE: usize = 0;
    pub const DOOR: usize = 1;
    pub const STAIR: usize = 2;
    pub const CHAIR: usize = 3;
    pub const CROSS_TRACK: usize = 4;
    pub const ALONG_TRACK: usize = 5;
    pub const LATERAL: usize = 6;

    pub const NAMES: [&'static str; FEATURE_DIM] = [
        "obstacle_dist",
        "door_dist",
        "stair_dist",
        "chair_dist",
        "cross_track",
        "along_track",
        "lateral_disp",
    ];

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn obstacle_dist(&self) -> f64 {
        self.0[Self::OBSTACLE]
    }

    pub fn door_dist(&self) -> f64 {
        self.0[Self::DOOR]
    }

    pub fn stair_dist(&self) -> f64 {
        self.0[Self::STAIR]
    }

    pub fn chair_dist(&self) -> f64 {
        self.0[Self::CHAIR]
    }

    pub fn cross_track(&self) -> f64 {
        self.0[Self::CROSS_TRACK]
    }

    pub fn along_track(&self) -> f64 {
        self.0[Self::ALONG_TRACK]
    }

    pub fn lateral_disp(&self) -> f64 {
        self.0[Self::LATERAL]
    }

    pub fn dot(&self, w: &[f64; FEATURE_DIM]) -> f64 {
        self.0.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &FeatureVector) -> [f64; FEATURE_DIM] {
        std::array::from_fn(|i| self.0[i] - other.0[i])
    }

    pub fn distance(&self, other: &FeatureVector) -> f64 {
        self.sub(other).iter().map(|d| d * d).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<usize> for FeatureVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Reference point and tangent heading, shared by every candidate in a state.
struct Reference {
    point: Point,
    heading: f64,
}

fn reference(map: &Map, state: &WorldState) -> Reference {
    let path = map.path();
    let proj = path.project_from(state.pose.point(), state.path_cursor);
    let (point, heading) = path.point_at(proj.arc_length + TRAJECTORY_LENGTH);
    Reference { point, heading }
}

fn nearest(points: &[Point], p: Point) -> f64 {
    points
        .iter()
        .map(|q| q.dist(p))
        .fold(f64::INFINITY, f64::min)
}

fn compute(map: &Map, reference: &Reference, traj: &Trajectory, clip: f64) -> FeatureVector {
    let (s, c) = reference.heading.sin_cos();
    let mut f = [0.0; FEATURE_DIM];
    for sample in &traj.samples {
        let p = sample.point();
        f[FeatureVector::OBSTACLE] += map.obstacle_distance(p).min(clip);
        f[FeatureVector::DOOR] += nearest(map.doors(), p).min(clip);
        f[FeatureVector::STAIR] += nearest(map.stairs(), p).min(clip);
        f[FeatureVector::CHAIR] += nearest(map.chairs(), p).min(clip);
        let dx = p.x - reference.point.x;
        let dy = p.y - reference.point.y;
        f[FeatureVector::ALONG_TRACK] += (c * dx + s * dy).abs();
        f[FeatureVector::CROSS_TRACK] += (-s * dx + c * dy).abs();
    }
    f[FeatureVector::LATERAL] = if traj.curvature == 0.0 {
        0.0
    } else {
        traj.lateral_displacement()
    };
    FeatureVector(f)
}

fn check_clip(clip: f64) -> Result<()> {
    if clip.is_finite() && clip > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("clip must be positive, got {clip}")))
    }
}

/// Feature vector of a single trajectory rooted at `state.pose`.
pub fn features(map: &Map, state: &WorldState, traj: &Trajectory, clip: f64) -> Result<FeatureVector> {
    check_clip(clip)?;
    Ok(compute(map, &reference(map, state), traj, clip))
}

/// Features of a whole action set; the path reference is computed once.
pub fn features_all(map: &Map, state: &WorldState, trajs: &[Trajectory], clip: f64) -> Result<Vec<FeatureVector>> {
    check_clip(clip)?;
    let r = reference(map, state);
    Ok(trajs.iter().map(|t| compute(map, &r, t, clip)).collect())
}
