//! Kinematic 2D navigation world.
//!
//! A [`Map`] holds an occupancy grid, semantically labelled points (doors,
//! stairs, chairs) and a fixed reference path. The robot is a point that
//! commits to whole constant-curvature arcs ([`Trajectory`]), each 1 m long.
//! [`features`] turns a candidate arc into the 7-dimensional
//! [`FeatureVector`] shared by the learner and the teachers.

mod action;
mod features;
mod map;
mod path;
mod state;

pub use action::{generate_action_set, mask_colliding, ActionSpace, Trajectory, TRAJECTORY_LENGTH};
pub use features::{features, features_all, FeatureVector, DEFAULT_CLIP, FEATURE_DIM};
pub use map::{load_map, Map, MapDocument, Point, BUNDLED_MAPS};
pub use path::{Path, PathProjection};
pub use state::{step, ResetReason, StepOutcome, WorldState};

use std::f64::consts::PI;

/// Normalizes an angle to `(-pi, pi]`.
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Planar robot pose. `heading` is kept in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    /// Expresses a world-frame point in this pose's frame (x forward, y left).
    pub fn to_local(&self, p: Point) -> Point {
        let (s, c) = self.heading.sin_cos();
        let dx = p.x - self.x;
        let dy = p.y - self.y;
        Point::new(c * dx + s * dy, -s * dx + c * dy)
    }

    /// Maps a point given in this pose's frame into the world frame.
    pub fn to_world(&self, local: Point) -> Point {
        let (s, c) = self.heading.sin_cos();
        Point::new(
            self.x + c * local.x - s * local.y,
            self.y + s * local.x + c * local.y,
        )
    }
}
