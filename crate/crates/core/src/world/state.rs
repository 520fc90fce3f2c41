use serde::{Deserialize, Serialize};

use super::action::{mask_colliding, ActionSpace, Trajectory};
use super::map::Map;
use super::Pose;

/// Within this arc length (m) of the path end, and this close to the final
/// waypoint, the run counts as finished and restarts from the start pose.
const ARRIVAL_ARC_TOLERANCE: f64 = 0.5;
const ARRIVAL_DISTANCE: f64 = 1.0;

/// Dynamic part of the world. The [`Map`] is passed alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub pose: Pose,
    /// Pose that resets and restarts return to.
    pub start: Pose,
    /// Segment of the reference path being tracked; its end waypoint is the
    /// nearest waypoint ahead. Never decreases except on a reset.
    pub path_cursor: usize,
    pub step_count: u64,
    /// Resets caused by reaching a pose whose whole action set collides.
    pub reset_count: u64,
    /// Restarts after reaching the end of the path.
    pub arrivals: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResetReason {
    Unrecoverable,
    Arrived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: WorldState,
    pub reset: Option<ResetReason>,
}

impl WorldState {
    pub fn new(map: &Map) -> Self {
        Self::starting_at(map.start_pose())
    }

    /// A fresh state whose start pose differs from the map's.
    pub fn starting_at(start: Pose) -> Self {
        Self {
            pose: start,
            start,
            path_cursor: 0,
            step_count: 0,
            reset_count: 0,
            arrivals: 0,
        }
    }

    fn restart(mut self) -> Self {
        self.pose = self.start;
        self.path_cursor = 0;
        self
    }
}

/// Executes `traj` from `world`.
///
/// The pose jumps to the trajectory endpoint and the path cursor advances.
/// Reaching the end of the path, or a pose from which every action collides,
/// restarts at the state's start pose.
pub fn step(map: &Map, world: &WorldState, traj: &Trajectory, space: &ActionSpace) -> StepOutcome {
    let mut next = *world;
    next.pose = traj.endpoint;
    next.step_count += 1;

    let path = map.path();
    let proj = path.project_from(next.pose.point(), next.path_cursor);
    next.path_cursor = next.path_cursor.max(proj.segment);

    let last = *path.waypoints().last().unwrap();
    if proj.arc_length >= path.length() - ARRIVAL_ARC_TOLERANCE && next.pose.point().dist(last) <= ARRIVAL_DISTANCE {
        next.arrivals += 1;
        return StepOutcome {
            state: next.restart(),
            reset: Some(ResetReason::Arrived),
        };
    }

    let candidates: Vec<Trajectory> = (0..space.k)
        .map(|i| Trajectory::arc(i, space.curvature(i), next.pose, space.samples))
        .collect();
    if mask_colliding(map, &candidates).is_empty() {
        next.reset_count += 1;
        return StepOutcome {
            state: next.restart(),
            reset: Some(ResetReason::Unrecoverable),
        };
    }
    StepOutcome { state: next, reset: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::load_map;

    fn straight_corridor() -> Map {
        let grid: Vec<String> = (0..40).map(|_| ".".repeat(120)).collect();
        let doc = serde_json::json!({
            "resolution": 0.1, "grid": grid,
            "path": [[0.5, 2.0], [4.0, 2.0], [11.5, 2.0]], "start": [0.5, 2.0, 0.0]
        });
        load_map(doc.to_string().as_bytes()).unwrap()
    }

    #[test]
    fn straight_step_moves_one_meter() {
        let map = straight_corridor();
        let s0 = WorldState::new(&map);
        let t = Trajectory::arc(0, 0.0, s0.pose, 8);
        let out = step(&map, &s0, &t, &ActionSpace::default());
        assert_eq!(out.reset, None);
        assert_eq!(out.state.pose, Pose::new(1.5, 2.0, 0.0));
        assert_eq!(out.state.step_count, 1);
    }

    #[test]
    fn cursor_is_monotone_along_straight_path() {
        let map = straight_corridor();
        let mut s = WorldState::new(&map);
        let mut last = s.path_cursor;
        for _ in 0..6 {
            let t = Trajectory::arc(0, 0.0, s.pose, 8);
            s = step(&map, &s, &t, &ActionSpace::default()).state;
            assert!(s.path_cursor >= last);
            last = s.path_cursor;
        }
        assert_eq!(s.path_cursor, 1);
    }

    #[test]
    fn boxed_in_endpoint_resets() {
        // a pocket of free space around x = 1.5 m, surrounded by walls
        let mut grid: Vec<String> = (0..40).map(|_| ".".repeat(60)).collect();
        for (r, row) in grid.iter_mut().enumerate() {
            let cells: String = row
                .chars()
                .enumerate()
                .map(|(c, ch)| {
                    let in_pocket = (14..=16).contains(&c) && (19..=21).contains(&r);
                    let on_lane = c <= 16 && (19..=21).contains(&r);
                    if in_pocket || on_lane || c < 6 { ch } else { '#' }
                })
                .collect();
            *row = cells;
        }
        let doc = serde_json::json!({
            "resolution": 0.1, "grid": grid,
            "path": [[0.5, 2.0], [5.5, 2.0]], "start": [0.5, 2.0, 0.0]
        });
        let map = load_map(doc.to_string().as_bytes()).unwrap();
        let s0 = WorldState::new(&map);
        let t = Trajectory::arc(0, 0.0, s0.pose, 8);
        let out = step(&map, &s0, &t, &ActionSpace::default());
        assert_eq!(out.reset, Some(ResetReason::Unrecoverable));
        assert_eq!(out.state.pose, map.start_pose());
        assert_eq!(out.state.reset_count, 1);
        assert_eq!(out.state.path_cursor, 0);
        assert_eq!(out.state.step_count, 1);
    }

    #[test]
    fn reaching_path_end_restarts() {
        let map = straight_corridor();
        let mut s = WorldState::new(&map);
        let mut arrived = false;
        for _ in 0..12 {
            let t = Trajectory::arc(0, 0.0, s.pose, 8);
            let out = step(&map, &s, &t, &ActionSpace::default());
            s = out.state;
            if out.reset == Some(ResetReason::Arrived) {
                arrived = true;
                break;
            }
        }
        assert!(arrived);
        assert_eq!(s.pose, map.start_pose());
        assert_eq!(s.arrivals, 1);
        assert_eq!(s.reset_count, 0);
    }
}
