use super::map::Point;
use crate::error::{Error, Result};

/// Arc-length window (m) past the current segment start searched when
/// projecting a pose onto the path. Keeps the cursor from jumping to a later,
/// geometrically close part of a path that folds back on itself.
const PROJECTION_WINDOW: f64 = 3.0;

/// A fixed reference path: a polyline of waypoints with cumulative arc length.
#[derive(Debug, Clone)]
pub struct Path {
    waypoints: Vec<Point>,
    cumulative: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathProjection {
    /// Segment `[segment, segment + 1]` holding the projection.
    pub segment: usize,
    /// Arc length of the projected point along the whole path.
    pub arc_length: f64,
    pub point: Point,
    pub distance: f64,
}

impl Path {
    pub fn new(waypoints: Vec<Point>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::MapValidation("path needs at least 2 waypoints".into()));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        let mut total = 0.0;
        cumulative.push(0.0);
        for w in waypoints.windows(2) {
            total += w[0].dist(w[1]);
            cumulative.push(total);
        }
        if total <= 0.0 {
            return Err(Error::MapValidation("path has zero length".into()));
        }
        Ok(Self {
            waypoints,
            cumulative,
        })
    }

    pub fn waypoints(&self) -> &[Point] {
        &self.waypoints
    }

    pub fn segment_count(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Projects `p` onto the segments starting at `cursor`, looking at most
    /// 3 m of arc length past the projection onto the cursor segment itself. Ties go to the earliest segment.
    pub fn project_from(&self, p: Point, cursor: usize) -> PathProjection {
        let cursor = cursor.min(self.segment_count() - 1);
        let mut best = self.project_segment(p, cursor);
        let limit = best.arc_length + PROJECTION_WINDOW;
        for seg in cursor + 1..self.segment_count() {
            if self.cumulative[seg] > limit {
                break;
            }
            let candidate = self.project_segment(p, seg);
            if candidate.distance < best.distance {
                best = candidate;
            }
        }
        best
    }

    fn project_segment(&self, p: Point, seg: usize) -> PathProjection {
        let a = self.waypoints[seg];
        let b = self.waypoints[seg + 1];
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        let t = if len2 > 0.0 {
            (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let q = Point::new(a.x + t * dx, a.y + t * dy);
        PathProjection {
            segment: seg,
            arc_length: self.cumulative[seg] + t * len2.sqrt(),
            point: q,
            distance: q.dist(p),
        }
    }

    /// Point and tangent heading at arc length `s`, clamped to the path ends.
    pub fn point_at(&self, s: f64) -> (Point, f64) {
        let s = s.clamp(0.0, self.length());
        let mut seg = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        seg = seg.min(self.segment_count() - 1);
        // skip zero-length segments so the tangent is defined
        while seg + 1 < self.segment_count() && self.cumulative[seg + 1] - self.cumulative[seg] <= 0.0 {
            seg += 1;
        }
        let a = self.waypoints[seg];
        let b = self.waypoints[seg + 1];
        let len = self.cumulative[seg + 1] - self.cumulative[seg];
        let t = if len > 0.0 {
            ((s - self.cumulative[seg]) / len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let heading = (b.y - a.y).atan2(b.x - a.x);
        (Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)), heading)
    }
}
