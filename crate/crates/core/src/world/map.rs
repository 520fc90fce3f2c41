use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::path::Path;
use super::Pose;
use crate::error::{Error, Result};

/// Names of the maps compiled into the crate.
pub const BUNDLED_MAPS: [&str; 3] = ["houseA", "houseB", "houseC"];

const HOUSE_A: &str = include_str!("../../maps/houseA.json");
const HOUSE_B: &str = include_str!("../../maps/houseB.json");
const HOUSE_C: &str = include_str!("../../maps/houseC.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// On-disk map document.
///
/// `grid` rows are strings of `.` (free) and `#` (occupied); row 0 is the
/// minimum-y row and the lower-left corner of cell (0, 0) sits at the world
/// origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDocument {
    pub resolution: f64,
    pub grid: Vec<String>,
    #[serde(default)]
    pub doors: Vec<[f64; 2]>,
    #[serde(default)]
    pub stairs: Vec<[f64; 2]>,
    #[serde(default)]
    pub chairs: Vec<[f64; 2]>,
    pub path: Vec<[f64; 2]>,
    pub start: [f64; 3],
}

/// A validated, immutable navigation map.
#[derive(Debug, Clone)]
pub struct Map {
    resolution: f64,
    width: usize,
    height: usize,
    occupied: Vec<bool>,
    doors: Vec<Point>,
    stairs: Vec<Point>,
    chairs: Vec<Point>,
    path: Path,
    start: Pose,
    // Distance in meters from each cell center to the nearest occupied cell center.
    obstacle_field: Vec<f64>,
}

/// Parses and validates a map document.
pub fn load_map(document: &[u8]) -> Result<Map> {
    let value: Value = serde_json::from_slice(document).map_err(|e| Error::MapParse {
        field: "<document>".into(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| Error::MapParse {
        field: "<document>".into(),
        message: "expected a JSON object".into(),
    })?;

    fn field<T: serde::de::DeserializeOwned>(
        obj: &serde_json::Map<String, Value>,
        name: &str,
        optional: bool,
    ) -> Result<Option<T>> {
        match obj.get(name) {
            None if optional => Ok(None),
            None => Err(Error::MapParse {
                field: name.into(),
                message: "missing field".into(),
            }),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| Error::MapParse {
                    field: name.into(),
                    message: e.to_string(),
                }),
        }
    }

    let doc = MapDocument {
        resolution: field(obj, "resolution", false)?.unwrap(),
        grid: field(obj, "grid", false)?.unwrap(),
        doors: field(obj, "doors", true)?.unwrap_or_default(),
        stairs: field(obj, "stairs", true)?.unwrap_or_default(),
        chairs: field(obj, "chairs", true)?.unwrap_or_default(),
        path: field(obj, "path", false)?.unwrap(),
        start: field(obj, "start", false)?.unwrap(),
    };
    Map::from_document(doc)
}

impl Map {
    pub fn from_document(doc: MapDocument) -> Result<Self> {
        if !(doc.resolution.is_finite() && doc.resolution > 0.0) {
            return Err(Error::MapValidation(format!(
                "resolution must be positive, got {}",
                doc.resolution
            )));
        }
        let height = doc.grid.len();
        if height == 0 {
            return Err(Error::MapParse {
                field: "grid".into(),
                message: "grid has no rows".into(),
            });
        }
        let width = doc.grid[0].chars().count();
        if width == 0 {
            return Err(Error::MapParse {
                field: "grid".into(),
                message: "grid rows are empty".into(),
            });
        }
        let mut occupied = Vec::with_capacity(width * height);
        for (row, line) in doc.grid.iter().enumerate() {
            if line.chars().count() != width {
                return Err(Error::MapParse {
                    field: "grid".into(),
                    message: format!("row {row} has {} cells, expected {width}", line.chars().count()),
                });
            }
            for ch in line.chars() {
                match ch {
                    '.' => occupied.push(false),
                    '#' => occupied.push(true),
                    other => {
                        return Err(Error::MapParse {
                            field: "grid".into(),
                            message: format!("unexpected cell character {other:?} in row {row}"),
                        })
                    }
                }
            }
        }

        let to_points = |name: &str, pts: &[[f64; 2]]| -> Result<Vec<Point>> {
            pts.iter()
                .map(|&[x, y]| {
                    if !(x.is_finite() && y.is_finite()) {
                        return Err(Error::MapValidation(format!("non-finite point in `{name}`")));
                    }
                    Ok(Point::new(x, y))
                })
                .collect()
        };
        let doors = to_points("doors", &doc.doors)?;
        let stairs = to_points("stairs", &doc.stairs)?;
        let chairs = to_points("chairs", &doc.chairs)?;
        let waypoints = to_points("path", &doc.path)?;
        if waypoints.len() < 2 {
            return Err(Error::MapValidation("path needs at least 2 waypoints".into()));
        }
        let path = Path::new(waypoints)?;

        let [sx, sy, sh] = doc.start;
        if !(sx.is_finite() && sy.is_finite() && sh.is_finite()) {
            return Err(Error::MapValidation("start pose is not finite".into()));
        }
        let start = Pose::new(sx, sy, sh);

        let mut map = Map {
            resolution: doc.resolution,
            width,
            height,
            occupied,
            doors,
            stairs,
            chairs,
            path,
            start,
            obstacle_field: Vec::new(),
        };

        for (name, pts) in [("doors", &map.doors), ("stairs", &map.stairs), ("chairs", &map.chairs)] {
            if let Some(p) = pts.iter().find(|p| !map.in_bounds(**p)) {
                return Err(Error::MapValidation(format!(
                    "{name} point ({}, {}) lies outside the grid",
                    p.x, p.y
                )));
            }
        }
        if map.is_occupied(start.point()) {
            return Err(Error::MapValidation(format!(
                "start pose ({sx}, {sy}) is not in free space"
            )));
        }
        map.obstacle_field = distance_field(&map.occupied, width, height, map.resolution);
        Ok(map)
    }

    /// Loads one of the maps shipped with the crate (`houseA`, `houseB`, `houseC`).
    pub fn bundled(name: &str) -> Result<Self> {
        let text = match name {
            "houseA" => HOUSE_A,
            "houseB" => HOUSE_B,
            "houseC" => HOUSE_C,
            other => return Err(Error::invalid(format!("unknown bundled map {other:?}"))),
        };
        load_map(text.as_bytes())
    }

    pub fn to_document(&self) -> MapDocument {
        let grid = (0..self.height)
            .map(|r| {
                (0..self.width)
                    .map(|c| if self.occupied[r * self.width + c] { '#' } else { '.' })
                    .collect()
            })
            .collect();
        let pts = |v: &[Point]| v.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>();
        MapDocument {
            resolution: self.resolution,
            grid,
            doors: pts(&self.doors),
            stairs: pts(&self.stairs),
            chairs: pts(&self.chairs),
            path: pts(self.path.waypoints()),
            start: [self.start.x, self.start.y, self.start.heading],
        }
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn doors(&self) -> &[Point] {
        &self.doors
    }

    pub fn stairs(&self) -> &[Point] {
        &self.stairs
    }

    pub fn chairs(&self) -> &[Point] {
        &self.chairs
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn start_pose(&self) -> Pose {
        self.start
    }

    pub fn semantic_object_count(&self) -> usize {
        self.doors.len() + self.stairs.len() + self.chairs.len()
    }

    fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let c = (p.x / self.resolution).floor();
        let r = (p.y / self.resolution).floor();
        if c < 0.0 || r < 0.0 || c >= self.width as f64 || r >= self.height as f64 {
            None
        } else {
            Some((r as usize, c as usize))
        }
    }

    pub fn in_bounds(&self, p: Point) -> bool {
        self.cell_of(p).is_some()
    }

    /// True when `p` falls in an occupied cell or outside the grid.
    pub fn is_occupied(&self, p: Point) -> bool {
        match self.cell_of(p) {
            Some((r, c)) => self.occupied[r * self.width + c],
            None => true,
        }
    }

    pub fn cell_occupied(&self, row: usize, col: usize) -> bool {
        self.occupied[row * self.width + col]
    }

    /// Distance to the nearest occupied cell, looked up at the cell containing `p`.
    /// Points outside the grid report 0; a grid without obstacles reports infinity.
    pub fn obstacle_distance(&self, p: Point) -> f64 {
        match self.cell_of(p) {
            Some((r, c)) => self.obstacle_field[r * self.width + c],
            None => 0.0,
        }
    }
}

/// Exact Euclidean distance transform (Felzenszwalb & Huttenlocher) between
/// cell centers, scaled to meters.
fn distance_field(occupied: &[bool], width: usize, height: usize, resolution: f64) -> Vec<f64> {
    const FAR: f64 = 1e20;
    let mut sq: Vec<f64> = occupied.iter().map(|&o| if o { 0.0 } else { FAR }).collect();

    let mut column = vec![0.0; height];
    for c in 0..width {
        for r in 0..height {
            column[r] = sq[r * width + c];
        }
        let out = edt_1d(&column);
        for r in 0..height {
            sq[r * width + c] = out[r];
        }
    }
    for r in 0..height {
        let row = &mut sq[r * width..(r + 1) * width];
        let out = edt_1d(row);
        row.copy_from_slice(&out);
    }
    sq.into_iter()
        .map(|d| if d >= FAR { f64::INFINITY } else { d.sqrt() * resolution })
        .collect()
}

fn edt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    let mut k = 0usize;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                if k == 0 {
                    // all previous parabolas dominated
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let diff = q as f64 - p as f64;
        *out = diff * diff + f[p];
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{"resolution": 1.0, "grid": ["...", "...", "..."], "path": [[0.5, 0.5], [2.5, 0.5]], "start": [0.5, 0.5, 0.0]}"#.to_string()
    }

    #[test]
    fn minimal_document_loads() {
        let map = load_map(minimal().as_bytes()).unwrap();
        assert_eq!(map.semantic_object_count(), 0);
        assert_eq!((map.width(), map.height()), (3, 3));
        assert!(map.obstacle_distance(Point::new(1.5, 1.5)).is_infinite());
    }

    #[test]
    fn negative_resolution_rejected() {
        let doc = minimal().replace("\"resolution\": 1.0", "\"resolution\": -1");
        assert!(matches!(load_map(doc.as_bytes()), Err(Error::MapValidation(_))));
    }

    #[test]
    fn parse_error_names_field() {
        let doc = minimal().replace("\"start\": [0.5, 0.5, 0.0]", "\"start\": \"nowhere\"");
        match load_map(doc.as_bytes()) {
            Err(Error::MapParse { field, .. }) => assert_eq!(field, "start"),
            other => panic!("unexpected {other:?}"),
        }
        let doc = minimal().replace("\"...\", \"...\"", "\"..x\", \"...\"");
        match load_map(doc.as_bytes()) {
            Err(Error::MapParse { field, .. }) => assert_eq!(field, "grid"),
            other => panic!("unexpected {other:?}"),
        }
        let doc = r#"{"resolution": 1.0, "grid": ["."], "start": [0.5, 0.5, 0.0]}"#;
        match load_map(doc.as_bytes()) {
            Err(Error::MapParse { field, .. }) => assert_eq!(field, "path"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn start_in_occupied_cell_rejected() {
        let doc = minimal().replace("[\"...\",", "[\"#..\",");
        assert!(matches!(load_map(doc.as_bytes()), Err(Error::MapValidation(_))));
    }

    #[test]
    fn semantic_point_out_of_bounds_rejected() {
        let doc = minimal().replace("\"path\"", "\"doors\": [[5.0, 1.0]], \"path\"");
        assert!(matches!(load_map(doc.as_bytes()), Err(Error::MapValidation(_))));
    }

    #[test]
    fn short_path_rejected() {
        let doc = minimal().replace("[[0.5, 0.5], [2.5, 0.5]]", "[[0.5, 0.5]]");
        assert!(matches!(load_map(doc.as_bytes()), Err(Error::MapValidation(_))));
    }

    #[test]
    fn distance_field_matches_brute_force() {
        let grid = vec![
            "......#...".to_string(),
            "..........".to_string(),
            "...#......".to_string(),
            "..........".to_string(),
            ".........#".to_string(),
        ];
        let doc = MapDocument {
            resolution: 0.5,
            grid,
            doors: vec![],
            stairs: vec![],
            chairs: vec![],
            path: vec![[0.1, 0.1], [1.0, 0.1]],
            start: [0.1, 0.1, 0.0],
        };
        let map = Map::from_document(doc).unwrap();
        let occ: Vec<(usize, usize)> = (0..map.height())
            .flat_map(|r| (0..map.width()).map(move |c| (r, c)))
            .filter(|&(r, c)| map.cell_occupied(r, c))
            .collect();
        for r in 0..map.height() {
            for c in 0..map.width() {
                let brute = occ
                    .iter()
                    .map(|&(orow, ocol)| {
                        ((r as f64 - orow as f64).powi(2) + (c as f64 - ocol as f64).powi(2)).sqrt() * 0.5
                    })
                    .fold(f64::INFINITY, f64::min);
                let p = Point::new((c as f64 + 0.5) * 0.5, (r as f64 + 0.5) * 0.5);
                assert!((map.obstacle_distance(p) - brute).abs() < 1e-12, "cell {r},{c}");
            }
        }
    }

    #[test]
    fn out_of_bounds_is_occupied() {
        let map = load_map(minimal().as_bytes()).unwrap();
        assert!(map.is_occupied(Point::new(-0.1, 1.0)));
        assert!(map.is_occupied(Point::new(1.0, 3.0)));
        assert!(!map.is_occupied(Point::new(2.99, 2.99)));
    }
}
