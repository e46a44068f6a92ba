//! Room representation and the geometric predicates the rest of the engine
//! relies on: containment, wall adjacency, occlusion and workplane sampling.

mod vector;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use vector::{Point2, Rect, Vec3};

/// Tolerance used for boundary and colinearity tests, in meters.
pub const EPS: f64 = 1e-9;

/// Default workplane sampling pitch, in meters.
pub const DEFAULT_SPACING: f64 = 0.25;

/// Default workplane height above the floor, in meters.
pub const DEFAULT_WORKPLANE_HEIGHT: f64 = 0.8;

/// Upper bound on the number of bounding-box cells a grid request may scan.
const MAX_GRID_CELLS: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("outline is degenerate: {reason}")]
    DegenerateOutline { reason: String },
    #[error("outline edges {first} and {second} intersect")]
    SelfIntersectingOutline { first: usize, second: usize },
    #[error("outline vertices are ordered clockwise")]
    ClockwiseOutline,
    #[error("object {index} ({kind}) is not inside the outline")]
    ObjectOutsideRoom { index: usize, kind: ObjectKind },
    #[error("{element} has a non-positive height")]
    NonPositiveHeight { element: String },
    #[error("object {index} ({kind}) is taller than the ceiling")]
    ObjectTooTall { index: usize, kind: ObjectKind },
    #[error("object {index} ({kind}) is invalid: {reason}")]
    InvalidObject {
        index: usize,
        kind: ObjectKind,
        reason: String,
    },
    #[error("invalid surfaces: {reason}")]
    InvalidSurfaces { reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no workplane sample survives (spacing too coarse?)")]
    EmptyGrid,
}

impl GeometryError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DegenerateOutline { .. } => "DegenerateOutline",
            Self::SelfIntersectingOutline { .. } => "SelfIntersectingOutline",
            Self::ClockwiseOutline => "ClockwiseOutline",
            Self::ObjectOutsideRoom { .. } => "ObjectOutsideRoom",
            Self::NonPositiveHeight { .. } => "NonPositiveHeight",
            Self::ObjectTooTall { .. } => "ObjectTooTall",
            Self::InvalidObject { .. } => "InvalidObject",
            Self::InvalidSurfaces { .. } => "InvalidSurfaces",
            Self::InvalidParameter(_) => "InvalidParameter",
            Self::EmptyGrid => "EmptyGrid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomFunction {
    Bedroom,
    LivingRoom,
    Bathroom,
    Balcony,
    Closet,
    Corridor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    Bed,
    Tv,
    Desk,
    Dresser,
    Closet,
    Nightstand,
    Other,
}

impl ObjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bed => "bed",
            Self::Tv => "tv",
            Self::Desk => "desk",
            Self::Dresser => "dresser",
            Self::Closet => "closet",
            Self::Nightstand => "nightstand",
            Self::Other => "other",
        }
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which interior surface a reflectance belongs to. Serialized as
/// `"floor"`, `"ceiling"` or `"wall[i]"` where `i` is the outline edge index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceKind {
    Floor,
    Ceiling,
    Wall(usize),
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Floor => f.write_str("floor"),
            Self::Ceiling => f.write_str("ceiling"),
            Self::Wall(i) => write!(f, "wall[{i}]"),
        }
    }
}

impl FromStr for SurfaceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "floor" => Ok(Self::Floor),
            "ceiling" => Ok(Self::Ceiling),
            _ => s
                .strip_prefix("wall[")
                .and_then(|rest| rest.strip_suffix(']'))
                .and_then(|idx| idx.parse().ok())
                .map(Self::Wall)
                .ok_or_else(|| format!("unknown surface kind `{s}`")),
        }
    }
}

impl Serialize for SurfaceKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SurfaceKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    pub kind: SurfaceKind,
    pub reflectance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FurnitureObject {
    pub kind: ObjectKind,
    pub footprint: Rect,
    pub height: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facing: Option<Point2>,
}

impl FurnitureObject {
    pub fn new(kind: ObjectKind, footprint: Rect, height: f64) -> Self {
        Self {
            kind,
            footprint,
            height,
            facing: None,
        }
    }

    pub fn with_facing(mut self, facing: Point2) -> Self {
        self.facing = Some(facing);
        self
    }
}

/// A room as delivered by the scan step: outline, ceiling, surface
/// reflectances, furniture and the function assigned to the room.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomModel {
    pub outline: Vec<Point2>,
    pub ceiling_height: f64,
    pub surfaces: Vec<Surface>,
    pub objects: Vec<FurnitureObject>,
    pub function: RoomFunction,
}

impl RoomModel {
    /// Room with the given outline and uniform reflectances per surface class.
    pub fn with_reflectances(
        outline: Vec<Point2>,
        ceiling_height: f64,
        function: RoomFunction,
        floor: f64,
        ceiling: f64,
        walls: f64,
    ) -> Self {
        let mut surfaces = vec![
            Surface {
                kind: SurfaceKind::Floor,
                reflectance: floor,
            },
            Surface {
                kind: SurfaceKind::Ceiling,
                reflectance: ceiling,
            },
        ];
        surfaces.extend((0..outline.len()).map(|i| Surface {
            kind: SurfaceKind::Wall(i),
            reflectance: walls,
        }));
        Self {
            outline,
            ceiling_height,
            surfaces,
            objects: Vec::new(),
            function,
        }
    }

    /// Axis-aligned `width` x `depth` room anchored at the origin with typical
    /// residential reflectances (floor 0.2, ceiling 0.7, walls 0.5).
    pub fn rectangle(width: f64, depth: f64, ceiling_height: f64, function: RoomFunction) -> Self {
        let outline = vec![
            Point2::new(0.0, 0.0),
            Point2::new(width, 0.0),
            Point2::new(width, depth),
            Point2::new(0.0, depth),
        ];
        Self::with_reflectances(outline, ceiling_height, function, 0.2, 0.7, 0.5)
    }

    pub fn with_object(mut self, object: FurnitureObject) -> Self {
        self.objects.push(object);
        self
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("room model serializes")
    }
}

/// One outline edge seen from inside the room.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallSegment {
    pub index: usize,
    pub start: Point2,
    pub end: Point2,
    pub inward_normal: Point2,
    pub length: f64,
}

impl WallSegment {
    /// Unit vector from `start` to `end`.
    pub fn direction(&self) -> Point2 {
        (self.end - self.start) * (1.0 / self.length)
    }

    /// Coordinate of `p` projected onto the wall, measured from `start`.
    pub fn along(&self, p: Point2) -> f64 {
        (p - self.start).dot(self.direction())
    }

    pub fn point_at(&self, along: f64) -> Point2 {
        self.start + self.direction() * along
    }

    pub fn distance_to_point(&self, p: Point2) -> f64 {
        point_segment_distance(p, self.start, self.end)
    }

    pub fn distance_to_rect(&self, r: &Rect) -> f64 {
        rect_segment_distance(r, self.start, self.end)
    }
}

/// A room whose invariants have been checked, together with derived data.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedRoom {
    model: RoomModel,
    walls: Vec<WallSegment>,
    area: f64,
    perimeter: f64,
    bounds: Rect,
}

impl ValidatedRoom {
    pub fn model(&self) -> &RoomModel {
        &self.model
    }

    pub fn into_model(self) -> RoomModel {
        self.model
    }

    pub fn walls(&self) -> &[WallSegment] {
        &self.walls
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn ceiling_height(&self) -> f64 {
        self.model.ceiling_height
    }

    pub fn objects(&self) -> &[FurnitureObject] {
        &self.model.objects
    }

    pub fn function(&self) -> RoomFunction {
        self.model.function
    }

    pub fn reflectance(&self, kind: SurfaceKind) -> f64 {
        self.model
            .surfaces
            .iter()
            .find(|s| s.kind == kind)
            .map(|s| s.reflectance)
            .expect("validated rooms carry every surface")
    }

    /// Floor, ceiling and wall area together, in m².
    pub fn total_surface_area(&self) -> f64 {
        2.0 * self.area + self.perimeter * self.model.ceiling_height
    }

    /// Area-weighted mean reflectance over floor, ceiling and walls.
    pub fn mean_reflectance(&self) -> f64 {
        let h = self.model.ceiling_height;
        let mut weighted = self.area
            * (self.reflectance(SurfaceKind::Floor) + self.reflectance(SurfaceKind::Ceiling));
        for wall in &self.walls {
            weighted += wall.length * h * self.reflectance(SurfaceKind::Wall(wall.index));
        }
        weighted / self.total_surface_area()
    }

    /// Whether a 3D point lies in the closed room volume.
    pub fn contains_point(&self, p: Vec3) -> bool {
        p.z >= -EPS && p.z <= self.model.ceiling_height + EPS && point_in_room(self, p.xy())
    }
}

/// Checks every room invariant and derives walls, area and bounds.
pub fn validate_room(room: &RoomModel) -> Result<ValidatedRoom, GeometryError> {
    let outline = &room.outline;
    let n = outline.len();
    if n < 3 {
        return Err(GeometryError::DegenerateOutline {
            reason: format!("{n} vertices, need at least 3"),
        });
    }
    if let Some(i) = outline.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(GeometryError::DegenerateOutline {
            reason: format!("vertex {i} is not finite"),
        });
    }
    for i in 0..n {
        if outline[i].distance(outline[(i + 1) % n]) <= EPS {
            return Err(GeometryError::DegenerateOutline {
                reason: format!("edge {i} has zero length"),
            });
        }
    }
    check_simple(outline)?;

    let signed = signed_area(outline);
    if signed.abs() <= EPS {
        return Err(GeometryError::DegenerateOutline {
            reason: "zero area".into(),
        });
    }
    if signed < 0.0 {
        return Err(GeometryError::ClockwiseOutline);
    }

    if !(room.ceiling_height > 0.0) || !room.ceiling_height.is_finite() {
        return Err(GeometryError::NonPositiveHeight {
            element: "ceiling".into(),
        });
    }

    check_surfaces(&room.surfaces, n)?;

    let walls = build_walls(outline);
    let perimeter = walls.iter().map(|w| w.length).sum();
    let bounds = bounding_box(outline);
    let validated = ValidatedRoom {
        model: room.clone(),
        walls,
        area: signed,
        perimeter,
        bounds,
    };

    for (index, object) in room.objects.iter().enumerate() {
        let kind = object.kind;
        let fp = &object.footprint;
        let finite = [fp.min.x, fp.min.y, fp.max.x, fp.max.y]
            .iter()
            .all(|v| v.is_finite());
        if !finite || fp.width() <= 0.0 || fp.depth() <= 0.0 {
            return Err(GeometryError::InvalidObject {
                index,
                kind,
                reason: "footprint must have positive area".into(),
            });
        }
        if let Some(facing) = object.facing {
            if (facing.norm() - 1.0).abs() > 1e-6 {
                return Err(GeometryError::InvalidObject {
                    index,
                    kind,
                    reason: "facing must be a unit vector".into(),
                });
            }
        }
        if !(object.height > 0.0) {
            return Err(GeometryError::NonPositiveHeight {
                element: format!("object {index} ({kind})"),
            });
        }
        if object.height > room.ceiling_height {
            return Err(GeometryError::ObjectTooTall { index, kind });
        }
        if !rect_in_polygon(fp, outline) {
            return Err(GeometryError::ObjectOutsideRoom { index, kind });
        }
    }

    Ok(validated)
}

fn check_surfaces(surfaces: &[Surface], edges: usize) -> Result<(), GeometryError> {
    let mut floors = 0;
    let mut ceilings = 0;
    let mut walls = vec![0usize; edges];
    for s in surfaces {
        if !(0.0..=1.0).contains(&s.reflectance) {
            return Err(GeometryError::InvalidSurfaces {
                reason: format!("{} reflectance {} outside [0, 1]", s.kind, s.reflectance),
            });
        }
        match s.kind {
            SurfaceKind::Floor => floors += 1,
            SurfaceKind::Ceiling => ceilings += 1,
            SurfaceKind::Wall(i) if i < edges => walls[i] += 1,
            SurfaceKind::Wall(i) => {
                return Err(GeometryError::InvalidSurfaces {
                    reason: format!("wall[{i}] has no matching outline edge"),
                })
            }
        }
    }
    if floors != 1 || ceilings != 1 {
        return Err(GeometryError::InvalidSurfaces {
            reason: format!("need exactly one floor and one ceiling, got {floors} and {ceilings}"),
        });
    }
    if let Some(i) = walls.iter().position(|&c| c != 1) {
        return Err(GeometryError::InvalidSurfaces {
            reason: format!("wall[{i}] listed {} times, expected once", walls[i]),
        });
    }
    Ok(())
}

fn check_simple(outline: &[Point2]) -> Result<(), GeometryError> {
    let n = outline.len();
    let edge = |i: usize| (outline[i], outline[(i + 1) % n]);
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges share a vertex; they only conflict when they fold back.
                let (u, v) = if j == i + 1 { (a - b, d - c) } else { (b - a, c - d) };
                if u.cross(v).abs() <= EPS * u.norm() * v.norm() && u.dot(v) > 0.0 {
                    return Err(GeometryError::SelfIntersectingOutline { first: i, second: j });
                }
            } else if segments_intersect(a, b, c, d) {
                return Err(GeometryError::SelfIntersectingOutline { first: i, second: j });
            }
        }
    }
    Ok(())
}

fn orientation(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    point_segment_distance(p, a, b) <= EPS
}

/// Closed segment intersection, touching and colinear overlap included.
fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);
    if ((d1 > EPS && d2 < -EPS) || (d1 < -EPS && d2 > EPS))
        && ((d3 > EPS && d4 < -EPS) || (d3 < -EPS && d4 > EPS))
    {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

fn signed_area(outline: &[Point2]) -> f64 {
    let n = outline.len();
    0.5 * (0..n)
        .map(|i| outline[i].cross(outline[(i + 1) % n]))
        .sum::<f64>()
}

fn bounding_box(points: &[Point2]) -> Rect {
    let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    Rect::new(min, max)
}

fn build_walls(outline: &[Point2]) -> Vec<WallSegment> {
    let n = outline.len();
    (0..n)
        .map(|index| {
            let start = outline[index];
            let end = outline[(index + 1) % n];
            let d = end - start;
            let length = d.norm();
            // Left-hand normal points inward for a counter-clockwise outline.
            let inward_normal = Point2::new(-d.y / length, d.x / length);
            WallSegment {
                index,
                start,
                end,
                inward_normal,
                length,
            }
        })
        .collect()
}

/// Distance from `p` to the closed segment `a`-`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Distance between a closed rectangle and the closed segment `a`-`b`.
pub fn rect_segment_distance(r: &Rect, a: Point2, b: Point2) -> f64 {
    if r.contains(a) || r.contains(b) || clip_to_rect(r, a, b).is_some() {
        return 0.0;
    }
    let corners = r.corners();
    let from_corners = corners
        .iter()
        .map(|&c| point_segment_distance(c, a, b))
        .fold(f64::INFINITY, f64::min);
    let from_ends = [a, b]
        .iter()
        .flat_map(|&p| (0..4).map(move |i| point_segment_distance(p, corners[i], corners[(i + 1) % 4])))
        .fold(f64::INFINITY, f64::min);
    from_corners.min(from_ends)
}

/// Liang–Barsky clip of segment `a`-`b` against the closed rectangle; returns
/// the parameter interval of the part inside.
fn clip_to_rect(r: &Rect, a: Point2, b: Point2) -> Option<(f64, f64)> {
    let d = b - a;
    let mut t0 = 0.0_f64;
    let mut t1 = 1.0_f64;
    for (p, q) in [
        (-d.x, a.x - r.min.x),
        (d.x, r.max.x - a.x),
        (-d.y, a.y - r.min.y),
        (d.y, r.max.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

fn rect_in_polygon(r: &Rect, outline: &[Point2]) -> bool {
    if !r.corners().iter().all(|&c| point_in_polygon(outline, c)) {
        return false;
    }
    let n = outline.len();
    let inner = |p: Point2| {
        p.x > r.min.x + EPS && p.x < r.max.x - EPS && p.y > r.min.y + EPS && p.y < r.max.y - EPS
    };
    (0..n).all(|i| {
        let a = outline[i];
        let b = outline[(i + 1) % n];
        match clip_to_rect(r, a, b) {
            Some((t0, t1)) => {
                let d = b - a;
                let mid = a + d * (0.5 * (t0 + t1));
                !inner(mid)
            }
            None => true,
        }
    })
}

/// Closed point-in-polygon test (boundary counts as inside).
fn point_in_polygon(outline: &[Point2], p: Point2) -> bool {
    let n = outline.len();
    let mut inside = false;
    for i in 0..n {
        let a = outline[i];
        let b = outline[(i + 1) % n];
        if on_segment(p, a, b) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// True iff `p` is inside the outline or on its boundary.
pub fn point_in_room(room: &ValidatedRoom, p: Point2) -> bool {
    point_in_polygon(&room.model.outline, p)
}

/// One outline segment per edge, in outline order.
pub fn wall_segments(room: &ValidatedRoom) -> Vec<WallSegment> {
    room.walls.clone()
}

/// Workplane samples plus the lattice they were drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkplaneGrid {
    /// Minimum corner of the outline's bounding box.
    pub origin: Point2,
    pub spacing: f64,
    pub height: f64,
    pub columns: usize,
    pub rows: usize,
    pub points: Vec<Vec3>,
    /// `(column, row)` lattice index of every point.
    pub cells: Vec<(usize, usize)>,
}

impl WorkplaneGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Cell centers of a square lattice anchored at the bounding-box minimum,
/// clipped to the outline and to objects that reach the workplane. Points are
/// ordered by ascending y, then x.
pub fn workplane_grid(
    room: &ValidatedRoom,
    spacing: f64,
    workplane_height: f64,
) -> Result<WorkplaneGrid, GeometryError> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(GeometryError::InvalidParameter(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    if !(0.0..room.model.ceiling_height).contains(&workplane_height) {
        return Err(GeometryError::InvalidParameter(format!(
            "workplane height {workplane_height} outside [0, {})",
            room.model.ceiling_height
        )));
    }
    let bounds = room.bounds;
    let count = |extent: f64| ((extent / spacing + EPS) - 0.5).floor().max(-1.0) as i64 + 1;
    let columns = count(bounds.width()).max(0) as usize;
    let rows = count(bounds.depth()).max(0) as usize;
    if columns.saturating_mul(rows) > MAX_GRID_CELLS {
        return Err(GeometryError::InvalidParameter(format!(
            "spacing {spacing} yields more than {MAX_GRID_CELLS} cells"
        )));
    }

    let masks: Vec<&Rect> = room
        .model
        .objects
        .iter()
        .filter(|o| o.height >= workplane_height)
        .map(|o| &o.footprint)
        .collect();

    let mut points = Vec::new();
    let mut cells = Vec::new();
    for row in 0..rows {
        let y = bounds.min.y + (row as f64 + 0.5) * spacing;
        for col in 0..columns {
            let x = bounds.min.x + (col as f64 + 0.5) * spacing;
            let p = Point2::new(x, y);
            if !point_in_room(room, p) || masks.iter().any(|m| m.contains(p)) {
                continue;
            }
            points.push(p.extend(workplane_height));
            cells.push((col, row));
        }
    }
    if points.is_empty() {
        return Err(GeometryError::EmptyGrid);
    }
    Ok(WorkplaneGrid {
        origin: bounds.min,
        spacing,
        height: workplane_height,
        columns,
        rows,
        points,
        cells,
    })
}

/// True iff the open segment `from`-`to` passes through any object box.
/// Endpoints resting on a box face do not count.
pub fn occludes(room: &ValidatedRoom, from: Vec3, to: Vec3) -> bool {
    room.model
        .objects
        .iter()
        .any(|o| segment_hits_box(from, to, o))
}

fn segment_hits_box(from: Vec3, to: Vec3, object: &FurnitureObject) -> bool {
    let lo = object.footprint.min.extend(0.0);
    let hi = object.footprint.max.extend(object.height);
    let d = to - from;
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for axis in 0..3 {
        let origin = from.component(axis);
        let dir = d.component(axis);
        let (min, max) = (lo.component(axis), hi.component(axis));
        if dir.abs() <= f64::EPSILON {
            if origin < min || origin > max {
                return false;
            }
            continue;
        }
        let a = (min - origin) / dir;
        let b = (max - origin) / dir;
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    let enter = t0.max(0.0);
    let exit = t1.min(1.0);
    // Grazing an edge or face counts; the slack absorbs rounding in the
    // slab parameters so such contacts do not flicker.
    const T_EPS: f64 = 1e-12;
    enter <= exit + T_EPS && exit > T_EPS && enter < 1.0 - T_EPS
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect_room() -> ValidatedRoom {
        validate_room(&RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Bedroom)).unwrap()
    }

    fn l_room() -> ValidatedRoom {
        let outline = [(0., 0.), (4., 0.), (4., 2.), (2., 2.), (2., 4.), (0., 4.)]
            .iter()
            .map(|&(x, y)| Point2::new(x, y))
            .collect();
        let model = RoomModel::with_reflectances(outline, 2.5, RoomFunction::LivingRoom, 0.2, 0.7, 0.5);
        validate_room(&model).unwrap()
    }

    #[test]
    fn rectangle_is_valid() {
        let room = rect_room();
        assert_eq!(room.area(), 12.0);
        assert_eq!(room.walls().len(), 4);
        assert_eq!(room.perimeter(), 14.0);
    }

    #[test]
    fn bow_tie_is_rejected() {
        let outline = vec![
            Point2::new(0., 0.),
            Point2::new(2., 2.),
            Point2::new(2., 0.),
            Point2::new(0., 2.),
        ];
        let model = RoomModel::with_reflectances(outline, 2.5, RoomFunction::Bedroom, 0.2, 0.7, 0.5);
        let err = validate_room(&model).unwrap_err();
        assert_eq!(err.name(), "SelfIntersectingOutline");
    }

    #[test]
    fn bed_outside_is_named() {
        let model = RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Bedroom).with_object(
            FurnitureObject::new(ObjectKind::Bed, Rect::from_bounds(3.0, 1.0, 4.5, 2.0), 0.5),
        );
        assert_eq!(
            validate_room(&model).unwrap_err(),
            GeometryError::ObjectOutsideRoom {
                index: 0,
                kind: ObjectKind::Bed
            }
        );
    }

    #[test]
    fn object_across_notch_is_outside() {
        // Inside the L's bounding box but spanning the missing quadrant.
        let mut model = l_room().into_model();
        model.objects.push(FurnitureObject::new(
            ObjectKind::Desk,
            Rect::from_bounds(1.0, 1.0, 3.0, 3.0),
            0.7,
        ));
        assert_eq!(validate_room(&model).unwrap_err().name(), "ObjectOutsideRoom");
        // Touching the reflex corner from inside is fine.
        model.objects[0].footprint = Rect::from_bounds(1.0, 1.0, 2.0, 2.0);
        assert!(validate_room(&model).is_ok());
    }

    #[test]
    fn degenerate_and_misoriented_outlines() {
        let two = RoomModel::with_reflectances(
            vec![Point2::new(0., 0.), Point2::new(1., 0.)],
            2.5,
            RoomFunction::Bedroom,
            0.2,
            0.7,
            0.5,
        );
        assert_eq!(validate_room(&two).unwrap_err().name(), "DegenerateOutline");

        let colinear = RoomModel::with_reflectances(
            vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(2., 0.)],
            2.5,
            RoomFunction::Bedroom,
            0.2,
            0.7,
            0.5,
        );
        assert!(validate_room(&colinear).is_err());

        let mut cw = RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Bedroom);
        cw.outline.reverse();
        assert_eq!(validate_room(&cw).unwrap_err(), GeometryError::ClockwiseOutline);
    }

    #[test]
    fn heights_are_checked() {
        let mut model = RoomModel::rectangle(4.0, 3.0, 0.0, RoomFunction::Bedroom);
        assert_eq!(validate_room(&model).unwrap_err().name(), "NonPositiveHeight");
        model.ceiling_height = 2.5;
        model.objects.push(FurnitureObject::new(
            ObjectKind::Closet,
            Rect::from_bounds(0.0, 0.0, 1.0, 1.0),
            -1.0,
        ));
        assert_eq!(validate_room(&model).unwrap_err().name(), "NonPositiveHeight");
        model.objects[0].height = 2.6;
        assert_eq!(validate_room(&model).unwrap_err().name(), "ObjectTooTall");
        model.objects[0].height = 2.5;
        assert!(validate_room(&model).is_ok());
    }

    #[test]
    fn surfaces_are_checked() {
        let mut model = RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Bedroom);
        model.surfaces[0].reflectance = 1.2;
        assert_eq!(validate_room(&model).unwrap_err().name(), "InvalidSurfaces");
        let mut model = RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Bedroom);
        model.surfaces.pop();
        assert_eq!(validate_room(&model).unwrap_err().name(), "InvalidSurfaces");
    }

    #[test]
    fn surface_kind_text_form() {
        assert_eq!("wall[3]".parse::<SurfaceKind>().unwrap(), SurfaceKind::Wall(3));
        assert_eq!(SurfaceKind::Wall(12).to_string(), "wall[12]");
        assert!("wall[x]".parse::<SurfaceKind>().is_err());
    }

    #[test]
    fn containment() {
        let room = rect_room();
        assert!(point_in_room(&room, Point2::new(2.0, 1.5)));
        assert!(!point_in_room(&room, Point2::new(5.0, 1.5)));
        assert!(point_in_room(&room, Point2::new(4.0, 1.5)));
        assert!(point_in_room(&room, Point2::new(0.0, 0.0)));

        let l = l_room();
        assert!(!point_in_room(&l, Point2::new(3.0, 3.0)));
        assert!(point_in_room(&l, Point2::new(1.0, 3.0)));
        assert!(point_in_room(&l, Point2::new(3.0, 1.0)));
    }

    #[test]
    fn walls_of_rectangle_and_l() {
        let room = rect_room();
        let walls = wall_segments(&room);
        assert_eq!(walls[0].inward_normal, Point2::new(0.0, 1.0));
        assert_eq!(walls[0].length, 4.0);
        assert_eq!(walls[2].inward_normal, Point2::new(0.0, -1.0));
        assert_eq!(wall_segments(&l_room()).len(), 6);
    }

    #[test]
    fn grid_examples() {
        let room = rect_room();
        let grid = workplane_grid(&room, 1.0, 0.8).unwrap();
        assert_eq!(grid.len(), 12);
        for (k, p) in grid.points.iter().enumerate() {
            let (i, j) = (k % 4, k / 4);
            assert_eq!(*p, Vec3::new(0.5 + i as f64, 0.5 + j as f64, 0.8));
        }

        let bed = room.model().clone().with_object(FurnitureObject::new(
            ObjectKind::Bed,
            Rect::from_bounds(0.0, 0.0, 2.0, 1.6),
            0.5,
        ));
        let bed = validate_room(&bed).unwrap();
        assert_eq!(workplane_grid(&bed, 1.0, 0.8).unwrap().len(), 12);

        let closet = room.model().clone().with_object(FurnitureObject::new(
            ObjectKind::Closet,
            Rect::from_bounds(0.0, 0.0, 1.0, 1.0),
            2.0,
        ));
        let closet = validate_room(&closet).unwrap();
        let grid = workplane_grid(&closet, 1.0, 0.8).unwrap();
        assert_eq!(grid.len(), 11);
        assert!(!grid.points.contains(&Vec3::new(0.5, 0.5, 0.8)));
    }

    #[test]
    fn grid_errors() {
        let room = rect_room();
        assert_eq!(
            workplane_grid(&room, 0.0, 0.8).unwrap_err().name(),
            "InvalidParameter"
        );
        assert_eq!(
            workplane_grid(&room, 1.0, 2.5).unwrap_err().name(),
            "InvalidParameter"
        );
        // A pitch wider than the room leaves no cell center at all.
        assert_eq!(
            workplane_grid(&l_room(), 10.0, 0.8).unwrap_err(),
            GeometryError::EmptyGrid
        );
    }

    #[test]
    fn occlusion_examples() {
        let room = rect_room();
        let a = Vec3::new(2.0, 1.5, 2.5);
        let b = Vec3::new(2.0, 1.5, 0.8);
        assert!(!occludes(&room, a, b));

        let boxed = |h: f64| {
            validate_room(&room.model().clone().with_object(FurnitureObject::new(
                ObjectKind::Other,
                Rect::from_bounds(1.5, 1.0, 2.5, 2.0),
                h,
            )))
            .unwrap()
        };
        assert!(occludes(&boxed(2.0), a, b));
        assert!(!occludes(&boxed(0.5), a, b));
        // Target resting exactly on the top face.
        assert!(!occludes(&boxed(0.8), a, b));
        assert!(!occludes(&boxed(0.8), b, a));
    }

    #[test]
    fn rect_segment_distances() {
        let r = Rect::from_bounds(1.0, 1.4, 2.0, 3.0);
        let north = (Point2::new(4.0, 3.0), Point2::new(0.0, 3.0));
        assert_eq!(rect_segment_distance(&r, north.0, north.1), 0.0);
        let west = (Point2::new(0.0, 3.0), Point2::new(0.0, 0.0));
        assert!((rect_segment_distance(&r, west.0, west.1) - 1.0).abs() < 1e-12);
        let south = (Point2::new(0.0, 0.0), Point2::new(4.0, 0.0));
        assert!((rect_segment_distance(&r, south.0, south.1) - 1.4).abs() < 1e-12);
    }
}
