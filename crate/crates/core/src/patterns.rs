//! Lighting design patterns per room function, room analysis for furniture
//! anchors, and pattern matching.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    point_in_room, ObjectKind, Point2, RoomFunction, ValidatedRoom, WallSegment,
};
use crate::photometry::LuminaireSpec;

/// Footprint-to-wall distance under which an object counts as against the wall, m.
pub const ADJACENCY_THRESHOLD: f64 = 0.05;

const DEFAULT_LIBRARY: &str = include_str!("../data/default_library.json");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    #[error("pattern id `{0}` appears more than once")]
    DuplicatePatternId(String),
    #[error("malformed pattern field `{field}`: {reason}")]
    MalformedPattern { field: String, reason: String },
    #[error("no pattern applies to this {function:?} room")]
    NoApplicablePattern { function: RoomFunction },
}

impl PatternError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::DuplicatePatternId(_) => "DuplicatePatternId",
            Self::MalformedPattern { .. } => "MalformedPattern",
            Self::NoApplicablePattern { .. } => "NoApplicablePattern",
        }
    }
}

/// Furniture kinds that parameterize placement rules.
pub const ANCHOR_KINDS: [ObjectKind; 5] = [
    ObjectKind::Bed,
    ObjectKind::Tv,
    ObjectKind::Desk,
    ObjectKind::Dresser,
    ObjectKind::Closet,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub object_index: usize,
    pub kind: ObjectKind,
    pub center: Point2,
    /// Nearest wall; lowest index wins ties.
    pub wall_index: usize,
    pub wall_distance: f64,
    pub adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomAnalysis {
    pub anchors: Vec<Anchor>,
    pub free_ceiling_centroid: Point2,
    pub function: RoomFunction,
    pub walls: Vec<WallSegment>,
}

impl RoomAnalysis {
    /// First anchor of the given kind, in object order.
    pub fn anchor(&self, kind: ObjectKind) -> Option<&Anchor> {
        self.anchors.iter().find(|a| a.kind == kind)
    }

    pub fn has_anchor(&self, kind: ObjectKind) -> bool {
        self.anchor(kind).is_some()
    }
}

/// Finds furniture anchors and the free ceiling point of a room.
pub fn analyze_room(room: &ValidatedRoom) -> RoomAnalysis {
    let walls = room.walls().to_vec();
    let anchors = room
        .objects()
        .iter()
        .enumerate()
        .filter(|(_, o)| ANCHOR_KINDS.contains(&o.kind))
        .map(|(object_index, o)| {
            let (wall_index, wall_distance) = walls
                .iter()
                .map(|w| (w.index, w.distance_to_rect(&o.footprint)))
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            Anchor {
                object_index,
                kind: o.kind,
                center: o.footprint.center(),
                wall_index,
                wall_distance,
                adjacent: wall_distance <= ADJACENCY_THRESHOLD,
            }
        })
        .collect();
    RoomAnalysis {
        anchors,
        free_ceiling_centroid: ceiling_point(room),
        function: room.function(),
        walls,
    }
}

fn polygon_centroid(outline: &[Point2]) -> Point2 {
    let n = outline.len();
    let mut area2 = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let a = outline[i];
        let b = outline[(i + 1) % n];
        let cross = a.cross(b);
        area2 += cross;
        cx += (a.x + b.x) * cross;
        cy += (a.y + b.y) * cross;
    }
    Point2::new(cx / (3.0 * area2), cy / (3.0 * area2))
}

/// Area centroid of the outline, or the nearest interior lattice point when
/// the centroid of a non-convex outline falls outside it.
fn ceiling_point(room: &ValidatedRoom) -> Point2 {
    let outline = &room.model().outline;
    let centroid = polygon_centroid(outline);
    if point_in_room(room, centroid) {
        return centroid;
    }
    let bounds = room.bounds();
    let mut spacing = 0.25;
    while spacing > 1e-3 {
        let cols = (bounds.width() / spacing).ceil() as usize;
        let rows = (bounds.depth() / spacing).ceil() as usize;
        let mut best: Option<(f64, Point2)> = None;
        for row in 0..rows {
            for col in 0..cols {
                let p = Point2::new(
                    bounds.min.x + (col as f64 + 0.5) * spacing,
                    bounds.min.y + (row as f64 + 0.5) * spacing,
                );
                if !point_in_room(room, p) {
                    continue;
                }
                let d = p.distance(centroid);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, p));
                }
            }
        }
        if let Some((_, p)) = best {
            return p;
        }
        spacing *= 0.5;
    }
    outline[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternFamily {
    CeilingCentral,
    FlankObject,
    AboveObject,
    GuidelineBedroom,
}

/// Role a fixture plays inside a pattern; selects its default luminaire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureRole {
    Ceiling,
    Wall,
    Table,
}

/// Numeric parameters of a placement rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementRule {
    /// Flank: gap beyond the object's half-width. Guideline: outward shift
    /// of the table lamps from the bed corners.
    #[serde(default)]
    pub offset: f64,
    /// Height of wall or table fixtures; ceiling fixtures sit on the ceiling.
    #[serde(default)]
    pub mount_height: Option<f64>,
    /// Downward tilt of wall fixtures from the horizontal inward normal.
    #[serde(default)]
    pub tilt_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetLux {
    pub ambient: f64,
    #[serde(default)]
    pub task: Option<f64>,
}

impl Default for TargetLux {
    fn default() -> Self {
        Self {
            ambient: 100.0,
            task: Some(300.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPattern {
    pub id: String,
    pub family: PatternFamily,
    pub target_function: RoomFunction,
    #[serde(default)]
    pub preconditions: Vec<ObjectKind>,
    pub placement: PlacementRule,
    pub default_spec: BTreeMap<FixtureRole, LuminaireSpec>,
    pub target_lux: TargetLux,
}

impl DesignPattern {
    /// Object kind the placement rule is anchored on, if any.
    pub fn anchor_kind(&self) -> Option<ObjectKind> {
        match self.family {
            PatternFamily::CeilingCentral => None,
            _ => self.preconditions.first().copied(),
        }
    }

    pub fn required_roles(&self) -> &'static [FixtureRole] {
        match self.family {
            PatternFamily::CeilingCentral => &[FixtureRole::Ceiling],
            PatternFamily::FlankObject | PatternFamily::AboveObject => &[FixtureRole::Wall],
            PatternFamily::GuidelineBedroom => &[FixtureRole::Ceiling, FixtureRole::Table],
        }
    }

    pub fn spec(&self, role: FixtureRole) -> &LuminaireSpec {
        &self.default_spec[&role]
    }

    fn check(&self, at: usize) -> Result<(), PatternError> {
        let malformed = |field: &str, reason: String| PatternError::MalformedPattern {
            field: format!("patterns[{at}].{field}"),
            reason,
        };
        if self.id.trim().is_empty() {
            return Err(malformed("id", "must not be empty".into()));
        }
        match self.family {
            PatternFamily::FlankObject | PatternFamily::AboveObject => {
                if self.preconditions.len() != 1 {
                    return Err(malformed(
                        "preconditions",
                        format!("{:?} needs exactly one anchor kind", self.family),
                    ));
                }
            }
            PatternFamily::GuidelineBedroom => {
                if self.preconditions.is_empty() {
                    return Err(malformed("preconditions", "guideline pattern needs a bed-like anchor".into()));
                }
            }
            PatternFamily::CeilingCentral => {}
        }
        if let Some(kind) = self.preconditions.iter().find(|k| !ANCHOR_KINDS.contains(k)) {
            return Err(malformed("preconditions", format!("{kind} is not an anchor kind")));
        }
        for role in self.required_roles() {
            let spec = self
                .default_spec
                .get(role)
                .ok_or_else(|| malformed("default_spec", format!("missing {role:?} luminaire")))?;
            spec.validate()
                .map_err(|e| malformed("default_spec", e.to_string()))?;
        }
        let p = &self.placement;
        if !(p.offset >= 0.0) || !p.offset.is_finite() {
            return Err(malformed("placement.offset", "must be non-negative".into()));
        }
        if !(0.0..90.0).contains(&p.tilt_deg) {
            return Err(malformed("placement.tilt_deg", "must be in [0, 90)".into()));
        }
        if self.family != PatternFamily::CeilingCentral {
            match p.mount_height {
                Some(h) if h > 0.0 && h.is_finite() => {}
                _ => return Err(malformed("placement.mount_height", "must be positive".into())),
            }
        }
        if !(self.target_lux.ambient >= 0.0) || self.target_lux.task.is_some_and(|t| !(t >= 0.0)) {
            return Err(malformed("target_lux", "targets must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternLibrary {
    pub version: String,
    pub patterns: Vec<DesignPattern>,
}

impl PatternLibrary {
    /// The built-in residential library.
    pub fn default_library() -> Self {
        load_pattern_library(DEFAULT_LIBRARY).expect("embedded library is valid")
    }

    pub fn default_document() -> &'static str {
        DEFAULT_LIBRARY
    }

    pub fn get(&self, id: &str) -> Option<&DesignPattern> {
        self.patterns.iter().find(|p| p.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("library serializes")
    }
}

/// Parses and checks a pattern library document.
pub fn load_pattern_library(document: &str) -> Result<PatternLibrary, PatternError> {
    let value: serde_json::Value =
        serde_json::from_str(document).map_err(|e| PatternError::MalformedPattern {
            field: "document".into(),
            reason: e.to_string(),
        })?;
    let version = match value.get("version") {
        Some(serde_json::Value::String(v)) => v.clone(),
        _ => {
            return Err(PatternError::MalformedPattern {
                field: "version".into(),
                reason: "expected a string".into(),
            })
        }
    };
    let raw = match value.get("patterns") {
        Some(serde_json::Value::Array(items)) => items,
        _ => {
            return Err(PatternError::MalformedPattern {
                field: "patterns".into(),
                reason: "expected a list".into(),
            })
        }
    };
    if raw.is_empty() {
        return Err(PatternError::MalformedPattern {
            field: "patterns".into(),
            reason: "library must contain at least one pattern".into(),
        });
    }
    let mut patterns = Vec::with_capacity(raw.len());
    let mut seen = HashSet::new();
    for (i, item) in raw.iter().enumerate() {
        let pattern: DesignPattern =
            serde_json::from_value(item.clone()).map_err(|e| PatternError::MalformedPattern {
                field: format!("patterns[{i}]"),
                reason: e.to_string(),
            })?;
        pattern.check(i)?;
        if !seen.insert(pattern.id.clone()) {
            return Err(PatternError::DuplicatePatternId(pattern.id));
        }
        patterns.push(pattern);
    }
    Ok(PatternLibrary { version, patterns })
}

/// Patterns for the analysed room's function whose anchor preconditions are
/// all present, in library order.
pub fn match_patterns(
    analysis: &RoomAnalysis,
    library: &PatternLibrary,
) -> Result<Vec<DesignPattern>, PatternError> {
    let matched: Vec<DesignPattern> = library
        .patterns
        .iter()
        .filter(|p| p.target_function == analysis.function)
        .filter(|p| p.preconditions.iter().all(|&k| analysis.has_anchor(k)))
        .cloned()
        .collect();
    if matched.is_empty() {
        return Err(PatternError::NoApplicablePattern {
            function: analysis.function,
        });
    }
    Ok(matched)
}
