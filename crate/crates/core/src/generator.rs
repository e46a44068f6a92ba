//! Turns matched patterns into concrete fixture layouts, scores them on the
//! workplane and ranks the candidates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ObjectKind, Point2, ValidatedRoom, Vec3, DEFAULT_WORKPLANE_HEIGHT, EPS};
use crate::patterns::{
    analyze_room, match_patterns, Anchor, DesignPattern, FixtureRole, PatternError, PatternFamily,
    PatternLibrary, RoomAnalysis, TargetLux,
};
use crate::photometry::{illuminance_field, PhotometryError, PlacedFixture, AXIS_TOLERANCE};

pub const AMBIENT_ZONE: &str = "ambient";
pub const TASK_ZONE: &str = "task";

/// Horizontal radius around a task fixture's aim point that counts as its task area, m.
pub const TASK_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("pattern `{pattern}` needs a {kind} anchor")]
    AnchorMissing { pattern: String, kind: ObjectKind },
    #[error("pattern `{pattern}`: flanking positions collapse onto one point of wall {wall}")]
    PlacementOutsideWall { pattern: String, wall: usize },
    #[error("pattern `{pattern}`: fixture {fixture} falls outside the room")]
    PlacementOutsideRoom { pattern: String, fixture: usize },
    #[error("pattern `{pattern}` targets {expected:?} rooms, not {actual:?}")]
    FunctionMismatch {
        pattern: String,
        expected: crate::geometry::RoomFunction,
        actual: crate::geometry::RoomFunction,
    },
    #[error("fixture {index} is outside the room volume")]
    FixtureOutsideRoom { index: usize },
    #[error("fixture {index}: {reason}")]
    InvalidFixture { index: usize, reason: String },
    #[error("zone `{zone}`: {reason}")]
    InvalidZones { zone: String, reason: String },
    #[error("{designs} designs but {scores} scores")]
    LengthMismatch { designs: usize, scores: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Photometry(#[from] PhotometryError),
}

impl GeneratorError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::AnchorMissing { .. } => "AnchorMissing",
            Self::PlacementOutsideWall { .. } => "PlacementOutsideWall",
            Self::PlacementOutsideRoom { .. } => "PlacementOutsideRoom",
            Self::FunctionMismatch { .. } => "FunctionMismatch",
            Self::FixtureOutsideRoom { .. } => "FixtureOutsideRoom",
            Self::InvalidFixture { .. } => "InvalidFixture",
            Self::InvalidZones { .. } => "InvalidZones",
            Self::LengthMismatch { .. } => "LengthMismatch",
            Self::Pattern(e) => e.name(),
            Self::Photometry(e) => e.name(),
        }
    }
}

/// A set of placed fixtures produced from one pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightingDesign {
    pub id: String,
    pub pattern_id: String,
    /// Reference to the source room (a workspace id or a file path).
    pub room: String,
    pub fixtures: Vec<PlacedFixture>,
    pub zones: BTreeMap<String, Vec<usize>>,
}

impl LightingDesign {
    pub fn levels(&self) -> Vec<f64> {
        self.fixtures.iter().map(|f| f.level).collect()
    }

    pub fn zone(&self, name: &str) -> Option<&[usize]> {
        self.zones.get(name).map(Vec::as_slice)
    }

    /// Recomputes `zones` from the fixtures' zone labels.
    pub fn rebuild_zones(&mut self) {
        self.zones = zones_of(&self.fixtures);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("design serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn zones_of(fixtures: &[PlacedFixture]) -> BTreeMap<String, Vec<usize>> {
    let mut zones: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, f) in fixtures.iter().enumerate() {
        zones.entry(f.zone.clone()).or_default().push(i);
    }
    zones
}

/// Checks fixture containment, axes, levels and the zone partition.
pub fn validate_design(design: &LightingDesign, room: &ValidatedRoom) -> Result<(), GeneratorError> {
    for (index, f) in design.fixtures.iter().enumerate() {
        f.spec.validate()?;
        let finite = [f.position.x, f.position.y, f.position.z].iter().all(|v| v.is_finite());
        if !finite || !room.contains_point(f.position) {
            return Err(GeneratorError::FixtureOutsideRoom { index });
        }
        if (f.axis.norm() - 1.0).abs() > AXIS_TOLERANCE {
            return Err(GeneratorError::InvalidFixture {
                index,
                reason: "axis must have unit length".into(),
            });
        }
        if !(0.0..=1.0).contains(&f.level) {
            return Err(GeneratorError::InvalidFixture {
                index,
                reason: format!("level {} outside [0, 1]", f.level),
            });
        }
    }
    let mut owner = vec![None::<&str>; design.fixtures.len()];
    for (zone, members) in &design.zones {
        for &i in members {
            let slot = owner.get_mut(i).ok_or_else(|| GeneratorError::InvalidZones {
                zone: zone.clone(),
                reason: format!("fixture {i} does not exist"),
            })?;
            if let Some(other) = slot {
                return Err(GeneratorError::InvalidZones {
                    zone: zone.clone(),
                    reason: format!("fixture {i} already belongs to `{other}`"),
                });
            }
            *slot = Some(zone);
        }
    }
    Ok(())
}

fn wall_axis(inward: Point2, tilt_deg: f64) -> Vec3 {
    let tilt = tilt_deg.to_radians();
    Vec3::new(inward.x * tilt.cos(), inward.y * tilt.cos(), -tilt.sin())
}

fn require_anchor<'a>(pattern: &DesignPattern, analysis: &'a RoomAnalysis) -> Result<&'a Anchor, GeneratorError> {
    let kind = pattern.anchor_kind().expect("anchored family");
    analysis.anchor(kind).ok_or_else(|| GeneratorError::AnchorMissing {
        pattern: pattern.id.clone(),
        kind,
    })
}

/// Places the fixtures of one pattern in the room.
pub fn instantiate_pattern(
    pattern: &DesignPattern,
    analysis: &RoomAnalysis,
    room: &ValidatedRoom,
) -> Result<LightingDesign, GeneratorError> {
    if pattern.target_function != analysis.function {
        return Err(GeneratorError::FunctionMismatch {
            pattern: pattern.id.clone(),
            expected: pattern.target_function,
            actual: analysis.function,
        });
    }
    if let Some(&kind) = pattern.preconditions.iter().find(|&&k| !analysis.has_anchor(k)) {
        return Err(GeneratorError::AnchorMissing {
            pattern: pattern.id.clone(),
            kind,
        });
    }

    let rule = &pattern.placement;
    let ceiling = || {
        PlacedFixture::new(
            pattern.spec(FixtureRole::Ceiling).clone(),
            analysis.free_ceiling_centroid.extend(room.ceiling_height()),
            Vec3::DOWN,
            AMBIENT_ZONE,
        )
    };
    let mut fixtures = Vec::new();
    match pattern.family {
        PatternFamily::CeilingCentral => fixtures.push(ceiling()),
        PatternFamily::FlankObject => {
            let anchor = require_anchor(pattern, analysis)?;
            let wall = &analysis.walls[anchor.wall_index];
            let footprint = room.objects()[anchor.object_index].footprint;
            let u = wall.direction();
            let half_width = 0.5 * (u.x.abs() * footprint.width() + u.y.abs() * footprint.depth());
            let s = wall.along(anchor.center);
            let reach = half_width + rule.offset;
            let lo = (s - reach).clamp(0.0, wall.length);
            let hi = (s + reach).clamp(0.0, wall.length);
            if (hi - lo).abs() <= EPS {
                return Err(GeneratorError::PlacementOutsideWall {
                    pattern: pattern.id.clone(),
                    wall: wall.index,
                });
            }
            let z = rule.mount_height.expect("checked at load");
            for along in [lo, hi] {
                fixtures.push(PlacedFixture::new(
                    pattern.spec(FixtureRole::Wall).clone(),
                    wall.point_at(along).extend(z),
                    wall_axis(wall.inward_normal, rule.tilt_deg),
                    TASK_ZONE,
                ));
            }
        }
        PatternFamily::AboveObject => {
            let anchor = require_anchor(pattern, analysis)?;
            let wall = &analysis.walls[anchor.wall_index];
            let along = wall.along(anchor.center).clamp(0.0, wall.length);
            fixtures.push(PlacedFixture::new(
                pattern.spec(FixtureRole::Wall).clone(),
                wall.point_at(along).extend(rule.mount_height.expect("checked at load")),
                wall_axis(wall.inward_normal, rule.tilt_deg),
                TASK_ZONE,
            ));
        }
        PatternFamily::GuidelineBedroom => {
            fixtures.push(ceiling());
            let anchor = require_anchor(pattern, analysis)?;
            let wall = &analysis.walls[anchor.wall_index];
            let footprint = room.objects()[anchor.object_index].footprint;
            // Headboard corners: the two footprint corners closest to the anchor wall.
            let mut corners = footprint.corners().to_vec();
            corners.sort_by(|a, b| wall.distance_to_point(*a).total_cmp(&wall.distance_to_point(*b)));
            let mut head = [corners[0], corners[1]];
            head.sort_by(|a, b| wall.along(*a).total_cmp(&wall.along(*b)));
            let u = wall.direction();
            let z = rule.mount_height.expect("checked at load");
            for (corner, sign) in head.into_iter().zip([-1.0, 1.0]) {
                let s = wall.along(corner);
                let shifted = (s + sign * rule.offset).clamp(0.0, wall.length);
                fixtures.push(PlacedFixture::new(
                    pattern.spec(FixtureRole::Table).clone(),
                    (corner + u * (shifted - s)).extend(z),
                    Vec3::DOWN,
                    TASK_ZONE,
                ));
            }
        }
    }

    for (fixture, f) in fixtures.iter().enumerate() {
        if !room.contains_point(f.position) {
            return Err(GeneratorError::PlacementOutsideRoom {
                pattern: pattern.id.clone(),
                fixture,
            });
        }
    }
    let zones = zones_of(&fixtures);
    Ok(LightingDesign {
        id: pattern.id.clone(),
        pattern_id: pattern.id.clone(),
        room: String::new(),
        fixtures,
        zones,
    })
}

/// Deterministic design id for a seed and pattern.
pub fn design_id(seed: u64, pattern_id: &str) -> String {
    format!("s{seed}-{pattern_id}")
}

/// One design per matched pattern, in library order.
pub fn generate_designs(
    room: &ValidatedRoom,
    room_ref: &str,
    library: &PatternLibrary,
    seed: u64,
) -> Result<Vec<LightingDesign>, GeneratorError> {
    let analysis = analyze_room(room);
    let matched = match_patterns(&analysis, library)?;
    matched
        .iter()
        .map(|pattern| {
            let mut design = instantiate_pattern(pattern, &analysis, room)?;
            design.id = design_id(seed, &pattern.id);
            design.room = room_ref.to_string();
            Ok(design)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignScore {
    pub average_lux: f64,
    pub min_lux: f64,
    pub max_lux: f64,
    pub uniformity: f64,
    pub task_lux: Option<f64>,
    pub meets_ambient: bool,
    pub meets_task: bool,
    pub scalar_score: f64,
}

impl DesignScore {
    /// `[meets_ambient] + [meets_task] + uniformity`, in [0, 3].
    pub fn combine(meets_ambient: bool, meets_task: bool, uniformity: f64) -> f64 {
        f64::from(u8::from(meets_ambient)) + f64::from(u8::from(meets_task)) + uniformity
    }
}

/// Workplane point a fixture aims at: where its axis meets the workplane,
/// or its nadir when the axis does not reach it.
pub fn aim_point(fixture: &PlacedFixture, workplane_height: f64) -> Point2 {
    let drop = workplane_height - fixture.position.z;
    if fixture.axis.z < -EPS && drop < 0.0 {
        let t = drop / fixture.axis.z;
        (fixture.position + fixture.axis * t).xy()
    } else {
        fixture.position.xy()
    }
}

/// Scores a design at full output against the given targets.
pub fn evaluate_design(
    design: &LightingDesign,
    room: &ValidatedRoom,
    targets: &TargetLux,
    spacing: f64,
) -> Result<DesignScore, GeneratorError> {
    let dims = vec![1.0; design.fixtures.len()];
    let field = illuminance_field(&design.fixtures, &dims, room, spacing, DEFAULT_WORKPLANE_HEIGHT)?;
    let aims: Vec<Point2> = design
        .zone(TASK_ZONE)
        .unwrap_or_default()
        .iter()
        .map(|&i| aim_point(&design.fixtures[i], DEFAULT_WORKPLANE_HEIGHT))
        .collect();
    let task_lux = if aims.is_empty() {
        None
    } else {
        field.mean_near(&aims, TASK_RADIUS)
    };
    let stats = field.stats;
    let meets_ambient = stats.average >= targets.ambient;
    let meets_task = matches!((targets.task, task_lux), (Some(target), Some(lux)) if lux >= target);
    Ok(DesignScore {
        average_lux: stats.average,
        min_lux: stats.min,
        max_lux: stats.max,
        uniformity: stats.uniformity,
        task_lux,
        meets_ambient,
        meets_task,
        scalar_score: DesignScore::combine(meets_ambient, meets_task, stats.uniformity),
    })
}

/// A design with its score, as returned by [`rank_designs`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDesign {
    pub design: LightingDesign,
    pub score: DesignScore,
}

/// Orders by descending score, then ascending pattern id.
pub fn rank_designs(
    designs: Vec<LightingDesign>,
    scores: Vec<DesignScore>,
) -> Result<Vec<RankedDesign>, GeneratorError> {
    if designs.len() != scores.len() {
        return Err(GeneratorError::LengthMismatch {
            designs: designs.len(),
            scores: scores.len(),
        });
    }
    let mut ranked: Vec<RankedDesign> = designs
        .into_iter()
        .zip(scores)
        .map(|(design, score)| RankedDesign { design, score })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .scalar_score
            .total_cmp(&a.score.scalar_score)
            .then_with(|| a.design.pattern_id.cmp(&b.design.pattern_id))
    });
    Ok(ranked)
}

/// Generates, scores (with each pattern's own targets) and ranks designs.
pub fn generate_ranked(
    room: &ValidatedRoom,
    room_ref: &str,
    library: &PatternLibrary,
    seed: u64,
    spacing: f64,
) -> Result<Vec<RankedDesign>, GeneratorError> {
    let designs = generate_designs(room, room_ref, library, seed)?;
    let scores = designs
        .iter()
        .map(|d| {
            let targets = library
                .get(&d.pattern_id)
                .map(|p| p.target_lux)
                .unwrap_or_default();
            evaluate_design(d, room, &targets, spacing)
        })
        .collect::<Result<Vec<_>, _>>()?;
    rank_designs(designs, scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{validate_room, FurnitureObject, Rect, RoomFunction, RoomModel};
    use crate::photometry::{LuminaireSpec, Mount};

    fn bedroom(objects: Vec<FurnitureObject>) -> ValidatedRoom {
        let mut model = RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Bedroom);
        model.objects = objects;
        validate_room(&model).unwrap()
    }

    fn bed() -> FurnitureObject {
        FurnitureObject::new(ObjectKind::Bed, Rect::from_bounds(1.0, 1.4, 2.0, 3.0), 0.5)
    }

    fn tv() -> FurnitureObject {
        FurnitureObject::new(ObjectKind::Tv, Rect::from_bounds(1.5, 0.0, 2.5, 0.4), 1.0)
            .with_facing(Point2::new(0.0, 1.0))
    }

    fn instantiate(room: &ValidatedRoom, id: &str) -> Result<LightingDesign, GeneratorError> {
        let lib = PatternLibrary::default_library();
        instantiate_pattern(lib.get(id).unwrap(), &analyze_room(room), room)
    }

    #[test]
    fn flank_bed_positions() {
        let room = bedroom(vec![bed()]);
        let d = instantiate(&room, "flank_bed").unwrap();
        assert_eq!(d.fixtures.len(), 2);
        let mut xs: Vec<f64> = d.fixtures.iter().map(|f| f.position.x).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] - 0.7).abs() < 1e-12 && (xs[1] - 2.3).abs() < 1e-12, "{xs:?}");
        for f in &d.fixtures {
            assert!((f.position.y - 3.0).abs() < 1e-12);
            assert_eq!(f.position.z, 1.2);
            assert!((f.axis.norm() - 1.0).abs() < 1e-12);
            assert!(f.axis.y < 0.0 && f.axis.z < 0.0);
            assert_eq!(f.zone, TASK_ZONE);
        }
    }

    #[test]
    fn ceiling_central_in_empty_room() {
        let d = instantiate(&bedroom(vec![]), "ceiling_central").unwrap();
        assert_eq!(d.fixtures.len(), 1);
        assert_eq!(d.fixtures[0].position, Vec3::new(2.0, 1.5, 2.5));
        assert_eq!(d.fixtures[0].axis, Vec3::DOWN);
        assert_eq!(d.zone(AMBIENT_ZONE), Some(&[0][..]));
    }

    #[test]
    fn above_tv_on_south_wall() {
        let d = instantiate(&bedroom(vec![tv()]), "above_tv").unwrap();
        let p = d.fixtures[0].position;
        assert!((p.x - 2.0).abs() < 1e-12 && p.y.abs() < 1e-12 && p.z == 1.8, "{p:?}");
    }

    #[test]
    fn guideline_places_ceiling_and_two_tables() {
        let room = bedroom(vec![bed()]);
        let d = instantiate(&room, "guideline_bedroom").unwrap();
        assert_eq!(d.fixtures.len(), 3);
        assert_eq!(d.fixtures[0].spec.mount, Mount::Ceiling);
        let tables: Vec<Vec3> = d.fixtures[1..].iter().map(|f| f.position).collect();
        // Head corners (1, 3) and (2, 3) pushed 0.3 m sideways along the north wall.
        assert!(tables.iter().any(|p| (p.x - 0.7).abs() < 1e-12 && (p.y - 3.0).abs() < 1e-12));
        assert!(tables.iter().any(|p| (p.x - 2.3).abs() < 1e-12 && (p.y - 3.0).abs() < 1e-12));
        assert!(tables.iter().all(|p| p.z == 0.6));
        assert_eq!(d.zone(TASK_ZONE), Some(&[1, 2][..]));
    }

    #[test]
    fn missing_anchor_and_collapsed_flank() {
        let room = bedroom(vec![]);
        assert_eq!(instantiate(&room, "flank_bed").unwrap_err().name(), "AnchorMissing");


        // Anchor bound to a wall whose extent ends well before the object:
        // both flanking positions clamp onto the wall's end point.
        let outline: Vec<Point2> = [(0., 0.), (4., 0.), (4., 2.), (2., 2.), (2., 4.), (0., 4.)]
            .iter()
            .map(|&(x, y)| Point2::new(x, y))
            .collect();
        let model = RoomModel::with_reflectances(outline, 2.5, RoomFunction::Bedroom, 0.2, 0.7, 0.5)
            .with_object(FurnitureObject::new(ObjectKind::Bed, Rect::from_bounds(0.2, 3.0, 0.6, 3.5), 0.5));
        let l_room = validate_room(&model).unwrap();
        let mut analysis = analyze_room(&l_room);
        analysis.anchors[0].wall_index = 2;
        let lib = PatternLibrary::default_library();
        assert_eq!(
            instantiate_pattern(lib.get("flank_bed").unwrap(), &analysis, &l_room).unwrap_err(),
            GeneratorError::PlacementOutsideWall {
                pattern: "flank_bed".into(),
                wall: 2
            }
        );
    }

    #[test]
    fn generation_counts_and_ids() {
        let lib = PatternLibrary::default_library();
        let room = bedroom(vec![bed(), tv()]);
        let designs = generate_designs(&room, "room-1", &lib, 7).unwrap();
        assert_eq!(designs.len(), 6);
        assert_eq!(designs[0].id, "s7-ceiling_central");
        assert!(designs.iter().all(|d| d.room == "room-1"));
        for d in &designs {
            validate_design(d, &room).unwrap();
        }
        let empty = generate_designs(&bedroom(vec![]), "r", &lib, 7).unwrap();
        assert_eq!(empty.len(), 1);

        let mut corridor = RoomModel::rectangle(4.0, 3.0, 2.5, RoomFunction::Corridor);
        corridor.objects.clear();
        let corridor = validate_room(&corridor).unwrap();
        assert_eq!(
            generate_designs(&corridor, "r", &lib, 7).unwrap_err().name(),
            "NoApplicablePattern"
        );
    }

    #[test]
    fn empty_design_scores_zero() {
        let room = bedroom(vec![]);
        let design = LightingDesign {
            id: "empty".into(),
            pattern_id: "empty".into(),
            room: String::new(),
            fixtures: vec![],
            zones: BTreeMap::new(),
        };
        let s = evaluate_design(&design, &room, &TargetLux::default(), 0.25).unwrap();
        assert_eq!(s.average_lux, 0.0);
        assert!(!s.meets_ambient && !s.meets_task);
        assert_eq!(s.scalar_score, 0.0);
    }

    #[test]
    fn score_formula() {
        assert!((DesignScore::combine(true, true, 0.6) - 2.6).abs() < 1e-15);
        assert_eq!(DesignScore::combine(false, false, 0.0), 0.0);
    }

    fn score(v: f64) -> DesignScore {
        DesignScore {
            average_lux: 0.0,
            min_lux: 0.0,
            max_lux: 0.0,
            uniformity: 0.0,
            task_lux: None,
            meets_ambient: false,
            meets_task: false,
            scalar_score: v,
        }
    }

    fn named(id: &str) -> LightingDesign {
        LightingDesign {
            id: id.into(),
            pattern_id: id.into(),
            room: String::new(),
            fixtures: vec![],
            zones: BTreeMap::new(),
        }
    }

    #[test]
    fn ranking_ties_break_on_pattern_id() {
        let ranked = rank_designs(
            vec![named("a"), named("b"), named("c")],
            vec![score(2.6), score(1.4), score(2.6)],
        )
        .unwrap();
        let order: Vec<&str> = ranked.iter().map(|r| r.design.pattern_id.as_str()).collect();
        assert_eq!(order, ["a", "c", "b"]);

        let ranked = rank_designs(vec![named("z"), named("m")], vec![score(1.0), score(1.0)]).unwrap();
        assert_eq!(ranked[0].design.pattern_id, "m");
        assert_eq!(rank_designs(vec![named("x")], vec![score(0.3)]).unwrap().len(), 1);
        assert_eq!(
            rank_designs(vec![named("x")], vec![]).unwrap_err().name(),
            "LengthMismatch"
        );
    }

    #[test]
    fn design_validation() {
        let room = bedroom(vec![]);
        let mut d = instantiate(&room, "ceiling_central").unwrap();
        validate_design(&d, &room).unwrap();
        d.fixtures[0].position = Vec3::new(5.0, 1.0, 2.0);
        assert_eq!(validate_design(&d, &room).unwrap_err().name(), "FixtureOutsideRoom");
        d.fixtures[0].position = Vec3::new(2.0, 1.0, 2.0);
        d.fixtures[0].axis = Vec3::new(0.0, 0.0, -2.0);
        assert_eq!(validate_design(&d, &room).unwrap_err().name(), "InvalidFixture");
        d.fixtures[0].axis = Vec3::DOWN;
        d.zones.insert("other".into(), vec![0]);
        assert_eq!(validate_design(&d, &room).unwrap_err().name(), "InvalidZones");
        d.rebuild_zones();
        d.fixtures[0].spec = LuminaireSpec::new("bad", -1.0, 1.0, 1.0, Mount::Ceiling);
        assert_eq!(validate_design(&d, &room).unwrap_err().name(), "InvalidSpec");
    }

    #[test]
    fn aim_point_of_tilted_wall_fixture() {
        let room = bedroom(vec![bed()]);
        let d = instantiate(&room, "flank_bed").unwrap();
        let aim = aim_point(&d.fixtures[0], 0.8);
        // 0.4 m drop at 30 degrees reaches 0.4 / tan(30) into the room.
        assert!((aim.y - (3.0 - 0.4 / 30f64.to_radians().tan())).abs() < 1e-12);
    }
}
