//! Point-by-point illuminance engine.
//!
//! Fixtures are point sources with an axially symmetric `I0 * cos^m(theta)`
//! distribution over the hemisphere around their emission axis. Workplane
//! illuminance is the inverse-square cosine-law sum of direct contributions
//! (blocked by furniture boxes) plus one uniform interreflected term.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{occludes, workplane_grid, GeometryError, Point2, ValidatedRoom, Vec3, WorkplaneGrid};

/// Maximum deviation from unit length accepted for fixture axes.
pub const AXIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhotometryError {
    #[error("sample point coincides with fixture {fixture}")]
    CoincidentPoint { fixture: usize },
    #[error("mean reflectance {0} leaves no energy to absorb")]
    ReflectanceSaturated(f64),
    #[error("{fixtures} fixtures but {dims} dim levels")]
    DimCountMismatch { fixtures: usize, dims: usize },
    #[error("invalid luminaire `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl PhotometryError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CoincidentPoint { .. } => "CoincidentPoint",
            Self::ReflectanceSaturated(_) => "ReflectanceSaturated",
            Self::DimCountMismatch { .. } => "DimCountMismatch",
            Self::InvalidSpec { .. } => "InvalidSpec",
            Self::Geometry(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mount {
    Ceiling,
    Wall,
    Table,
}

/// Photometric and electrical description of a lamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LuminaireSpec {
    pub name: String,
    /// Total luminous flux, lm.
    pub flux: f64,
    /// `m` in `I0 * cos^m(theta)`; 1 is Lambertian.
    pub distribution_exponent: f64,
    /// Electrical power at full output, W.
    pub power: f64,
    pub mount: Mount,
}

impl LuminaireSpec {
    pub fn new(name: impl Into<String>, flux: f64, distribution_exponent: f64, power: f64, mount: Mount) -> Self {
        Self {
            name: name.into(),
            flux,
            distribution_exponent,
            power,
            mount,
        }
    }

    pub fn validate(&self) -> Result<(), PhotometryError> {
        let fail = |reason: &str| {
            Err(PhotometryError::InvalidSpec {
                name: self.name.clone(),
                reason: reason.into(),
            })
        };
        if !(self.flux > 0.0) || !self.flux.is_finite() {
            return fail("flux must be positive");
        }
        if !(self.distribution_exponent >= 0.0) || !self.distribution_exponent.is_finite() {
            return fail("distribution exponent must be non-negative");
        }
        if !(self.power > 0.0) || !self.power.is_finite() {
            return fail("power must be positive");
        }
        Ok(())
    }

    /// Intensity in candela at `cos_theta` off the emission axis.
    pub fn intensity(&self, cos_theta: f64) -> f64 {
        if cos_theta < 0.0 {
            return 0.0;
        }
        peak_intensity(self) * cos_theta.powf(self.distribution_exponent)
    }
}

/// A luminaire placed in a room.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedFixture {
    pub spec: LuminaireSpec,
    pub position: Vec3,
    /// Unit emission axis.
    pub axis: Vec3,
    pub zone: String,
    pub dimmable: bool,
    /// Static output level used for stand-alone illuminance requests.
    #[serde(default = "full_level")]
    pub level: f64,
}

fn full_level() -> f64 {
    1.0
}

impl PlacedFixture {
    pub fn new(spec: LuminaireSpec, position: Vec3, axis: Vec3, zone: impl Into<String>) -> Self {
        Self {
            spec,
            position,
            axis,
            zone: zone.into(),
            dimmable: true,
            level: 1.0,
        }
    }
}

/// Peak intensity `I0 = flux * (m + 1) / (2 pi)`, which makes the hemisphere
/// integral of `I0 cos^m` equal the flux.
pub fn peak_intensity(spec: &LuminaireSpec) -> f64 {
    spec.flux * (spec.distribution_exponent + 1.0) / (2.0 * PI)
}

fn check_dims(fixtures: &[PlacedFixture], dims: &[f64]) -> Result<(), PhotometryError> {
    if fixtures.len() != dims.len() {
        return Err(PhotometryError::DimCountMismatch {
            fixtures: fixtures.len(),
            dims: dims.len(),
        });
    }
    Ok(())
}

/// Direct horizontal illuminance at `p`, lux.
pub fn direct_illuminance(
    fixtures: &[PlacedFixture],
    dims: &[f64],
    room: &ValidatedRoom,
    p: Vec3,
) -> Result<f64, PhotometryError> {
    check_dims(fixtures, dims)?;
    let mut total = 0.0;
    for (index, (fixture, &dim)) in fixtures.iter().zip(dims).enumerate() {
        let to_point = p - fixture.position;
        let d = to_point.norm();
        if d == 0.0 {
            return Err(PhotometryError::CoincidentPoint { fixture: index });
        }
        if dim == 0.0 {
            continue;
        }
        let cos_theta = fixture.axis.dot(to_point) / d;
        // Angle between the point->fixture direction and the upward normal.
        let cos_xi = (fixture.position.z - p.z) / d;
        if cos_theta < 0.0 || cos_xi < 0.0 {
            continue;
        }
        if occludes(room, fixture.position, p) {
            continue;
        }
        total += dim * fixture.spec.intensity(cos_theta) * cos_xi / (d * d);
    }
    Ok(total)
}

/// Uniform interreflected illuminance, lux: total emitted flux times
/// `rho / (A (1 - rho))` with `rho` the area-weighted mean reflectance.
pub fn ambient_component(
    fixtures: &[PlacedFixture],
    dims: &[f64],
    room: &ValidatedRoom,
) -> Result<f64, PhotometryError> {
    check_dims(fixtures, dims)?;
    let rho = room.mean_reflectance();
    if rho >= 1.0 - 1e-9 {
        return Err(PhotometryError::ReflectanceSaturated(rho));
    }
    let emitted: f64 = fixtures.iter().zip(dims).map(|(f, d)| d * f.spec.flux).sum();
    Ok(emitted * rho / (room.total_surface_area() * (1.0 - rho)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldStats {
    pub average: f64,
    pub min: f64,
    pub max: f64,
    /// `min / average`, or 0 for a dark field.
    pub uniformity: f64,
}

impl FieldStats {
    /// Summary of a non-empty sample list, accumulated in sample order.
    pub fn from_samples(lux: &[f64]) -> Self {
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in lux {
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        let average = sum / lux.len() as f64;
        // Rounding in the sum can push a flat field's mean just outside [min, max].
        let average = average.clamp(min, max);
        let uniformity = if average > 0.0 {
            (min / average).clamp(0.0, 1.0)
        } else {
            0.0
        };
        Self {
            average,
            min,
            max,
            uniformity,
        }
    }
}

/// Workplane illuminance samples with their summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminanceField {
    pub grid: WorkplaneGrid,
    pub lux: Vec<f64>,
    pub stats: FieldStats,
}

impl IlluminanceField {
    pub fn points(&self) -> &[Vec3] {
        &self.grid.points
    }

    /// Index of the brightest sample; first one wins on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.lux.iter().enumerate() {
            if v > self.lux[best] {
                best = i;
            }
        }
        best
    }

    /// Mean lux over samples within `radius` (horizontal) of any of `centers`.
    pub fn mean_near(&self, centers: &[Point2], radius: f64) -> Option<f64> {
        let mut sum = 0.0;
        let mut count = 0usize;
        for (p, &v) in self.grid.points.iter().zip(&self.lux) {
            if centers.iter().any(|c| c.distance(p.xy()) <= radius) {
                sum += v;
                count += 1;
            }
        }
        (count > 0).then(|| sum / count as f64)
    }
}

/// Evaluates direct plus ambient illuminance on the workplane grid.
pub fn illuminance_field(
    fixtures: &[PlacedFixture],
    dims: &[f64],
    room: &ValidatedRoom,
    spacing: f64,
    workplane_height: f64,
) -> Result<IlluminanceField, PhotometryError> {
    check_dims(fixtures, dims)?;
    let grid = workplane_grid(room, spacing, workplane_height)?;
    let ambient = ambient_component(fixtures, dims, room)?;
    let lux = grid
        .points
        .iter()
        .map(|&p| direct_illuminance(fixtures, dims, room, p).map(|e| e + ambient))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = FieldStats::from_samples(&lux);
    Ok(IlluminanceField { grid, lux, stats })
}
