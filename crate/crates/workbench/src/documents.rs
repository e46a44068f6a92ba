//! Request and response bodies shared by the HTTP service and the CLI.

use luxforge_core::control::{ControlPolicy, NamedPolicy, Schedule, TraceSummary};
use luxforge_core::generator::{GeneratorError, LightingDesign, RankedDesign};
use luxforge_core::geometry::{Vec3, DEFAULT_SPACING, DEFAULT_WORKPLANE_HEIGHT};
use luxforge_core::photometry::{IlluminanceField, LuminaireSpec};
use serde::{Deserialize, Serialize};

fn default_spacing() -> f64 {
    DEFAULT_SPACING
}

fn default_workplane() -> f64 {
    DEFAULT_WORKPLANE_HEIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub seed: u64,
    /// Grid pitch used for scoring.
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

/// Designs in rank order. Each design carries the id it was stored under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub room: String,
    pub seed: u64,
    pub designs: Vec<RankedDesign>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminanceRequest {
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default = "default_workplane")]
    pub workplane_height: f64,
    /// Per-fixture levels; the design's stored levels when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<f64>>,
}

impl Default for IlluminanceRequest {
    fn default() -> Self {
        Self {
            spacing: DEFAULT_SPACING,
            workplane_height: DEFAULT_WORKPLANE_HEIGHT,
            dims: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlluminanceResponse {
    pub design: String,
    pub field: IlluminanceField,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRequest {
    pub policy: ControlPolicy,
    pub schedule: Schedule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResponse {
    pub trace_id: String,
    pub summary: TraceSummary,
}

/// The first policy is the baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRequest {
    pub policies: Vec<NamedPolicy>,
    pub schedule: Schedule,
}

/// Manual edits to a stored design.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignPatch {
    pub fixtures: Vec<FixtureEdit>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FixtureEdit {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<LuminaireSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zone: Option<String>,
}

impl DesignPatch {
    /// Applies the edits to a copy of `design`. Containment is checked by
    /// the caller when the result is stored.
    pub fn apply(&self, design: &LightingDesign) -> Result<LightingDesign, GeneratorError> {
        let mut out = design.clone();
        for edit in &self.fixtures {
            let fixture = out
                .fixtures
                .get_mut(edit.index)
                .ok_or_else(|| GeneratorError::InvalidFixture {
                    index: edit.index,
                    reason: "no such fixture".into(),
                })?;
            if let Some(p) = edit.position {
                fixture.position = p;
            }
            if let Some(a) = edit.axis {
                fixture.axis = a;
            }
            if let Some(spec) = &edit.spec {
                fixture.spec = spec.clone();
            }
            if let Some(level) = edit.level {
                fixture.level = level;
            }
            if let Some(zone) = &edit.zone {
                fixture.zone = zone.clone();
            }
        }
        out.rebuild_zones();
        Ok(out)
    }
}
