use thiserror::Error;

use crate::control::ControlError;
use crate::generator::GeneratorError;
use crate::geometry::GeometryError;
use crate::patterns::PatternError;
use crate::photometry::PhotometryError;
use crate::workspace::WorkspaceError;

/// Any engine failure. [`Error::name`] gives the stable identifier reported
/// by the HTTP service and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Photometry(#[from] PhotometryError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Geometry(e) => e.name(),
            Self::Photometry(e) => e.name(),
            Self::Pattern(e) => e.name(),
            Self::Generator(e) => e.name(),
            Self::Control(e) => e.name(),
            Self::Workspace(e) => e.name(),
            Self::Json(_) => "MalformedDocument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
