//! Entity store for rooms, designs and simulation traces, with a
//! directory-of-JSON persistence format:
//!
//! ```text
//! index.json
//! rooms/<id>.json
//! designs/<id>.json
//! traces/<id>.json
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::SimulationTrace;
use crate::generator::{validate_design, LightingDesign};
use crate::geometry::{validate_room, RoomModel, ValidatedRoom};

pub const INDEX_FILE: &str = "index.json";

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("i/o failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("corrupt entity in {file}: {reason}")]
    CorruptEntity { file: String, reason: String },
    #[error("unknown room `{0}`")]
    UnknownRoom(String),
    #[error("unknown design `{0}`")]
    UnknownDesign(String),
    #[error("unknown trace `{0}`")]
    UnknownTrace(String),
}

impl WorkspaceError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::IoFailure { .. } => "IoFailure",
            Self::CorruptEntity { .. } => "CorruptEntity",
            Self::UnknownRoom(_) => "UnknownRoom",
            Self::UnknownDesign(_) => "UnknownDesign",
            Self::UnknownTrace(_) => "UnknownTrace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntityKind {
    Room,
    Design,
    Trace,
}

impl EntityKind {
    pub fn dir(self) -> &'static str {
        match self {
            Self::Room => "rooms",
            Self::Design => "designs",
            Self::Trace => "traces",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Self::Room => "room",
            Self::Design => "design",
            Self::Trace => "trace",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Index {
    next_id: u64,
    rooms: Vec<String>,
    designs: Vec<String>,
    traces: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Workspace {
    rooms: BTreeMap<String, RoomModel>,
    designs: BTreeMap<String, LightingDesign>,
    traces: BTreeMap<String, SimulationTrace>,
    next_id: u64,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.rooms.is_empty() && self.designs.is_empty() && self.traces.is_empty()
    }

    fn issue(&mut self, kind: EntityKind) -> String {
        self.next_id += 1;
        format!("{}-{:06}", kind.prefix(), self.next_id)
    }

    pub fn rooms(&self) -> &BTreeMap<String, RoomModel> {
        &self.rooms
    }

    pub fn designs(&self) -> &BTreeMap<String, LightingDesign> {
        &self.designs
    }

    pub fn traces(&self) -> &BTreeMap<String, SimulationTrace> {
        &self.traces
    }

    /// Validates and stores a room, returning its new id.
    pub fn add_room(&mut self, room: RoomModel) -> crate::Result<String> {
        validate_room(&room)?;
        let id = self.issue(EntityKind::Room);
        self.rooms.insert(id.clone(), room);
        Ok(id)
    }

    pub fn room(&self, id: &str) -> Result<&RoomModel, WorkspaceError> {
        self.rooms.get(id).ok_or_else(|| WorkspaceError::UnknownRoom(id.to_string()))
    }

    pub fn validated_room(&self, id: &str) -> crate::Result<ValidatedRoom> {
        Ok(validate_room(self.room(id)?)?)
    }

    /// Stores a design under a fresh id. The design's `room` must name a
    /// stored room; its `id` field is overwritten with the issued id.
    pub fn add_design(&mut self, mut design: LightingDesign) -> crate::Result<String> {
        let room = self.validated_room(&design.room)?;
        validate_design(&design, &room)?;
        let id = self.issue(EntityKind::Design);
        design.id = id.clone();
        self.designs.insert(id.clone(), design);
        Ok(id)
    }

    pub fn design(&self, id: &str) -> Result<&LightingDesign, WorkspaceError> {
        self.designs
            .get(id)
            .ok_or_else(|| WorkspaceError::UnknownDesign(id.to_string()))
    }

    /// Replaces a stored design after revalidating it. The id and room
    /// reference are kept.
    pub fn replace_design(&mut self, id: &str, mut design: LightingDesign) -> crate::Result<()> {
        let current = self.design(id)?;
        design.id = current.id.clone();
        design.room = current.room.clone();
        let room = self.validated_room(&design.room)?;
        design.rebuild_zones();
        validate_design(&design, &room)?;
        self.designs.insert(id.to_string(), design);
        Ok(())
    }

    pub fn add_trace(&mut self, trace: SimulationTrace) -> String {
        let id = self.issue(EntityKind::Trace);
        self.traces.insert(id.clone(), trace);
        id
    }

    pub fn trace(&self, id: &str) -> Result<&SimulationTrace, WorkspaceError> {
        self.traces.get(id).ok_or_else(|| WorkspaceError::UnknownTrace(id.to_string()))
    }

    fn index(&self) -> Index {
        Index {
            next_id: self.next_id,
            rooms: self.rooms.keys().cloned().collect(),
            designs: self.designs.keys().cloned().collect(),
            traces: self.traces.keys().cloned().collect(),
        }
    }

    fn entity_json(&self, kind: EntityKind, id: &str) -> Option<String> {
        let text = match kind {
            EntityKind::Room => serde_json::to_string_pretty(self.rooms.get(id)?),
            EntityKind::Design => serde_json::to_string_pretty(self.designs.get(id)?),
            EntityKind::Trace => serde_json::to_string_pretty(self.traces.get(id)?),
        };
        Some(text.expect("entities serialize") + "\n")
    }

    /// Writes every entity and the index. Files of entities no longer in
    /// the workspace are removed.
    pub fn save(&self, dir: &Path) -> Result<(), WorkspaceError> {
        for kind in [EntityKind::Room, EntityKind::Design, EntityKind::Trace] {
            let sub = dir.join(kind.dir());
            create_dir(&sub)?;
            let ids: Vec<&String> = match kind {
                EntityKind::Room => self.rooms.keys().collect(),
                EntityKind::Design => self.designs.keys().collect(),
                EntityKind::Trace => self.traces.keys().collect(),
            };
            for id in &ids {
                self.save_entity(dir, kind, id)?;
            }
            for entry in fs::read_dir(&sub).map_err(io_at(&sub))? {
                let path = entry.map_err(io_at(&sub))?.path();
                let stale = path.extension().is_some_and(|e| e == "json")
                    && path
                        .file_stem()
                        .and_then(|s| s.to_str())
                        .is_some_and(|stem| !ids.iter().any(|id| id.as_str() == stem));
                if stale {
                    fs::remove_file(&path).map_err(io_at(&path))?;
                }
            }
        }
        self.save_index(dir)
    }

    /// Writes one entity file. Pair with [`Workspace::save_index`].
    pub fn save_entity(&self, dir: &Path, kind: EntityKind, id: &str) -> Result<(), WorkspaceError> {
        let text = self.entity_json(kind, id).ok_or_else(|| match kind {
            EntityKind::Room => WorkspaceError::UnknownRoom(id.to_string()),
            EntityKind::Design => WorkspaceError::UnknownDesign(id.to_string()),
            EntityKind::Trace => WorkspaceError::UnknownTrace(id.to_string()),
        })?;
        let sub = dir.join(kind.dir());
        create_dir(&sub)?;
        write_atomic(&sub.join(format!("{id}.json")), &text)
    }

    pub fn save_index(&self, dir: &Path) -> Result<(), WorkspaceError> {
        create_dir(dir)?;
        let text = serde_json::to_string_pretty(&self.index()).expect("index serializes") + "\n";
        write_atomic(&dir.join(INDEX_FILE), &text)
    }

    /// Loads a saved workspace, validating every entity. A directory with
    /// no index loads as an empty workspace.
    pub fn restore(dir: &Path) -> Result<Self, WorkspaceError> {
        let index_path = dir.join(INDEX_FILE);
        if !index_path.exists() {
            return Ok(Self::new());
        }
        let index: Index = parse(&index_path, INDEX_FILE)?;
        let mut ws = Self {
            next_id: index.next_id,
            ..Self::default()
        };
        for id in &index.rooms {
            let file = entity_file(EntityKind::Room, id);
            let room: RoomModel = parse(&dir.join(&file), &file)?;
            validate_room(&room).map_err(|e| corrupt(&file, e.to_string()))?;
            ws.rooms.insert(id.clone(), room);
        }
        for id in &index.designs {
            let file = entity_file(EntityKind::Design, id);
            let design: LightingDesign = parse(&dir.join(&file), &file)?;
            if design.id != *id {
                return Err(corrupt(&file, format!("id `{}` does not match the file", design.id)));
            }
            let room = ws
                .rooms
                .get(&design.room)
                .ok_or_else(|| corrupt(&file, format!("unknown room `{}`", design.room)))?;
            let room = validate_room(room).map_err(|e| corrupt(&file, e.to_string()))?;
            let mut rezoned = design.clone();
            rezoned.rebuild_zones();
            if rezoned.zones != design.zones {
                return Err(corrupt(&file, "zone map disagrees with fixtures".into()));
            }
            validate_design(&design, &room).map_err(|e| corrupt(&file, e.to_string()))?;
            ws.designs.insert(id.clone(), design);
        }
        for id in &index.traces {
            let file = entity_file(EntityKind::Trace, id);
            let trace: SimulationTrace = parse(&dir.join(&file), &file)?;
            trace.check().map_err(|reason| corrupt(&file, reason))?;
            ws.traces.insert(id.clone(), trace);
        }
        Ok(ws)
    }
}

fn entity_file(kind: EntityKind, id: &str) -> String {
    format!("{}/{id}.json", kind.dir())
}

fn corrupt(file: &str, reason: String) -> WorkspaceError {
    WorkspaceError::CorruptEntity {
        file: file.to_string(),
        reason,
    }
}

fn io_at(path: &Path) -> impl Fn(io::Error) -> WorkspaceError + '_ {
    move |source| WorkspaceError::IoFailure {
        path: path.to_path_buf(),
        source,
    }
}

fn create_dir(path: &Path) -> Result<(), WorkspaceError> {
    fs::create_dir_all(path).map_err(io_at(path))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, file: &str) -> Result<T, WorkspaceError> {
    let text = fs::read_to_string(path).map_err(|source| match source.kind() {
        io::ErrorKind::NotFound => corrupt(file, "missing".into()),
        _ => WorkspaceError::IoFailure {
            path: path.to_path_buf(),
            source,
        },
    })?;
    serde_json::from_str(&text).map_err(|e| corrupt(file, e.to_string()))
}

/// Readers never see a half-written file.
fn write_atomic(path: &Path, text: &str) -> Result<(), WorkspaceError> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(io_at(&tmp))?;
    fs::rename(&tmp, path).map_err(io_at(path))
}
