#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use luxforge_core::geometry::{validate_room, RoomModel, ValidatedRoom, Vec3};
use luxforge_core::photometry::{LuminaireSpec, Mount, PlacedFixture};

pub fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name)
}

pub fn room_model(name: &str) -> RoomModel {
    let text = std::fs::read_to_string(sample(name)).unwrap();
    RoomModel::from_json(&text).unwrap()
}

pub fn room(name: &str) -> ValidatedRoom {
    validate_room(&room_model(name)).unwrap()
}

pub fn fixture(flux: f64, m: f64, position: [f64; 3], axis: [f64; 3]) -> PlacedFixture {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    PlacedFixture::new(
        LuminaireSpec::new("test", flux, m, 10.0, Mount::Ceiling),
        Vec3::new(position[0], position[1], position[2]),
        Vec3::new(axis[0] / n, axis[1] / n, axis[2] / n),
        "ambient",
    )
}
