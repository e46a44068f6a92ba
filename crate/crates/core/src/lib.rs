//! Core engine of the luxforge lighting-design testbed.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`geometry`] validates a room model and answers containment,
//!    occlusion and sampling queries.
//! 2. [`patterns`] analyses the room for furniture anchors and selects the
//!    design patterns that apply to its function.
//! 3. [`generator`] places fixtures for every matched pattern and scores the
//!    resulting designs with the [`photometry`] engine.
//! 4. [`control`] simulates smart-control policies over a day and accounts
//!    for the energy they use.
//!
//! [`workspace`] keeps rooms, designs and traces together and persists them
//! as plain JSON files.

// Parameter checks are written `!(x > 0.0)` so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod export;
pub mod generator;
pub mod geometry;
pub mod patterns;
pub mod photometry;
pub mod workspace;

pub use error::{Error, Result};
