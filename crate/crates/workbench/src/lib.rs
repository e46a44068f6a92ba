//! Persistence, HTTP service and command line around `luxforge-core`.

pub mod api;
pub mod cli;
pub mod documents;
