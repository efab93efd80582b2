//! Command-line tool, JSON documents and HTTP API over `symgeo-core`.

pub mod api;
pub mod cli;
pub mod curves;
pub mod json;
pub mod report;
pub mod sweep;

pub use symgeo_core as core;
