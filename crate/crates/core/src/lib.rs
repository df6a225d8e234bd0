//! Procedural shape-and-arrow diagrams, SVG corpus curation, structural
//! complexity metrics and rule-based fidelity scoring.

pub mod curator;
pub mod fideval;
pub mod fonts;
pub mod genforge;
pub mod judge;
pub mod metrics;
pub mod model;
pub mod render;
pub mod svg;

/// Bundled default palettes, fonts and word bank.
pub(crate) const DEFAULTS_JSON: &str = include_str!("../assets/defaults.json");
