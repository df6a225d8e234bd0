//! Python bindings. Structured results cross the boundary as JSON text; the
//! `diagramforge` Python shim decodes them.

use std::collections::BTreeMap;

use diagramforge::curator::{self, CorruptionConfig, FilterThresholds};
use diagramforge::fideval::{self, Tiers};
use diagramforge::genforge::{self, GenConfig};
use diagramforge::judge::{self, RewardInput, RewardMask, RubricScores};
use diagramforge::metrics::ComplexityReport;
use diagramforge::model::SampleMetadata;
use diagramforge::svg::parse_svg;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn generate_pair(seed: u64, overrides: &BTreeMap<String, String>) -> Result<(String, String), String> {
    let mut cfg = GenConfig::default();
    for (k, v) in overrides {
        cfg.set(k, v).map_err(|e| e.to_string())?;
    }
    let sample = genforge::generate(seed, &cfg).map_err(|e| e.to_string())?;
    let meta = sample.metadata_json();
    Ok((sample.svg, meta))
}

pub fn complexity_json(svg: &str) -> Result<String, String> {
    let doc = parse_svg(svg).map_err(|e| e.to_string())?;
    Ok(to_json(&ComplexityReport::of_document(&doc)))
}

pub fn filter_json(text: &str, min_ratio: f64, max_complex: u64) -> String {
    let v = curator::filter_text(text, &FilterThresholds { min_ratio, max_complex }, &CorruptionConfig::default());
    to_json(&v)
}

pub fn clean_text(svg: &str) -> Result<String, String> {
    let doc = parse_svg(svg).map_err(|e| e.to_string())?;
    Ok(curator::clean_svg(&doc).to_svg_string())
}

pub fn evaluate_json(metadata: &str, pred: Option<&str>) -> Result<String, String> {
    let gt: SampleMetadata = serde_json::from_str(metadata).map_err(|e| e.to_string())?;
    Ok(to_json(&fideval::evaluate_text(&gt, pred, &Tiers::default())))
}

pub fn evaluate_standalone_json(reference: &str, pred: Option<&str>) -> Result<String, String> {
    fideval::evaluate_standalone(reference, pred, &Tiers::default())
        .map(|c| to_json(&c))
        .map_err(|e| e.to_string())
}

pub fn reward(scores: Option<[f64; 4]>, mask: &str) -> Result<f64, String> {
    let mask = RewardMask::from_name(mask).ok_or_else(|| format!("unknown mask {mask:?}"))?;
    let input = match scores {
        Some([p, l, c, d]) => RewardInput::Scored(RubricScores::new(p, l, c, d)),
        None => RewardInput::RenderFailed,
    };
    Ok(judge::aggregate_reward(input, mask))
}

fn py_err(e: String) -> PyErr {
    PyValueError::new_err(e)
}

/// Generates one diagram; returns `(svg, metadata_json)`.
#[pyfunction]
#[pyo3(name = "generate", signature = (seed, overrides=None))]
fn py_generate(seed: u64, overrides: Option<BTreeMap<String, String>>) -> PyResult<(String, String)> {
    generate_pair(seed, &overrides.unwrap_or_default()).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "sample_seed")]
fn py_sample_seed(master: u64, index: u64) -> u64 {
    genforge::sample_seed(master, index)
}

#[pyfunction]
#[pyo3(name = "complexity")]
fn py_complexity(svg: &str) -> PyResult<String> {
    complexity_json(svg).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "filter", signature = (text, min_ratio=0.40, max_complex=50))]
fn py_filter(text: &str, min_ratio: f64, max_complex: u64) -> String {
    filter_json(text, min_ratio, max_complex)
}

#[pyfunction]
#[pyo3(name = "clean")]
fn py_clean(svg: &str) -> PyResult<String> {
    clean_text(svg).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "evaluate", signature = (metadata, pred=None))]
fn py_evaluate(metadata: &str, pred: Option<&str>) -> PyResult<String> {
    evaluate_json(metadata, pred).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "evaluate_standalone", signature = (reference, pred=None))]
fn py_evaluate_standalone(reference: &str, pred: Option<&str>) -> PyResult<String> {
    evaluate_standalone_json(reference, pred).map_err(py_err)
}

/// `scores` is `(presence, layout, connectivity, details)`, or None for a
/// failed render.
#[pyfunction]
#[pyo3(name = "reward", signature = (scores, mask="full"))]
fn py_reward(scores: Option<[f64; 4]>, mask: &str) -> PyResult<f64> {
    reward(scores, mask).map_err(py_err)
}

#[pyfunction]
#[pyo3(name = "extract_svg_block")]
fn py_extract_svg_block(output: &str) -> Option<String> {
    judge::extract_svg_block(output).ok().map(str::to_string)
}

#[pymodule]
fn diagramforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(py_generate, m)?)?;
    m.add_function(wrap_pyfunction!(py_sample_seed, m)?)?;
    m.add_function(wrap_pyfunction!(py_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(py_filter, m)?)?;
    m.add_function(wrap_pyfunction!(py_clean, m)?)?;
    m.add_function(wrap_pyfunction!(py_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(py_evaluate_standalone, m)?)?;
    m.add_function(wrap_pyfunction!(py_reward, m)?)?;
    m.add_function(wrap_pyfunction!(py_extract_svg_block, m)?)?;
    Ok(())
}
