//! Dataset characterization metrics computed from element tallies.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::svg::{classify_elements, ElementCounts, SvgDocument};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MetricsError {
    #[error("metric is undefined for a document with no geometric elements")]
    UndefinedForEmpty,
}

/// How structural complexity is computed. The tag travels with every report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructuralDefinition {
    /// N + T
    #[default]
    LinearElementTotal,
    /// N only
    GeometricTotal,
}

impl StructuralDefinition {
    pub fn tag(self) -> &'static str {
        match self {
            StructuralDefinition::LinearElementTotal => "linear-element-total",
            StructuralDefinition::GeometricTotal => "geometric-total",
        }
    }
}

/// `ln(1 + N + T)`
pub fn element_complexity(c: &ElementCounts) -> f64 {
    ((1 + c.geometric() + c.text) as f64).ln()
}

/// `(B + K) / N`
pub fn cleanliness(c: &ElementCounts) -> Result<f64, MetricsError> {
    match c.geometric() {
        0 => Err(MetricsError::UndefinedForEmpty),
        n => Ok((c.basic + c.connectors) as f64 / n as f64),
    }
}

/// `C / N`
pub fn path_dominance(c: &ElementCounts) -> Result<f64, MetricsError> {
    match c.geometric() {
        0 => Err(MetricsError::UndefinedForEmpty),
        n => Ok(c.complex as f64 / n as f64),
    }
}

pub fn structural_complexity(c: &ElementCounts) -> f64 {
    structural_complexity_with(c, StructuralDefinition::default())
}

pub fn structural_complexity_with(c: &ElementCounts, def: StructuralDefinition) -> f64 {
    match def {
        StructuralDefinition::LinearElementTotal => (c.geometric() + c.text) as f64,
        StructuralDefinition::GeometricTotal => c.geometric() as f64,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub element_complexity: f64,
    /// `None` when N = 0.
    pub cleanliness: Option<f64>,
    pub path_dominance: Option<f64>,
    pub structural_complexity: f64,
    pub structural_definition: String,
    pub counts: ElementCounts,
}

impl ComplexityReport {
    pub fn from_counts(counts: ElementCounts, def: StructuralDefinition) -> Self {
        ComplexityReport {
            element_complexity: element_complexity(&counts),
            cleanliness: cleanliness(&counts).ok(),
            path_dominance: path_dominance(&counts).ok(),
            structural_complexity: structural_complexity_with(&counts, def),
            structural_definition: def.tag().to_string(),
            counts,
        }
    }

    pub fn of_document(doc: &SvgDocument) -> Self {
        Self::from_counts(classify_elements(doc), StructuralDefinition::default())
    }
}

/// Corpus means over parseable samples. Clean and PD means only cover samples
/// with N > 0; `undefined_cleanliness` counts the rest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub samples: usize,
    pub parsed: usize,
    pub parse_failures: usize,
    pub undefined_cleanliness: usize,
    pub mean_element_complexity: Option<f64>,
    pub mean_cleanliness: Option<f64>,
    pub mean_path_dominance: Option<f64>,
    pub mean_structural_complexity: Option<f64>,
    pub structural_definition: String,
}

/// Aggregates per-sample reports; `None` entries are parse failures. The
/// reduction is a plain sum, so input order does not matter.
pub fn corpus_stats<'a, I>(reports: I) -> CorpusStats
where
    I: IntoIterator<Item = Option<&'a ComplexityReport>>,
{
    let mut out = CorpusStats {
        structural_definition: StructuralDefinition::default().tag().to_string(),
        ..CorpusStats::default()
    };
    let (mut ec, mut sc, mut clean, mut pd) = (0.0, 0.0, 0.0, 0.0);
    let mut defined = 0usize;
    for r in reports {
        out.samples += 1;
        let Some(r) = r else {
            out.parse_failures += 1;
            continue;
        };
        out.parsed += 1;
        out.structural_definition = r.structural_definition.clone();
        ec += r.element_complexity;
        sc += r.structural_complexity;
        match (r.cleanliness, r.path_dominance) {
            (Some(c), Some(p)) => {
                clean += c;
                pd += p;
                defined += 1;
            }
            _ => out.undefined_cleanliness += 1,
        }
    }
    if out.parsed > 0 {
        out.mean_element_complexity = Some(ec / out.parsed as f64);
        out.mean_structural_complexity = Some(sc / out.parsed as f64);
    }
    if defined > 0 {
        out.mean_cleanliness = Some(clean / defined as f64);
        out.mean_path_dominance = Some(pd / defined as f64);
    }
    out
}
