use serde::{Deserialize, Serialize};

use super::{ElementKind, SvgDocument};

/// Element tallies behind the complexity metrics and the code filter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementCounts {
    /// rect, circle, ellipse
    pub basic: u64,
    /// line, polyline
    pub connectors: u64,
    /// path, polygon
    pub complex: u64,
    pub text: u64,
}

impl ElementCounts {
    pub fn new(basic: u64, connectors: u64, complex: u64, text: u64) -> Self {
        ElementCounts { basic, connectors, complex, text }
    }

    /// Geometric total N = B + K + C.
    pub fn geometric(&self) -> u64 {
        self.basic + self.connectors + self.complex
    }

    fn add_kind(&mut self, kind: ElementKind) {
        match kind {
            ElementKind::Rect | ElementKind::Circle | ElementKind::Ellipse => self.basic += 1,
            ElementKind::Line | ElementKind::Polyline => self.connectors += 1,
            ElementKind::Path | ElementKind::Polygon => self.complex += 1,
            ElementKind::Text => self.text += 1,
            _ => {}
        }
    }
}

/// Counts drawable elements, skipping everything inside definition containers.
pub fn classify_elements(doc: &SvgDocument) -> ElementCounts {
    let mut counts = ElementCounts::default();
    for v in doc.visits() {
        if !v.in_definition {
            counts.add_kind(v.element.kind);
        }
    }
    counts
}
