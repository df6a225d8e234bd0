//! Ground-truth records shared by the generator and the evaluator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::svg::{Aabb, Rgb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Rectangle,
    Square,
    Circle,
    Ellipse,
    Diamond,
    Hexagon,
    Parallelogram,
    Trapezoid,
    TextLabel,
    Blob,
    WaveRect,
    Cloud,
    Cylinder,
    Prism,
    Cube,
    #[serde(rename = "3d-diamond")]
    Diamond3d,
    #[serde(rename = "3d-hexagon")]
    Hexagon3d,
    #[serde(rename = "3d-trapezoid")]
    Trapezoid3d,
    /// Anything the extractor cannot name.
    Other,
}

impl ShapeKind {
    pub const FLAT: [ShapeKind; 12] = [
        ShapeKind::Rectangle,
        ShapeKind::Square,
        ShapeKind::Circle,
        ShapeKind::Ellipse,
        ShapeKind::Diamond,
        ShapeKind::Hexagon,
        ShapeKind::Parallelogram,
        ShapeKind::Trapezoid,
        ShapeKind::TextLabel,
        ShapeKind::Blob,
        ShapeKind::WaveRect,
        ShapeKind::Cloud,
    ];

    pub const PSEUDO_3D: [ShapeKind; 6] = [
        ShapeKind::Cylinder,
        ShapeKind::Prism,
        ShapeKind::Cube,
        ShapeKind::Diamond3d,
        ShapeKind::Hexagon3d,
        ShapeKind::Trapezoid3d,
    ];

    pub fn is_3d(self) -> bool {
        ShapeKind::PSEUDO_3D.contains(&self)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ShapeKind::Rectangle => "rectangle",
            ShapeKind::Square => "square",
            ShapeKind::Circle => "circle",
            ShapeKind::Ellipse => "ellipse",
            ShapeKind::Diamond => "diamond",
            ShapeKind::Hexagon => "hexagon",
            ShapeKind::Parallelogram => "parallelogram",
            ShapeKind::Trapezoid => "trapezoid",
            ShapeKind::TextLabel => "text-label",
            ShapeKind::Blob => "blob",
            ShapeKind::WaveRect => "wave-rect",
            ShapeKind::Cloud => "cloud",
            ShapeKind::Cylinder => "cylinder",
            ShapeKind::Prism => "prism",
            ShapeKind::Cube => "cube",
            ShapeKind::Diamond3d => "3d-diamond",
            ShapeKind::Hexagon3d => "3d-hexagon",
            ShapeKind::Trapezoid3d => "3d-trapezoid",
            ShapeKind::Other => "other",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillStyle {
    Solid,
    Hatching,
    Crosshatch,
    Dots,
    HorizontalLines,
    LinearGradient,
    RadialGradient,
    /// A pattern whose content could not be classified.
    GenericPattern,
}

impl FillStyle {
    /// The seven styles the generator draws from.
    pub const GENERATED: [FillStyle; 7] = [
        FillStyle::Solid,
        FillStyle::Hatching,
        FillStyle::Crosshatch,
        FillStyle::Dots,
        FillStyle::HorizontalLines,
        FillStyle::LinearGradient,
        FillStyle::RadialGradient,
    ];

    pub fn is_solid(self) -> bool {
        self == FillStyle::Solid
    }

    pub fn is_gradient(self) -> bool {
        matches!(self, FillStyle::LinearGradient | FillStyle::RadialGradient)
    }

    pub fn is_pattern(self) -> bool {
        !self.is_solid() && !self.is_gradient()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DashClass {
    Solid,
    Dashed,
    Dotted,
    DashDot,
}

impl DashClass {
    pub const ALL: [DashClass; 4] =
        [DashClass::Solid, DashClass::Dashed, DashClass::Dotted, DashClass::DashDot];

    pub fn as_str(self) -> &'static str {
        match self {
            DashClass::Solid => "solid",
            DashClass::Dashed => "dashed",
            DashClass::Dotted => "dotted",
            DashClass::DashDot => "dash-dot",
        }
    }
}

impl FromStr for DashClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DashClass::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown dash class {s:?}"))
    }
}

/// The ten scored attributes of one shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeAttributes {
    pub label: String,
    pub kind: ShapeKind,
    pub fill_color: Rgb,
    pub fill_style: FillStyle,
    pub stroke_color: Rgb,
    pub border_style: DashClass,
    /// Center of the rendered bounds.
    pub center: [f64; 2],
    /// Width and height of the rendered bounds.
    pub size: [f64; 2],
    pub font: String,
    pub stroke_width: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ShapeExtras {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stack_layers: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeMeta {
    pub id: String,
    pub attributes: ShapeAttributes,
    #[serde(default)]
    pub extras: ShapeExtras,
}

impl ShapeMeta {
    pub fn aabb(&self) -> Aabb {
        let [cx, cy] = self.attributes.center;
        let [w, h] = self.attributes.size;
        Aabb::new(cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0)
    }
}

/// The six scored attributes of one arrow. `src` and `dst` are shape ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowAttributes {
    pub src: String,
    pub dst: String,
    pub head: bool,
    pub head_size: f64,
    pub curved: bool,
    pub color: Rgb,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowExtras {
    pub stroke_width: f64,
    pub line_pattern: DashClass,
    pub endpoints: [[f64; 2]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowMeta {
    pub id: String,
    pub attributes: ArrowAttributes,
    pub extras: ArrowExtras,
}

/// Connection-count draws recorded with each generated sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionDraw {
    pub r_low: f64,
    pub r_high: f64,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub seed: u64,
    pub config_hash: String,
    pub canvas: [f64; 2],
    pub templates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connections: Option<ConnectionDraw>,
    #[serde(default)]
    pub skipped_arrows: usize,
    pub shapes: Vec<ShapeMeta>,
    pub arrows: Vec<ArrowMeta>,
}

impl SampleMetadata {
    /// A bare record set, as produced by standalone extraction.
    pub fn from_records(canvas: [f64; 2], shapes: Vec<ShapeMeta>, arrows: Vec<ArrowMeta>) -> Self {
        SampleMetadata {
            seed: 0,
            config_hash: String::new(),
            canvas,
            templates: Vec::new(),
            connections: None,
            skipped_arrows: 0,
            shapes,
            arrows,
        }
    }
}
