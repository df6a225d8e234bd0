//! Seeded generator of shape-and-arrow diagrams with paired metadata.
//!
//! One sample is produced in four steps, each drawing from the same ChaCha8
//! stream in this order: layout selection, shape placement, style assignment,
//! connection routing. Identical `(seed, config)` pairs give byte-identical
//! SVG text and metadata.

mod emit;
pub mod geometry;
mod place;
mod route;
mod style;
pub mod templates;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{ConnectionDraw, DashClass, FillStyle, SampleMetadata, ShapeKind};
use crate::svg::{Aabb, Point, Rgb};

pub use geometry::{build_geometry, convex_hull, DegenerateRay, Face, Geometry, Outline, Primitive, ShapeSpec};
pub use place::place_shapes;
pub use route::{connection_count, route_connections};
pub use style::{assign_styles, FillParams, StyleDefs};
pub use templates::{select_layout, LayoutPlan, Template, TEMPLATES};

pub type GenRng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("every layout position was skipped during placement")]
    EmptyDiagram,
    #[error("word bank cannot supply {needed} unique labels")]
    WordBankExhausted { needed: usize },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

/// All stochastic parameters of the generator. Loading a partial JSON object
/// fills the remaining fields from the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub canvas: [f64; 2],
    /// Inset of template coordinates from the canvas edge.
    pub layout_margin: [f64; 2],
    /// Shapes stay this far inside the canvas.
    pub canvas_margin: f64,
    /// Uniform jitter as a fraction of canvas width/height.
    pub jitter: f64,
    pub template_combine_prob: f64,
    pub cross_links: [usize; 2],
    pub stack_prob: f64,
    pub stack_layers: [u8; 2],
    pub rounded_corner_prob: f64,
    pub straight_arrow_prob: f64,
    pub r_low: [f64; 2],
    pub r_high: [f64; 2],
    pub fonts: Vec<String>,
    pub fonts_per_diagram: [usize; 2],
    pub font_size: [f64; 2],
    pub word_bank: Vec<String>,
    pub two_word_prob: f64,
    pub arrow_colors: [usize; 2],
    pub kind_palette: [usize; 2],
    pub kind_weights: Vec<(ShapeKind, f64)>,
    /// Weight kept by the previous kind when drawing the next one.
    pub repeat_weight: f64,
    pub shape_width: [f64; 2],
    pub shape_height: [f64; 2],
    /// Clear space between shape bounds.
    pub min_gap: f64,
    pub min_center_distance: f64,
    pub placement_step: f64,
    pub placement_rings: usize,
    pub fill_palette: Vec<Rgb>,
    pub stroke_palette: Vec<Rgb>,
    pub stroke_width: [f64; 2],
    pub fill_style_weights: [f64; 7],
    /// When non-empty, shapes take fill styles from this list in turn.
    pub fill_style_cycle: Vec<FillStyle>,
    pub border_weights: [f64; 4],
    pub arrow_stroke_width: [f64; 2],
    /// Head size as a multiple of arrow stroke width.
    pub head_scale: [f64; 2],
    pub arrow_pattern_weights: [f64; 3],
    pub curve_offset: [f64; 2],
    pub curve_samples: usize,
    pub curve_attempts: usize,
}

#[derive(Deserialize)]
struct Bundled {
    fonts: Vec<String>,
    word_bank: Vec<String>,
    fill_palette: Vec<Rgb>,
    stroke_palette: Vec<Rgb>,
}

impl Default for GenConfig {
    fn default() -> Self {
        let b: Bundled = serde_json::from_str(crate::DEFAULTS_JSON).expect("bundled defaults parse");
        use ShapeKind::*;
        GenConfig {
            canvas: [960.0, 720.0],
            layout_margin: [100.0, 70.0],
            canvas_margin: 6.0,
            jitter: 0.06,
            template_combine_prob: 0.3,
            cross_links: [1, 2],
            stack_prob: 0.15,
            stack_layers: [2, 4],
            rounded_corner_prob: 0.6,
            straight_arrow_prob: 0.6,
            r_low: [0.4, 0.6],
            r_high: [0.6, 0.8],
            fonts: b.fonts,
            fonts_per_diagram: [1, 2],
            font_size: [12.0, 15.0],
            word_bank: b.word_bank,
            two_word_prob: 0.3,
            arrow_colors: [1, 3],
            kind_palette: [2, 3],
            kind_weights: vec![
                (Rectangle, 3.0),
                (Square, 1.0),
                (Circle, 1.5),
                (Ellipse, 1.5),
                (TextLabel, 1.0),
                (Diamond, 1.0),
                (Hexagon, 1.0),
                (Parallelogram, 1.0),
                (Trapezoid, 0.8),
                (Blob, 0.6),
                (WaveRect, 0.6),
                (Cloud, 0.6),
                (Cylinder, 0.6),
                (Prism, 0.4),
                (Cube, 0.8),
                (Diamond3d, 0.4),
                (Hexagon3d, 0.4),
                (Trapezoid3d, 0.4),
            ],
            repeat_weight: 0.3,
            shape_width: [90.0, 140.0],
            shape_height: [46.0, 78.0],
            min_gap: 24.0,
            min_center_distance: 60.0,
            placement_step: 16.0,
            placement_rings: 10,
            fill_palette: b.fill_palette,
            stroke_palette: b.stroke_palette,
            stroke_width: [1.2, 2.8],
            fill_style_weights: [0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1],
            fill_style_cycle: Vec::new(),
            border_weights: [0.5, 0.2, 0.15, 0.15],
            arrow_stroke_width: [1.2, 2.5],
            head_scale: [4.0, 7.0],
            arrow_pattern_weights: [0.6, 0.2, 0.2],
            curve_offset: [0.15, 0.3],
            curve_samples: 64,
            curve_attempts: 6,
        }
    }
}

fn check_range<T: PartialOrd + std::fmt::Debug>(name: &str, r: &[T; 2]) -> Result<(), GenError> {
    if r[0] <= r[1] {
        Ok(())
    } else {
        Err(GenError::InvalidConfig(format!("{name}: {:?} > {:?}", r[0], r[1])))
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let probs = [
            ("template_combine_prob", self.template_combine_prob),
            ("stack_prob", self.stack_prob),
            ("rounded_corner_prob", self.rounded_corner_prob),
            ("straight_arrow_prob", self.straight_arrow_prob),
            ("two_word_prob", self.two_word_prob),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::InvalidConfig(format!("{name} = {p} is not a probability")));
            }
        }
        check_range("r_low", &self.r_low)?;
        check_range("r_high", &self.r_high)?;
        if self.r_low[1] > self.r_high[0] {
            return Err(GenError::InvalidConfig("r_low range must lie below r_high range".into()));
        }
        check_range("cross_links", &self.cross_links)?;
        check_range("stack_layers", &self.stack_layers)?;
        check_range("fonts_per_diagram", &self.fonts_per_diagram)?;
        check_range("arrow_colors", &self.arrow_colors)?;
        check_range("kind_palette", &self.kind_palette)?;
        check_range("shape_width", &self.shape_width)?;
        check_range("shape_height", &self.shape_height)?;
        if self.stack_layers[0] < 2 {
            return Err(GenError::InvalidConfig("stacks need at least 2 layers".into()));
        }
        if self.fonts.len() < self.fonts_per_diagram[1] || self.fonts_per_diagram[0] == 0 {
            return Err(GenError::InvalidConfig("font pool smaller than fonts per diagram".into()));
        }
        if self.fill_palette.is_empty() || self.stroke_palette.len() < self.arrow_colors[1] {
            return Err(GenError::InvalidConfig("palettes too small".into()));
        }
        if self.kind_weights.len() < self.kind_palette[1] || self.kind_palette[0] == 0 {
            return Err(GenError::InvalidConfig("not enough shape kinds for the palette size".into()));
        }
        if self.kind_weights.iter().any(|(k, w)| *k == ShapeKind::Other || *w < 0.0) {
            return Err(GenError::InvalidConfig("kind weights must name drawable kinds".into()));
        }
        if self.canvas[0] <= 0.0 || self.canvas[1] <= 0.0 {
            return Err(GenError::InvalidConfig("canvas must be positive".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Applies one `key = value` override. Scalars take a number; pairs take
    /// two comma separated numbers.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), GenError> {
        let mut v = serde_json::to_value(&*self).expect("config serializes");
        let slot = v
            .get_mut(key)
            .ok_or_else(|| GenError::InvalidConfig(format!("unknown key {key:?}")))?;
        let parsed: serde_json::Value = if slot.is_array() && !value.trim_start().starts_with('[') {
            serde_json::from_str(&format!("[{value}]"))
        } else if slot.is_string() {
            Ok(serde_json::Value::String(value.to_string()))
        } else {
            serde_json::from_str(value)
        }
        .map_err(|e| GenError::InvalidConfig(format!("{key}: {e}")))?;
        *slot = parsed;
        let next: GenConfig =
            serde_json::from_value(v).map_err(|e| GenError::InvalidConfig(format!("{key}: {e}")))?;
        next.validate()?;
        *self = next;
        Ok(())
    }
}

/// Seed of sample `index` in a batch started from `master`.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"diagramforge/sample");
    h.update(master.to_le_bytes());
    h.update(index.to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

pub fn rng_for(seed: u64) -> GenRng {
    GenRng::seed_from_u64(seed)
}

/// Visual attributes chosen by [`assign_styles`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeStyle {
    pub label: String,
    pub fill_color: Rgb,
    pub fill: FillParams,
    pub stroke_color: Rgb,
    pub border_style: DashClass,
    pub dasharray: Option<String>,
    pub stroke_width: f64,
    pub font: String,
    pub font_size: f64,
}

impl Default for ShapeStyle {
    fn default() -> Self {
        ShapeStyle {
            label: String::new(),
            fill_color: Rgb::WHITE,
            fill: FillParams::Solid,
            stroke_color: Rgb::BLACK,
            border_style: DashClass::Solid,
            dasharray: None,
            stroke_width: 1.0,
            font: String::new(),
            font_size: 12.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlacedShape {
    pub id: String,
    pub kind: ShapeKind,
    pub spec: ShapeSpec,
    pub geometry: Geometry,
    /// Exact bounds of everything drawn for the shape.
    pub aabb: Aabb,
    pub style: ShapeStyle,
}

impl PlacedShape {
    pub fn center(&self) -> Point {
        self.aabb.center()
    }

    pub fn size(&self) -> [f64; 2] {
        [self.aabb.width(), self.aabb.height()]
    }

    pub fn stacked(&self) -> Option<u8> {
        self.spec.stack.map(|(n, _)| n)
    }

    pub fn corner_radius(&self) -> Option<f64> {
        (self.spec.corner_radius > 0.0 && matches!(self.kind, ShapeKind::Rectangle | ShapeKind::Square))
            .then_some(self.spec.corner_radius)
    }

    pub fn fill_style(&self) -> FillStyle {
        self.style.fill.style()
    }
}

/// Exit point of the ray from the shape's front-face center toward `toward`.
pub fn ray_cast_boundary(shape: &PlacedShape, toward: Point) -> Result<Point, DegenerateRay> {
    let origin = shape.geometry.anchor;
    Ok(geometry::cast(&shape.geometry.outline, origin, toward)?.unwrap_or(origin))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Connection {
    pub id: String,
    pub src: String,
    pub dst: String,
    pub start: Point,
    pub end: Point,
    pub control: Option<Point>,
    pub color: Rgb,
    pub stroke_width: f64,
    pub head_size: f64,
    pub line_pattern: DashClass,
    pub dasharray: Option<String>,
}

impl Connection {
    pub fn curved(&self) -> bool {
        self.control.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramSample {
    pub seed: u64,
    pub config_hash: String,
    pub plan: LayoutPlan,
    pub shapes: Vec<PlacedShape>,
    pub connections: Vec<Connection>,
    pub connection_draw: ConnectionDraw,
    pub svg: String,
    pub metadata: SampleMetadata,
}

impl DiagramSample {
    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(&self.metadata).expect("metadata serializes")
    }
}

/// Generates one sample. `seed` is the final per-sample seed; batches derive
/// it with [`sample_seed`].
pub fn generate(seed: u64, cfg: &GenConfig) -> Result<DiagramSample, GenError> {
    cfg.validate()?;
    let mut rng = rng_for(seed);
    let plan = select_layout(&mut rng, cfg);
    let placement = place_shapes(&plan, cfg, &mut rng)?;
    let mut shapes = placement.shapes;
    let defs = assign_styles(&mut shapes, cfg, &mut rng)?;
    let hints: Vec<(usize, usize)> = plan
        .hints
        .iter()
        .filter_map(|&(a, b)| Some((placement.slot[a]?, placement.slot[b]?)))
        .collect();
    let draw = connection_count(shapes.len(), cfg, &mut rng);
    let routed = route_connections(&shapes, &hints, draw.target, cfg, &mut rng);
    let svg = emit::render_svg(cfg, &shapes, &routed.connections, &defs);
    let metadata = SampleMetadata {
        seed,
        config_hash: cfg.hash(),
        canvas: cfg.canvas,
        templates: plan.templates.clone(),
        connections: Some(draw),
        skipped_arrows: routed.skipped,
        shapes: shapes.iter().map(emit::shape_meta).collect(),
        arrows: routed.connections.iter().map(emit::arrow_meta).collect(),
    };
    Ok(DiagramSample {
        seed,
        config_hash: metadata.config_hash.clone(),
        plan,
        shapes,
        connections: routed.connections,
        connection_draw: draw,
        svg,
        metadata,
    })
}
