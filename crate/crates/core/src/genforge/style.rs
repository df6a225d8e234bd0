//! Colors, fill patterns, borders, fonts and labels.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::geometry::build_geometry;
use super::place::pick_weighted;
use super::{GenConfig, GenError, GenRng, PlacedShape};
use crate::model::{DashClass, FillStyle, ShapeKind};
use crate::svg::{fmt_num, quantize, Element, Rgb};

/// A fill style together with its randomized parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "style", rename_all = "kebab-case")]
pub enum FillParams {
    Solid,
    Hatching { tile: [f64; 2], line_width: f64, ink: Rgb },
    Crosshatch { tile: f64, line_width: f64, ink: Rgb },
    Dots { tile: f64, radius: f64, ink: Rgb },
    HorizontalLines { tile: [f64; 2], line_width: f64, ink: Rgb },
    LinearGradient { vertical: bool, end: Rgb },
    RadialGradient { radius: f64, end: Rgb },
}

impl FillParams {
    pub fn style(&self) -> FillStyle {
        match self {
            FillParams::Solid => FillStyle::Solid,
            FillParams::Hatching { .. } => FillStyle::Hatching,
            FillParams::Crosshatch { .. } => FillStyle::Crosshatch,
            FillParams::Dots { .. } => FillStyle::Dots,
            FillParams::HorizontalLines { .. } => FillStyle::HorizontalLines,
            FillParams::LinearGradient { .. } => FillStyle::LinearGradient,
            FillParams::RadialGradient { .. } => FillStyle::RadialGradient,
        }
    }

    fn draw(style: FillStyle, color: Rgb, rng: &mut GenRng) -> FillParams {
        let ink = color.darken(rng.random_range(0.55..=0.75));
        let lw = quantize(rng.random_range(0.8..=1.6));
        match style {
            FillStyle::Hatching => {
                let w = quantize(rng.random_range(6.0..=12.0));
                FillParams::Hatching { tile: [w, quantize(w * rng.random_range(0.6..=1.6))], line_width: lw, ink }
            }
            FillStyle::Crosshatch => {
                FillParams::Crosshatch { tile: quantize(rng.random_range(8.0..=14.0)), line_width: lw, ink }
            }
            FillStyle::Dots => {
                let tile = quantize(rng.random_range(8.0..=14.0));
                FillParams::Dots { tile, radius: quantize(rng.random_range(1.2..=tile / 4.0)), ink }
            }
            FillStyle::HorizontalLines => FillParams::HorizontalLines {
                tile: [quantize(rng.random_range(6.0..=12.0)), quantize(rng.random_range(5.0..=10.0))],
                line_width: lw,
                ink,
            },
            FillStyle::LinearGradient => FillParams::LinearGradient {
                vertical: rng.random_bool(0.5),
                end: color.darken(rng.random_range(0.7..=0.9)),
            },
            FillStyle::RadialGradient => FillParams::RadialGradient {
                radius: quantize(rng.random_range(0.5..=0.75)),
                end: color.darken(rng.random_range(0.7..=0.9)),
            },
            FillStyle::Solid | FillStyle::GenericPattern => FillParams::Solid,
        }
    }

    /// The paint server element for this fill, if any.
    pub fn def(&self, id: &str, base: Rgb) -> Option<Element> {
        let bg = |w: f64, h: f64| {
            Element::new("rect")
                .with_num("width", w)
                .with_num("height", h)
                .with("fill", base.to_hex())
        };
        let line = |x1: f64, y1: f64, x2: f64, y2: f64, lw: f64, ink: Rgb| {
            Element::new("line")
                .with_num("x1", x1)
                .with_num("y1", y1)
                .with_num("x2", x2)
                .with_num("y2", y2)
                .with("stroke", ink.to_hex())
                .with_num("stroke-width", lw)
        };
        let pattern = |w: f64, h: f64| {
            Element::new("pattern")
                .with("id", id)
                .with("patternUnits", "userSpaceOnUse")
                .with_num("width", w)
                .with_num("height", h)
                .with_child(bg(w, h))
        };
        let stop = |offset: &str, c: Rgb| Element::new("stop").with("offset", offset).with("stop-color", c.to_hex());
        Some(match *self {
            FillParams::Solid => return None,
            FillParams::Hatching { tile: [w, h], line_width, ink } => {
                pattern(w, h).with_child(line(0.0, h, w, 0.0, line_width, ink))
            }
            FillParams::Crosshatch { tile, line_width, ink } => pattern(tile, tile)
                .with_child(line(0.0, 0.0, tile, tile, line_width, ink))
                .with_child(line(0.0, tile, tile, 0.0, line_width, ink)),
            FillParams::Dots { tile, radius, ink } => pattern(tile, tile).with_child(
                Element::new("circle")
                    .with_num("cx", tile / 2.0)
                    .with_num("cy", tile / 2.0)
                    .with_num("r", radius)
                    .with("fill", ink.to_hex()),
            ),
            FillParams::HorizontalLines { tile: [w, h], line_width, ink } => {
                pattern(w, h).with_child(line(0.0, h / 2.0, w, h / 2.0, line_width, ink))
            }
            FillParams::LinearGradient { vertical, end } => Element::new("linearGradient")
                .with("id", id)
                .with("x1", "0")
                .with("y1", "0")
                .with("x2", if vertical { "0" } else { "1" })
                .with("y2", if vertical { "1" } else { "0" })
                .with_child(stop("0", base))
                .with_child(stop("1", end)),
            FillParams::RadialGradient { radius, end } => Element::new("radialGradient")
                .with("id", id)
                .with("cx", "0.5")
                .with("cy", "0.5")
                .with_num("r", radius)
                .with_child(stop("0", base))
                .with_child(stop("1", end)),
        })
    }
}

/// Paint servers referenced by the styled shapes, in shape order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StyleDefs {
    pub elements: Vec<Element>,
}

/// Dash pattern for a border class at stroke width `sw`.
pub(crate) fn dasharray_for(class: DashClass, sw: f64, rng: &mut GenRng) -> Option<String> {
    let gap = sw * rng.random_range(1.6..=3.0);
    let dash = sw * rng.random_range(3.2..=5.0);
    let dot = sw * rng.random_range(0.5..=1.2);
    let list = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ");
    match class {
        DashClass::Solid => None,
        DashClass::Dashed => Some(list(&[dash, gap])),
        DashClass::Dotted => Some(list(&[dot, gap])),
        DashClass::DashDot => Some(list(&[dash, gap, dot, gap])),
    }
}

fn title_case(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn draw_labels(n: usize, cfg: &GenConfig, rng: &mut GenRng) -> Result<Vec<String>, GenError> {
    let mut bank: Vec<String> = Vec::with_capacity(cfg.word_bank.len());
    for w in &cfg.word_bank {
        let key = w.trim().to_lowercase();
        if !key.is_empty() && !key.contains(char::is_whitespace) && !bank.iter().any(|b| b.to_lowercase() == key) {
            bank.push(w.trim().to_string());
        }
    }
    if bank.len() < n {
        return Err(GenError::WordBankExhausted { needed: n });
    }
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let remaining_shapes = n - i - 1;
        let words = if rng.random_bool(cfg.two_word_prob) && bank.len() >= 2 + remaining_shapes { 2 } else { 1 };
        let mut parts = Vec::with_capacity(words);
        for _ in 0..words {
            let j = rng.random_range(0..bank.len());
            parts.push(title_case(&bank.swap_remove(j)));
        }
        labels.push(parts.join(" "));
    }
    Ok(labels)
}

/// Assigns colors, fills, the diagram border style, fonts and labels, and
/// returns the paint servers the shapes reference.
pub fn assign_styles(shapes: &mut [PlacedShape], cfg: &GenConfig, rng: &mut GenRng) -> Result<StyleDefs, GenError> {
    let border = pick_weighted(rng, &DashClass::ALL.iter().copied().zip(cfg.border_weights).collect::<Vec<_>>());
    let rounded = rng.random_bool(cfg.rounded_corner_prob);
    let font_count = rng.random_range(cfg.fonts_per_diagram[0]..=cfg.fonts_per_diagram[1]);
    let mut pool = cfg.fonts.clone();
    let fonts: Vec<String> = (0..font_count).map(|_| pool.swap_remove(rng.random_range(0..pool.len()))).collect();
    let font_size = quantize(rng.random_range(cfg.font_size[0]..=cfg.font_size[1]));
    let labels = draw_labels(shapes.len(), cfg, rng)?;
    let style_weights: Vec<(FillStyle, f64)> =
        FillStyle::GENERATED.iter().copied().zip(cfg.fill_style_weights).collect();
    let mut defs = StyleDefs::default();
    for (i, (shape, label)) in shapes.iter_mut().zip(labels).enumerate() {
        let fill_color = cfg.fill_palette[rng.random_range(0..cfg.fill_palette.len())];
        let stroke_color = cfg.stroke_palette[rng.random_range(0..cfg.stroke_palette.len())];
        let stroke_width = quantize((rng.random_range(cfg.stroke_width[0]..=cfg.stroke_width[1]) * 10.0).round() / 10.0);
        let style = if cfg.fill_style_cycle.is_empty() {
            pick_weighted(rng, &style_weights)
        } else {
            cfg.fill_style_cycle[i % cfg.fill_style_cycle.len()]
        };
        let fill = FillParams::draw(style, fill_color, rng);
        let font = fonts[rng.random_range(0..fonts.len())].clone();
        let dasharray = dasharray_for(border, stroke_width, rng);
        if rounded && matches!(shape.kind, ShapeKind::Rectangle | ShapeKind::Square) {
            let m = shape.spec.w.min(shape.spec.h);
            shape.spec.corner_radius = quantize(rng.random_range(0.08..=0.25) * m);
            let anchor = shape.geometry.anchor;
            shape.geometry = build_geometry(&shape.spec, anchor);
            debug_assert_eq!(shape.geometry.aabb, shape.aabb);
        }
        if let Some(def) = fill.def(&format!("fill-{}", shape.id), fill_color) {
            defs.elements.push(def);
        }
        shape.style = super::ShapeStyle {
            label,
            fill_color,
            fill,
            stroke_color,
            border_style: border,
            dasharray,
            stroke_width,
            font,
            font_size,
        };
    }
    Ok(defs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn labels_share_no_words() {
        let cfg = GenConfig::default();
        for seed in 0..50 {
            let labels = draw_labels(30, &cfg, &mut GenRng::seed_from_u64(seed)).unwrap();
            let mut words: Vec<String> = labels.iter().flat_map(|l| l.split(' ').map(str::to_lowercase)).collect();
            let n = words.len();
            words.sort();
            words.dedup();
            assert_eq!(words.len(), n);
        }
    }

    #[test]
    fn small_bank_is_exhausted() {
        let mut cfg = GenConfig::default();
        cfg.word_bank = vec!["a".into(), "b".into()];
        assert_eq!(
            draw_labels(3, &cfg, &mut GenRng::seed_from_u64(0)),
            Err(GenError::WordBankExhausted { needed: 3 })
        );
        assert_eq!(draw_labels(2, &cfg, &mut GenRng::seed_from_u64(0)).unwrap().len(), 2);
    }

    #[test]
    fn dash_patterns_by_class() {
        let mut rng = GenRng::seed_from_u64(4);
        assert_eq!(dasharray_for(DashClass::Solid, 2.0, &mut rng), None);
        let d = dasharray_for(DashClass::DashDot, 2.0, &mut rng).unwrap();
        assert_eq!(d.split(' ').count(), 4);
    }
}
