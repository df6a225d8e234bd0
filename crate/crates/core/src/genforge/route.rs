//! Connection counts and arrow routing.

use std::collections::BTreeSet;

use rand::Rng;

use super::place::pick_weighted;
use super::style::dasharray_for;
use super::{Connection, GenConfig, GenRng, PlacedShape};
use crate::model::{ConnectionDraw, DashClass};
use crate::svg::{quantize, Aabb, Point};

/// Draws `r_low`, `r_high` and then `c` uniformly in `floor(n r_low)..=floor(n r_high)`.
pub fn connection_count(n: usize, cfg: &GenConfig, rng: &mut GenRng) -> ConnectionDraw {
    let r_low = rng.random_range(cfg.r_low[0]..=cfg.r_low[1]);
    let r_high = rng.random_range(cfg.r_high[0]..=cfg.r_high[1]);
    let lo = (n as f64 * r_low).floor() as usize;
    let hi = ((n as f64 * r_high).floor() as usize).max(lo);
    ConnectionDraw { r_low, r_high, target: rng.random_range(lo..=hi) }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Routed {
    pub connections: Vec<Connection>,
    /// Arrows dropped because no geometry could be found.
    pub skipped: usize,
}

fn qpt(p: Point) -> Point {
    Point::new(quantize(p.x), quantize(p.y))
}

fn quad_point(a: Point, c: Point, b: Point, t: f64) -> Point {
    let mt = 1.0 - t;
    Point::new(
        mt * mt * a.x + 2.0 * mt * t * c.x + t * t * b.x,
        mt * mt * a.y + 2.0 * mt * t * c.y + t * t * b.y,
    )
}

fn choose_pairs(n: usize, hints: &[(usize, usize)], target: usize, rng: &mut GenRng) -> Vec<(usize, usize)> {
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::new();
    for &(a, b) in hints {
        if pairs.len() >= target {
            break;
        }
        if a != b && a < n && b < n && seen.insert((a, b)) {
            pairs.push((a, b));
        }
    }
    let possible = n * n.saturating_sub(1);
    while pairs.len() < target && seen.len() < possible {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && seen.insert((a, b)) {
            pairs.push((a, b));
        }
    }
    pairs
}

fn straight(src: &PlacedShape, dst: &PlacedShape, offset: f64) -> Option<(Point, Point)> {
    let (a, b) = (src.geometry.anchor, dst.geometry.anchor);
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len = dx.hypot(dy);
    if len < 1e-9 {
        return None;
    }
    let n = Point::new(-dy / len * offset, dx / len * offset);
    let so = a.offset(n.x, n.y);
    let dof = b.offset(n.x, n.y);
    let start = src.geometry.outline.ray_exit(so, so.offset(dx, dy))?;
    let end = dst.geometry.outline.ray_exit(dof, dof.offset(-dx, -dy))?;
    Some((qpt(start), qpt(end)))
}

fn curve_clear(start: Point, control: Point, end: Point, others: &[Aabb], canvas: &Aabb, samples: usize) -> bool {
    (0..samples).all(|i| {
        let p = quad_point(start, control, end, i as f64 / (samples - 1).max(1) as f64);
        canvas.contains(p) && others.iter().all(|b| !b.contains(p))
    })
}

/// Routes `target` connections: hints first, then random unique ordered pairs.
pub fn route_connections(
    shapes: &[PlacedShape],
    hints: &[(usize, usize)],
    target: usize,
    cfg: &GenConfig,
    rng: &mut GenRng,
) -> Routed {
    let pairs = choose_pairs(shapes.len(), hints, target, rng);
    let pair_set: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
    let color_count = rng.random_range(cfg.arrow_colors[0]..=cfg.arrow_colors[1]);
    let mut pool = cfg.stroke_palette.clone();
    let colors: Vec<_> = (0..color_count).map(|_| pool.swap_remove(rng.random_range(0..pool.len()))).collect();
    let canvas = Aabb::new(0.0, 0.0, cfg.canvas[0], cfg.canvas[1]);
    let pattern_weights: Vec<(DashClass, f64)> = [DashClass::Solid, DashClass::Dashed, DashClass::Dotted]
        .into_iter()
        .zip(cfg.arrow_pattern_weights)
        .collect();
    let mut out = Routed { connections: Vec::new(), skipped: 0 };
    for (a, b) in pairs {
        let (src, dst) = (&shapes[a], &shapes[b]);
        let curved = !rng.random_bool(cfg.straight_arrow_prob);
        let color = colors[rng.random_range(0..colors.len())];
        let stroke_width = quantize((rng.random_range(cfg.arrow_stroke_width[0]..=cfg.arrow_stroke_width[1]) * 10.0).round() / 10.0);
        let head_size = quantize((stroke_width * rng.random_range(cfg.head_scale[0]..=cfg.head_scale[1]) * 10.0).round() / 10.0);
        let line_pattern = pick_weighted(rng, &pattern_weights);
        let dasharray = dasharray_for(line_pattern, stroke_width, rng);
        let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let bulge = rng.random_range(cfg.curve_offset[0]..=cfg.curve_offset[1]);

        let mut geometry = None;
        if curved {
            let others: Vec<Aabb> = shapes
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != a && i != b)
                .map(|(_, s)| s.aabb)
                .collect();
            let (p, q) = (src.geometry.anchor, dst.geometry.anchor);
            let mid = p.lerp(q, 0.5);
            let (dx, dy) = (q.x - p.x, q.y - p.y);
            let (mut side, mut k) = (side, bulge);
            for attempt in 0..=cfg.curve_attempts {
                if attempt > 0 {
                    if attempt % 2 == 1 {
                        side = -side;
                    } else {
                        k *= 1.5;
                    }
                }
                let control = qpt(Point::new(mid.x - dy * k * side, mid.y + dx * k * side));
                let ends = src
                    .geometry
                    .outline
                    .ray_exit(p, control)
                    .zip(dst.geometry.outline.ray_exit(q, control));
                if let Some((s, e)) = ends {
                    let (s, e) = (qpt(s), qpt(e));
                    if curve_clear(s, control, e, &others, &canvas, cfg.curve_samples) {
                        geometry = Some((s, e, Some(control)));
                        break;
                    }
                }
            }
        }
        if geometry.is_none() {
            let bidirectional = pair_set.contains(&(b, a));
            let delta = if bidirectional {
                0.15 * src.spec.w.min(src.spec.h).min(dst.spec.w.min(dst.spec.h))
            } else {
                0.0
            };
            geometry = straight(src, dst, delta)
                .or_else(|| straight(src, dst, 0.0))
                .map(|(s, e)| (s, e, None));
        }
        let Some((start, end, control)) = geometry else {
            out.skipped += 1;
            continue;
        };
        out.connections.push(Connection {
            id: format!("a{}", out.connections.len()),
            src: src.id.clone(),
            dst: dst.id.clone(),
            start,
            end,
            control,
            color,
            stroke_width,
            head_size,
            line_pattern,
            dasharray,
        });
    }
    out
}
