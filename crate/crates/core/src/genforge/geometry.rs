//! Shape outlines: the primitives a shape is drawn with, its silhouette for
//! arrow attachment, and boundary ray casting.

use thiserror::Error;

use crate::model::ShapeKind;
use crate::svg::{element_bbox, fmt_num, parse_path_data, quantize, ray_segment_hit, Aabb, Element, Point};

/// Segments per curved path piece when flattening outlines.
pub const CURVE_SEGMENTS: usize = 128;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("ray target coincides with the shape center")]
pub struct DegenerateRay;

pub(crate) fn qp(x: f64, y: f64) -> Point {
    Point::new(quantize(x), quantize(y))
}

/// One closed SVG element of a shape. Coordinates are already quantized.
#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Rect { x: f64, y: f64, w: f64, h: f64, rx: f64 },
    Circle { cx: f64, cy: f64, r: f64 },
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
    Polygon(Vec<Point>),
    Path(String),
}

fn points_attr(pts: &[Point]) -> String {
    pts.iter().map(|p| format!("{},{}", fmt_num(p.x), fmt_num(p.y))).collect::<Vec<_>>().join(" ")
}

impl Primitive {
    /// Bare geometry element, no presentation attributes.
    pub fn element(&self) -> Element {
        match self {
            Primitive::Rect { x, y, w, h, rx } => {
                let e = Element::new("rect")
                    .with_num("x", *x)
                    .with_num("y", *y)
                    .with_num("width", *w)
                    .with_num("height", *h);
                if *rx > 0.0 {
                    e.with_num("rx", *rx)
                } else {
                    e
                }
            }
            Primitive::Circle { cx, cy, r } => {
                Element::new("circle").with_num("cx", *cx).with_num("cy", *cy).with_num("r", *r)
            }
            Primitive::Ellipse { cx, cy, rx, ry } => Element::new("ellipse")
                .with_num("cx", *cx)
                .with_num("cy", *cy)
                .with_num("rx", *rx)
                .with_num("ry", *ry),
            Primitive::Polygon(pts) => Element::new("polygon").with("points", points_attr(pts)),
            Primitive::Path(d) => Element::new("path").with("d", d.clone()),
        }
    }

    /// Same bounds the SVG reader computes for the emitted element.
    pub fn bbox(&self) -> Aabb {
        element_bbox(&self.element()).expect("primitives always carry geometry")
    }

    pub fn outline(&self) -> Outline {
        match self {
            Primitive::Rect { x, y, w, h, rx } => {
                let (x1, y1) = (x + w, y + h);
                let rx_eff = rx.min(w / 2.0);
                let ry_eff = rx.min(h / 2.0);
                if rx_eff <= 0.0 {
                    return Outline::Polygon(vec![
                        Point::new(*x, *y),
                        Point::new(x1, *y),
                        Point::new(x1, y1),
                        Point::new(*x, y1),
                    ]);
                }
                let corners = [
                    (x1 - rx_eff, y + ry_eff, -90.0f64),
                    (x1 - rx_eff, y1 - ry_eff, 0.0),
                    (x + rx_eff, y1 - ry_eff, 90.0),
                    (x + rx_eff, y + ry_eff, 180.0),
                ];
                let n = 32;
                let mut pts = Vec::with_capacity(4 * (n + 1));
                for (ccx, ccy, start) in corners {
                    for i in 0..=n {
                        let a = (start + 90.0 * i as f64 / n as f64).to_radians();
                        pts.push(Point::new(ccx + rx_eff * a.cos(), ccy + ry_eff * a.sin()));
                    }
                }
                Outline::Polygon(pts)
            }
            Primitive::Circle { cx, cy, r } => Outline::Ellipse { c: Point::new(*cx, *cy), rx: *r, ry: *r },
            Primitive::Ellipse { cx, cy, rx, ry } => {
                Outline::Ellipse { c: Point::new(*cx, *cy), rx: *rx, ry: *ry }
            }
            Primitive::Polygon(pts) => Outline::Polygon(pts.clone()),
            Primitive::Path(d) => {
                let data = parse_path_data(d).expect("generated path data parses");
                let mut ring = data.flatten(CURVE_SEGMENTS).into_iter().next().unwrap_or_default();
                if ring.len() > 1 && ring.first() == ring.last() {
                    ring.pop();
                }
                Outline::Polygon(ring)
            }
        }
    }

    fn vertices(&self) -> Vec<Point> {
        self.outline().sample(64)
    }
}

/// Closed silhouette used for ray casting.
#[derive(Clone, Debug, PartialEq)]
pub enum Outline {
    Ellipse { c: Point, rx: f64, ry: f64 },
    /// Ring of vertices; the closing edge is implied.
    Polygon(Vec<Point>),
}

impl Outline {
    /// Boundary points; ellipses are sampled at `n` angles.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        match self {
            Outline::Ellipse { c, rx, ry } => (0..n)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / n as f64;
                    Point::new(c.x + rx * a.cos(), c.y + ry * a.sin())
                })
                .collect(),
            Outline::Polygon(p) => p.clone(),
        }
    }

    /// Where the ray `origin -> toward` leaves the outline.
    pub fn ray_exit(&self, origin: Point, toward: Point) -> Option<Point> {
        let d = Point::new(toward.x - origin.x, toward.y - origin.y);
        if d.x == 0.0 && d.y == 0.0 {
            return None;
        }
        match self {
            Outline::Ellipse { c, rx, ry } => {
                // Solve ((o + t d - c) / r)^2 = 1 in the scaled frame.
                let ox = (origin.x - c.x) / rx;
                let oy = (origin.y - c.y) / ry;
                let dx = d.x / rx;
                let dy = d.y / ry;
                let a = dx * dx + dy * dy;
                let b = 2.0 * (ox * dx + oy * dy);
                let cc = ox * ox + oy * oy - 1.0;
                let disc = b * b - 4.0 * a * cc;
                if disc < 0.0 {
                    return None;
                }
                let t = (-b + disc.sqrt()) / (2.0 * a);
                (t > 0.0).then(|| Point::new(origin.x + t * d.x, origin.y + t * d.y))
            }
            Outline::Polygon(pts) => {
                let n = pts.len();
                let mut best: Option<f64> = None;
                for i in 0..n {
                    if let Some(t) = ray_segment_hit(origin, d, pts[i], pts[(i + 1) % n]) {
                        if t > 1e-9 && best.is_none_or(|b| t < b) {
                            best = Some(t);
                        }
                    }
                }
                best.map(|t| Point::new(origin.x + t * d.x, origin.y + t * d.y))
            }
        }
    }
}

/// Andrew's monotone chain; returns the hull counter-clockwise in y-up terms.
pub fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Random but fixed proportions of one shape, drawn before placement.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    /// Front face width and height.
    pub w: f64,
    pub h: f64,
    /// Extrusion depth for pseudo-3D kinds.
    pub depth: f64,
    /// Kind-specific proportion: skew, inset, wave amplitude, cap height.
    pub param: f64,
    /// Blob anchor fractions and curve tensions.
    pub blob: [f64; 8],
    pub lobes: usize,
    pub lobe_phase: f64,
    /// Stack layer count and per-layer offset.
    pub stack: Option<(u8, f64)>,
    pub corner_radius: f64,
}

/// Role of a drawn primitive inside its shape group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    /// Stack layer `n` steps behind the front.
    Layer(u8),
    /// Extruded side face.
    Side,
    Front,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    /// Drawing order, front last.
    pub parts: Vec<(Primitive, Face)>,
    pub outline: Outline,
    pub aabb: Aabb,
    /// Center of the front face; arrows are cast from here.
    pub anchor: Point,
}

fn front(spec: &ShapeSpec, c: Point) -> Primitive {
    let (w, h) = (spec.w, spec.h);
    let (x0, y0, x1, y1) = (c.x - w / 2.0, c.y - h / 2.0, c.x + w / 2.0, c.y + h / 2.0);
    let poly = |pts: &[(f64, f64)]| Primitive::Polygon(pts.iter().map(|&(x, y)| qp(x, y)).collect());
    let k = spec.param;
    match spec.kind {
        ShapeKind::Rectangle | ShapeKind::Square | ShapeKind::Cube => Primitive::Rect {
            x: quantize(x0),
            y: quantize(y0),
            w: quantize(w),
            h: quantize(h),
            rx: if spec.kind == ShapeKind::Cube { 0.0 } else { quantize(spec.corner_radius) },
        },
        ShapeKind::TextLabel => Primitive::Rect {
            x: quantize(x0),
            y: quantize(y0),
            w: quantize(w),
            h: quantize(h),
            rx: quantize(h / 2.0),
        },
        ShapeKind::Circle => Primitive::Circle { cx: quantize(c.x), cy: quantize(c.y), r: quantize(w / 2.0) },
        ShapeKind::Ellipse => Primitive::Ellipse {
            cx: quantize(c.x),
            cy: quantize(c.y),
            rx: quantize(w / 2.0),
            ry: quantize(h / 2.0),
        },
        ShapeKind::Diamond | ShapeKind::Diamond3d => poly(&[(c.x, y0), (x1, c.y), (c.x, y1), (x0, c.y)]),
        ShapeKind::Hexagon | ShapeKind::Hexagon3d => poly(&[
            (x0 + k, y0),
            (x1 - k, y0),
            (x1, c.y),
            (x1 - k, y1),
            (x0 + k, y1),
            (x0, c.y),
        ]),
        ShapeKind::Parallelogram => poly(&[(x0 + k, y0), (x1, y0), (x1 - k, y1), (x0, y1)]),
        ShapeKind::Trapezoid | ShapeKind::Trapezoid3d => poly(&[(x0 + k, y0), (x1 - k, y0), (x1, y1), (x0, y1)]),
        ShapeKind::Prism => poly(&[(c.x, y0), (x1, y1), (x0, y1)]),
        ShapeKind::Blob => Primitive::Path(blob_path(spec, x0, y0, x1, y1)),
        ShapeKind::WaveRect => {
            let a = k;
            let yb = y1 - a;
            let f = fmt_num;
            let cx = c.x;
            Primitive::Path(format!(
                "M {} {} L {} {} L {} {} C {} {} {} {} {} {} C {} {} {} {} {} {} Z",
                f(x0),
                f(y0),
                f(x1),
                f(y0),
                f(x1),
                f(yb),
                f(x1 - w / 6.0),
                f(yb - a),
                f(x1 - w / 3.0),
                f(yb + a),
                f(cx),
                f(yb),
                f(cx - w / 6.0),
                f(yb - a),
                f(cx - w / 3.0),
                f(yb + a),
                f(x0),
                f(yb),
            ))
        }
        ShapeKind::Cloud => Primitive::Path(cloud_path(spec, c)),
        ShapeKind::Cylinder => {
            let e = k;
            let yt = y0 + e;
            let yb = y1 - e;
            let f = fmt_num;
            Primitive::Path(format!(
                "M {} {} L {} {} A {} {} 0 0 0 {} {} L {} {} Z",
                f(x0),
                f(yt),
                f(x0),
                f(yb),
                f(w / 2.0),
                f(e),
                f(x1),
                f(yb),
                f(x1),
                f(yt),
            ))
        }
        ShapeKind::Other => poly(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)]),
    }
}

fn blob_path(spec: &ShapeSpec, x0: f64, y0: f64, x1: f64, y1: f64) -> String {
    let (w, h) = (x1 - x0, y1 - y0);
    let b = spec.blob;
    let t = (x0 + w * b[0], y0);
    let r = (x1, y0 + h * b[1]);
    let bt = (x0 + w * b[2], y1);
    let l = (x0, y0 + h * b[3]);
    let (k1, k2, k3, k4) = (b[4], b[5], b[6], b[7]);
    let pts = [
        t,
        (t.0 + (x1 - t.0) * k1, y0),
        (x1, r.1 - (r.1 - y0) * k1),
        r,
        (x1, r.1 + (y1 - r.1) * k2),
        (bt.0 + (x1 - bt.0) * k2, y1),
        bt,
        (bt.0 - (bt.0 - x0) * k3, y1),
        (x0, l.1 + (y1 - l.1) * k3),
        l,
        (x0, l.1 - (l.1 - y0) * k4),
        (t.0 - (t.0 - x0) * k4, y0),
        t,
    ];
    let f = |p: (f64, f64)| format!("{} {}", fmt_num(p.0), fmt_num(p.1));
    let mut d = format!("M {}", f(pts[0]));
    for seg in pts[1..].chunks(3) {
        d.push_str(&format!(" C {} {} {}", f(seg[0]), f(seg[1]), f(seg[2])));
    }
    d.push_str(" Z");
    d
}

fn cloud_path(spec: &ShapeSpec, c: Point) -> String {
    let bulge = spec.param;
    let a = spec.w / 2.0 - bulge;
    let b = spec.h / 2.0 - bulge;
    let n = spec.lobes.max(5);
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let th = spec.lobe_phase + std::f64::consts::TAU * i as f64 / n as f64;
            qp(c.x + a * th.cos(), c.y + b * th.sin())
        })
        .collect();
    let mut d = format!("M {} {}", fmt_num(pts[0].x), fmt_num(pts[0].y));
    for i in 0..n {
        let p = pts[i];
        let nx = pts[(i + 1) % n];
        let r = p.distance(nx) / 2.0 * 1.02;
        d.push_str(&format!(" A {} {} 0 0 1 {} {}", fmt_num(r), fmt_num(r), fmt_num(nx.x), fmt_num(nx.y)));
    }
    d.push_str(" Z");
    d
}

fn ring_of(p: &Primitive) -> Vec<Point> {
    match p {
        Primitive::Rect { x, y, w, h, .. } => vec![
            Point::new(*x, *y),
            Point::new(x + w, *y),
            Point::new(x + w, y + h),
            Point::new(*x, y + h),
        ],
        Primitive::Polygon(pts) => pts.clone(),
        other => other.vertices(),
    }
}

/// Side faces visible for an extrusion by `(d, -d)`.
fn extrude(ring: &[Point], d: f64) -> Vec<Primitive> {
    let n = ring.len();
    let cx = ring.iter().map(|p| p.x).sum::<f64>() / n as f64;
    let cy = ring.iter().map(|p| p.y).sum::<f64>() / n as f64;
    let mut faces = Vec::new();
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let mut nx = b.y - a.y;
        let mut ny = -(b.x - a.x);
        let mx = (a.x + b.x) / 2.0 - cx;
        let my = (a.y + b.y) / 2.0 - cy;
        if nx * mx + ny * my < 0.0 {
            nx = -nx;
            ny = -ny;
        }
        if nx * d - ny * d > 1e-9 {
            faces.push(Primitive::Polygon(vec![
                a,
                b,
                qp(b.x + d, b.y - d),
                qp(a.x + d, a.y - d),
            ]));
        }
    }
    faces
}

/// Builds every drawn part of a shape whose front face is centered at `c`.
pub fn build_geometry(spec: &ShapeSpec, c: Point) -> Geometry {
    let c = qp(c.x, c.y);
    let mut parts: Vec<(Primitive, Face)> = Vec::new();
    let outline;
    if spec.kind == ShapeKind::Cylinder {
        let body = front(spec, c);
        let e = spec.param;
        let cap = Primitive::Ellipse {
            cx: c.x,
            cy: quantize(c.y - spec.h / 2.0 + e),
            rx: quantize(spec.w / 2.0),
            ry: quantize(e),
        };
        let mut pts = body.vertices();
        pts.extend(cap.vertices());
        outline = Outline::Polygon(convex_hull(pts));
        parts.push((body, Face::Side));
        parts.push((cap, Face::Front));
    } else if spec.kind.is_3d() {
        let f = front(spec, c);
        let ring = ring_of(&f);
        let faces = extrude(&ring, spec.depth);
        let mut pts = ring.clone();
        for face in &faces {
            pts.extend(ring_of(face));
        }
        outline = Outline::Polygon(convex_hull(pts));
        parts.extend(faces.into_iter().map(|p| (p, Face::Side)));
        parts.push((f, Face::Front));
    } else {
        if let Some((layers, off)) = spec.stack {
            for k in (1..layers).rev() {
                let shift = off * k as f64;
                parts.push((front(spec, Point::new(c.x + shift, c.y - shift)), Face::Layer(k)));
            }
        }
        let f = front(spec, c);
        outline = f.outline();
        parts.push((f, Face::Front));
    }
    let aabb = parts
        .iter()
        .map(|(p, _)| p.bbox())
        .reduce(|a, b| a.union(&b))
        .expect("at least one part");
    Geometry { parts, outline, aabb, anchor: c }
}

/// Exit point of the ray from `origin` toward `toward` on `outline`.
pub fn cast(outline: &Outline, origin: Point, toward: Point) -> Result<Option<Point>, DegenerateRay> {
    if origin.distance(toward) < 1e-12 {
        return Err(DegenerateRay);
    }
    Ok(outline.ray_exit(origin, toward))
}
