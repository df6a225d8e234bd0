//! Path data (`d` attribute) parsing and evaluation.
//!
//! Parsing keeps the command list as written (relative flags intact, implicit
//! repetitions expanded). [`PathData::segments`] resolves it into absolute
//! drawing segments, which is what bounds, sampling and flattening work on.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use thiserror::Error;

use super::geom::{fmt_num, Aabb, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verb {
    M,
    L,
    H,
    V,
    C,
    S,
    Q,
    T,
    A,
    Z,
}

impl Verb {
    fn from_char(c: char) -> Option<(Verb, bool)> {
        let verb = match c.to_ascii_uppercase() {
            'M' => Verb::M,
            'L' => Verb::L,
            'H' => Verb::H,
            'V' => Verb::V,
            'C' => Verb::C,
            'S' => Verb::S,
            'Q' => Verb::Q,
            'T' => Verb::T,
            'A' => Verb::A,
            'Z' => Verb::Z,
            _ => return None,
        };
        Some((verb, c.is_ascii_lowercase()))
    }

    pub fn arity(self) -> usize {
        match self {
            Verb::M | Verb::L | Verb::T => 2,
            Verb::H | Verb::V => 1,
            Verb::C => 6,
            Verb::S | Verb::Q => 4,
            Verb::A => 7,
            Verb::Z => 0,
        }
    }

    pub fn is_curve(self) -> bool {
        matches!(self, Verb::C | Verb::S | Verb::Q | Verb::T | Verb::A)
    }

    pub fn letter(self, relative: bool) -> char {
        let c = match self {
            Verb::M => 'M',
            Verb::L => 'L',
            Verb::H => 'H',
            Verb::V => 'V',
            Verb::C => 'C',
            Verb::S => 'S',
            Verb::Q => 'Q',
            Verb::T => 'T',
            Verb::A => 'A',
            Verb::Z => 'Z',
        };
        if relative {
            c.to_ascii_lowercase()
        } else {
            c
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathCommand {
    pub verb: Verb,
    pub relative: bool,
    pub params: Vec<f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("malformed path data at byte {offset}: {reason}")]
pub struct MalformedPath {
    pub offset: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PathData {
    pub commands: Vec<PathCommand>,
}

impl PathData {
    pub fn contains_curve(&self) -> bool {
        self.commands.iter().any(|c| c.verb.is_curve())
    }

    pub fn is_closed(&self) -> bool {
        self.commands.iter().any(|c| c.verb == Verb::Z)
    }

    /// Resolves the command list into absolute segments.
    pub fn segments(&self) -> Vec<Segment> {
        resolve(&self.commands)
    }

    /// Bounds of every endpoint and control point. Arcs contribute the control
    /// points of their cubic approximation, which enclose the true arc.
    pub fn control_hull_bbox(&self) -> Option<Aabb> {
        let mut pts = Vec::new();
        for seg in self.segments() {
            if seg.kind != SegmentKind::Move {
                pts.push(seg.from);
            }
            match seg.kind {
                SegmentKind::Move | SegmentKind::Line => {}
                SegmentKind::Quad(c) => pts.push(c),
                SegmentKind::Cubic(c1, c2) => pts.extend([c1, c2]),
                SegmentKind::Arc(arc) => {
                    for (c1, c2, to) in arc_to_cubics(seg.from, &arc, seg.to) {
                        pts.extend([c1, c2, to]);
                    }
                }
            }
            pts.push(seg.to);
        }
        Aabb::from_points(pts)
    }

    /// Points along the drawn outline, `per_segment` samples per curve segment
    /// (straight segments contribute their endpoints only).
    pub fn sample(&self, per_segment: usize) -> Vec<Point> {
        let mut out = Vec::new();
        for seg in self.segments() {
            match seg.kind {
                SegmentKind::Move => out.push(seg.to),
                SegmentKind::Line => {
                    out.push(seg.from);
                    out.push(seg.to);
                }
                _ => {
                    let n = per_segment.max(1);
                    for i in 0..=n {
                        out.push(seg.point_at(i as f64 / n as f64));
                    }
                }
            }
        }
        out
    }

    /// Flattens into polylines, one per subpath; closed subpaths repeat their
    /// first point at the end.
    pub fn flatten(&self, per_curve: usize) -> Vec<Vec<Point>> {
        let mut polys: Vec<Vec<Point>> = Vec::new();
        for seg in self.segments() {
            match seg.kind {
                SegmentKind::Move => polys.push(vec![seg.to]),
                SegmentKind::Line => {
                    if polys.is_empty() {
                        polys.push(vec![seg.from]);
                    }
                    polys.last_mut().unwrap().push(seg.to);
                }
                _ => {
                    if polys.is_empty() {
                        polys.push(vec![seg.from]);
                    }
                    let poly = polys.last_mut().unwrap();
                    let n = per_curve.max(1);
                    for i in 1..=n {
                        poly.push(seg.point_at(i as f64 / n as f64));
                    }
                }
            }
        }
        polys
    }

    pub fn first_point(&self) -> Option<Point> {
        self.segments().first().map(|s| s.to)
    }

    pub fn last_point(&self) -> Option<Point> {
        self.segments().last().map(|s| s.to)
    }
}

impl fmt::Display for PathData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for cmd in &self.commands {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", cmd.verb.letter(cmd.relative))?;
            let params: Vec<String> = cmd.params.iter().map(|v| fmt_num(*v)).collect();
            if !params.is_empty() {
                write!(f, "{}", params.join(" "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcParams {
    pub rx: f64,
    pub ry: f64,
    pub x_axis_rotation: f64,
    pub large_arc: bool,
    pub sweep: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentKind {
    Move,
    Line,
    Quad(Point),
    Cubic(Point, Point),
    Arc(ArcParams),
}

/// One absolute drawing step from `from` to `to`. Close commands appear as a
/// `Line` back to the subpath start.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub from: Point,
    pub to: Point,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn point_at(&self, t: f64) -> Point {
        match self.kind {
            SegmentKind::Move => self.to,
            SegmentKind::Line => self.from.lerp(self.to, t),
            SegmentKind::Quad(c) => {
                let mt = 1.0 - t;
                Point::new(
                    mt * mt * self.from.x + 2.0 * mt * t * c.x + t * t * self.to.x,
                    mt * mt * self.from.y + 2.0 * mt * t * c.y + t * t * self.to.y,
                )
            }
            SegmentKind::Cubic(c1, c2) => cubic_point(self.from, c1, c2, self.to, t),
            SegmentKind::Arc(arc) => match arc_center(self.from, &arc, self.to) {
                Some(c) => c.point(c.theta1 + c.dtheta * t),
                None => self.from.lerp(self.to, t),
            },
        }
    }
}

fn cubic_point(p0: Point, c1: Point, c2: Point, p1: Point, t: f64) -> Point {
    let mt = 1.0 - t;
    let a = mt * mt * mt;
    let b = 3.0 * mt * mt * t;
    let c = 3.0 * mt * t * t;
    let d = t * t * t;
    Point::new(
        a * p0.x + b * c1.x + c * c2.x + d * p1.x,
        a * p0.y + b * c1.y + c * c2.y + d * p1.y,
    )
}

/// Center parameterization of an elliptical arc.
#[derive(Clone, Copy, Debug)]
pub struct ArcCenter {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
    pub phi: f64,
    pub theta1: f64,
    pub dtheta: f64,
}

impl ArcCenter {
    pub fn point(&self, theta: f64) -> Point {
        let (s, c) = self.phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        Point::new(
            self.cx + self.rx * ct * c - self.ry * st * s,
            self.cy + self.rx * ct * s + self.ry * st * c,
        )
    }

    fn derivative(&self, theta: f64) -> Point {
        let (s, c) = self.phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        Point::new(-self.rx * st * c - self.ry * ct * s, -self.rx * st * s + self.ry * ct * c)
    }
}

/// Endpoint-to-center conversion with out-of-range radii scaled up. Returns
/// `None` for degenerate arcs, which render as straight lines.
pub fn arc_center(from: Point, arc: &ArcParams, to: Point) -> Option<ArcCenter> {
    if from == to {
        return None;
    }
    let mut rx = arc.rx.abs();
    let mut ry = arc.ry.abs();
    if rx == 0.0 || ry == 0.0 {
        return None;
    }
    let phi = arc.x_axis_rotation.to_radians();
    let (s, c) = phi.sin_cos();
    let dx2 = (from.x - to.x) / 2.0;
    let dy2 = (from.y - to.y) / 2.0;
    let x1p = c * dx2 + s * dy2;
    let y1p = -s * dx2 + c * dy2;
    let lambda = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
    if lambda > 1.0 {
        let k = lambda.sqrt();
        rx *= k;
        ry *= k;
    }
    let num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p;
    let den = rx * rx * y1p * y1p + ry * ry * x1p * x1p;
    let mut coef = if den == 0.0 { 0.0 } else { (num / den).max(0.0).sqrt() };
    if arc.large_arc == arc.sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1p / ry;
    let cyp = -coef * ry * x1p / rx;
    let cx = c * cxp - s * cyp + (from.x + to.x) / 2.0;
    let cy = s * cxp + c * cyp + (from.y + to.y) / 2.0;
    let angle = |ux: f64, uy: f64, vx: f64, vy: f64| {
        let dot = ux * vx + uy * vy;
        let len = (ux.hypot(uy)) * (vx.hypot(vy));
        let mut a = (dot / len).clamp(-1.0, 1.0).acos();
        if ux * vy - uy * vx < 0.0 {
            a = -a;
        }
        a
    };
    let ux = (x1p - cxp) / rx;
    let uy = (y1p - cyp) / ry;
    let vx = (-x1p - cxp) / rx;
    let vy = (-y1p - cyp) / ry;
    let theta1 = angle(1.0, 0.0, ux, uy);
    let mut dtheta = angle(ux, uy, vx, vy);
    if !arc.sweep && dtheta > 0.0 {
        dtheta -= TAU;
    } else if arc.sweep && dtheta < 0.0 {
        dtheta += TAU;
    }
    Some(ArcCenter { cx, cy, rx, ry, phi, theta1, dtheta })
}

/// Cubic approximation of an arc, split into pieces of at most 90 degrees.
/// Each item is `(control1, control2, end)`.
pub fn arc_to_cubics(from: Point, arc: &ArcParams, to: Point) -> Vec<(Point, Point, Point)> {
    let Some(center) = arc_center(from, arc, to) else {
        return vec![(from, to, to)];
    };
    let pieces = (center.dtheta.abs() / FRAC_PI_2).ceil().max(1.0) as usize;
    let step = center.dtheta / pieces as f64;
    let k = 4.0 / 3.0 * (step / 4.0).tan();
    let mut out = Vec::with_capacity(pieces);
    let mut start = from;
    for i in 0..pieces {
        let a0 = center.theta1 + step * i as f64;
        let a1 = a0 + step;
        let d0 = center.derivative(a0);
        let d1 = center.derivative(a1);
        let end = if i + 1 == pieces { to } else { center.point(a1) };
        let c1 = Point::new(start.x + k * d0.x, start.y + k * d0.y);
        let c2 = Point::new(end.x - k * d1.x, end.y - k * d1.y);
        out.push((c1, c2, end));
        start = end;
    }
    out
}

fn resolve(commands: &[PathCommand]) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut cur = Point::default();
    let mut start = Point::default();
    // Reflection source for S/T: last cubic c2 or quad control.
    let mut last_cubic: Option<Point> = None;
    let mut last_quad: Option<Point> = None;
    for cmd in commands {
        let p = &cmd.params;
        let rel = |x: f64, y: f64, base: Point| {
            if cmd.relative {
                Point::new(base.x + x, base.y + y)
            } else {
                Point::new(x, y)
            }
        };
        let mut next_cubic = None;
        let mut next_quad = None;
        match cmd.verb {
            Verb::M => {
                let to = rel(p[0], p[1], cur);
                out.push(Segment { from: cur, to, kind: SegmentKind::Move });
                cur = to;
                start = to;
            }
            Verb::L => {
                let to = rel(p[0], p[1], cur);
                out.push(Segment { from: cur, to, kind: SegmentKind::Line });
                cur = to;
            }
            Verb::H => {
                let x = if cmd.relative { cur.x + p[0] } else { p[0] };
                let to = Point::new(x, cur.y);
                out.push(Segment { from: cur, to, kind: SegmentKind::Line });
                cur = to;
            }
            Verb::V => {
                let y = if cmd.relative { cur.y + p[0] } else { p[0] };
                let to = Point::new(cur.x, y);
                out.push(Segment { from: cur, to, kind: SegmentKind::Line });
                cur = to;
            }
            Verb::C => {
                let c1 = rel(p[0], p[1], cur);
                let c2 = rel(p[2], p[3], cur);
                let to = rel(p[4], p[5], cur);
                out.push(Segment { from: cur, to, kind: SegmentKind::Cubic(c1, c2) });
                next_cubic = Some(c2);
                cur = to;
            }
            Verb::S => {
                let c1 = match last_cubic {
                    Some(c) => Point::new(2.0 * cur.x - c.x, 2.0 * cur.y - c.y),
                    None => cur,
                };
                let c2 = rel(p[0], p[1], cur);
                let to = rel(p[2], p[3], cur);
                out.push(Segment { from: cur, to, kind: SegmentKind::Cubic(c1, c2) });
                next_cubic = Some(c2);
                cur = to;
            }
            Verb::Q => {
                let c = rel(p[0], p[1], cur);
                let to = rel(p[2], p[3], cur);
                out.push(Segment { from: cur, to, kind: SegmentKind::Quad(c) });
                next_quad = Some(c);
                cur = to;
            }
            Verb::T => {
                let c = match last_quad {
                    Some(q) => Point::new(2.0 * cur.x - q.x, 2.0 * cur.y - q.y),
                    None => cur,
                };
                let to = rel(p[0], p[1], cur);
                out.push(Segment { from: cur, to, kind: SegmentKind::Quad(c) });
                next_quad = Some(c);
                cur = to;
            }
            Verb::A => {
                let to = rel(p[5], p[6], cur);
                let arc = ArcParams {
                    rx: p[0],
                    ry: p[1],
                    x_axis_rotation: p[2],
                    large_arc: p[3] != 0.0,
                    sweep: p[4] != 0.0,
                };
                out.push(Segment { from: cur, to, kind: SegmentKind::Arc(arc) });
                cur = to;
            }
            Verb::Z => {
                if cur != start {
                    out.push(Segment { from: cur, to: start, kind: SegmentKind::Line });
                }
                cur = start;
            }
        }
        last_cubic = next_cubic;
        last_quad = next_quad;
    }
    out
}

/// Parses SVG path data. Implicit repetitions are expanded so every command
/// carries exactly its arity; extra pairs after a moveto become linetos.
pub fn parse_path_data(d: &str) -> Result<PathData, MalformedPath> {
    let mut lexer = Lexer { s: d.as_bytes(), pos: 0 };
    let mut commands = Vec::new();
    let mut current: Option<(Verb, bool)> = None;
    loop {
        lexer.skip_separators();
        let Some(b) = lexer.peek() else { break };
        let (verb, relative) = if let Some(vr) = Verb::from_char(b as char) {
            lexer.pos += 1;
            if commands.is_empty() && vr.0 != Verb::M {
                return Err(lexer.error("path must start with a moveto"));
            }
            vr
        } else if let Some((verb, relative)) = current {
            if verb == Verb::Z {
                return Err(lexer.error("parameters after closepath"));
            }
            // Implicit repetition; a repeated moveto continues as lineto.
            if verb == Verb::M {
                (Verb::L, relative)
            } else {
                (verb, relative)
            }
        } else {
            return Err(lexer.error("expected a command letter"));
        };
        let mut params = Vec::with_capacity(verb.arity());
        for i in 0..verb.arity() {
            lexer.skip_separators();
            let v = if verb == Verb::A && (i == 3 || i == 4) {
                lexer.flag()?
            } else {
                lexer.number()?
            };
            params.push(v);
        }
        commands.push(PathCommand { verb, relative, params });
        current = Some((verb, relative));
        if verb == Verb::Z {
            continue;
        }
    }
    Ok(PathData { commands })
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn error(&self, reason: &str) -> MalformedPath {
        MalformedPath { offset: self.pos, reason: reason.to_string() }
    }

    fn skip_separators(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b',' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn flag(&mut self) -> Result<f64, MalformedPath> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(0.0)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(1.0)
            }
            Some(_) => Err(self.error("arc flag must be 0 or 1")),
            None => Err(self.error("dangling arc parameters")),
        }
    }

    fn number(&mut self) -> Result<f64, MalformedPath> {
        let start = self.pos;
        match scan_number(self.s, self.pos) {
            Some(end) => {
                self.pos = end;
                let text = std::str::from_utf8(&self.s[start..end]).expect("ascii");
                text.parse::<f64>().map_err(|_| MalformedPath {
                    offset: start,
                    reason: format!("bad number `{text}`"),
                })
            }
            None if self.pos >= self.s.len() => Err(self.error("dangling parameters")),
            None => Err(self.error("expected a number")),
        }
    }
}

/// Scans one SVG number starting at `pos`; returns the end offset.
pub(crate) fn scan_number(s: &[u8], pos: usize) -> Option<usize> {
    let mut i = pos;
    if matches!(s.get(i), Some(b'+' | b'-')) {
        i += 1;
    }
    let int_start = i;
    while s.get(i).is_some_and(u8::is_ascii_digit) {
        i += 1;
    }
    let mut digits = i > int_start;
    if s.get(i) == Some(&b'.') {
        let frac_start = i + 1;
        let mut j = frac_start;
        while s.get(j).is_some_and(u8::is_ascii_digit) {
            j += 1;
        }
        if j > frac_start || digits {
            digits |= j > frac_start;
            i = j;
        }
    }
    if !digits {
        return None;
    }
    if matches!(s.get(i), Some(b'e' | b'E')) {
        let mut j = i + 1;
        if matches!(s.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        let exp_start = j;
        while s.get(j).is_some_and(u8::is_ascii_digit) {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
    }
    Some(i)
}

/// Axis-aligned extremes of an arc piece, used to sanity check hull bounds.
#[allow(dead_code)]
pub(crate) fn arc_exact_bbox(from: Point, arc: &ArcParams, to: Point) -> Aabb {
    let mut b = Aabb::from_points([from, to]).unwrap();
    if let Some(c) = arc_center(from, arc, to) {
        let n = 4096;
        for i in 0..=n {
            b.include(c.point(c.theta1 + c.dtheta * i as f64 / n as f64));
        }
    }
    b
}
