//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.
//!
//! Oracles here are written against raw inputs (hand-built documents, count
//! tables, plain arithmetic) rather than reusing library helpers.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use diagramforge::curator::{filter_code, FilterThresholds};
use diagramforge::fideval::{
    self, composite, evaluate, evaluate_standalone, overall, score_aspect_ratio, score_border_style, score_color,
    score_dash_class, score_fill_style, score_head_size, score_overlap, ScoreCard, Tiers,
};
use diagramforge::genforge::{generate, DiagramSample, GenConfig, Outline};
use diagramforge::judge::{
    aggregate_reward, reward_for_output, ImageData, JudgeClient, RewardDiagnostic, RewardInput, RewardMask,
    RubricScores, StubTransport,
};
use diagramforge::metrics::ComplexityReport;
use diagramforge::model::{DashClass, FillStyle};
use diagramforge::render::RenderShim;
use diagramforge::svg::{parse_svg, Element, Node, Point, Rgb, SvgDocument};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn samples(seeds: std::ops::Range<u64>) -> Vec<DiagramSample> {
    let cfg = GenConfig::default();
    seeds.map(|s| generate(s, &cfg).unwrap_or_else(|e| panic!("seed {s}: {e}"))).collect()
}

// 1 -----------------------------------------------------------------------

/// Tallies kept while writing a document: basic, connector, complex, text.
#[derive(Default, Clone, Copy)]
struct Tally {
    b: u64,
    k: u64,
    c: u64,
    t: u64,
}

fn random_leaf(rng: &mut ChaCha8Rng, out: &mut String, tally: Option<&mut Tally>) {
    let tags = [
        "rect", "circle", "ellipse", "line", "polyline", "path", "polygon", "text", "RECT", "Line", "PATH", "title",
        "desc", "image", "use", "foreignObject",
    ];
    let tag = tags[rng.random_range(0..tags.len())];
    if let Some(t) = tally {
        match tag.to_ascii_lowercase().as_str() {
            "rect" | "circle" | "ellipse" => t.b += 1,
            "line" | "polyline" => t.k += 1,
            "path" | "polygon" => t.c += 1,
            "text" => t.t += 1,
            _ => {}
        }
    }
    match tag {
        "text" => {
            let _ = write!(out, "<text x=\"1\" y=\"2\">w<tspan>x</tspan></text>");
        }
        "path" | "PATH" => {
            let _ = write!(out, "<{tag} d=\"M0 0 L{} 3\"/>", rng.random_range(1..90));
        }
        "polygon" | "polyline" => {
            let _ = write!(out, "<{tag} points=\"0,0 4,4 8,0\"/>");
        }
        "foreignObject" => out.push_str("<foreignObject><div/></foreignObject>"),
        _ => {
            let _ = write!(out, "<{tag} x=\"{}\" width=\"3\" height=\"3\"/>", rng.random_range(0..500));
        }
    }
}

fn random_children(rng: &mut ChaCha8Rng, depth: usize, out: &mut String, tally: &mut Tally) {
    for _ in 0..rng.random_range(0..12) {
        match rng.random_range(0..10) {
            0 if depth < 4 => {
                out.push_str("<g>");
                random_children(rng, depth + 1, out, tally);
                out.push_str("</g>");
            }
            1 => {
                // Definition containers hide their content from the counts.
                let c = ["defs", "clipPath", "mask", "symbol", "marker", "pattern"][rng.random_range(0..6)];
                let _ = write!(out, "<{c} id=\"d{}\">", rng.random_range(0..1000));
                for _ in 0..rng.random_range(0..4) {
                    random_leaf(rng, out, None);
                }
                let _ = write!(out, "</{c}>");
            }
            2 => out.push_str("<!-- <rect/> <text>no</text> -->"),
            _ => random_leaf(rng, out, Some(tally)),
        }
    }
}

fn complexity_formulas() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut empty = 0;
    for i in 0..200 {
        let mut tally = Tally::default();
        let mut body = String::new();
        random_children(&mut rng, 0, &mut body, &mut tally);
        let text = format!("<svg xmlns=\"http://www.w3.org/2000/svg\">{body}</svg>");
        let doc = parse_svg(&text).map_err(|e| format!("doc {i}: {e}"))?;
        let rep = ComplexityReport::of_document(&doc);
        let n = tally.b + tally.k + tally.c;
        let ec = ((1 + n + tally.t) as f64).ln();
        ensure((rep.element_complexity - ec).abs() < 1e-12, || format!("doc {i}: EC {} vs {ec}", rep.element_complexity))?;
        if n == 0 {
            empty += 1;
            ensure(rep.cleanliness.is_none() && rep.path_dominance.is_none(), || format!("doc {i}: N=0 ratios"))?;
            continue;
        }
        let clean = (tally.b + tally.k) as f64 / n as f64;
        let pd = tally.c as f64 / n as f64;
        let got_clean = rep.cleanliness.ok_or(format!("doc {i}: missing Clean"))?;
        let got_pd = rep.path_dominance.ok_or(format!("doc {i}: missing PD"))?;
        ensure((got_clean - clean).abs() < 1e-12, || format!("doc {i}: Clean {got_clean} vs {clean}"))?;
        ensure((got_pd - pd).abs() < 1e-12, || format!("doc {i}: PD {got_pd} vs {pd}"))?;
    }
    within(start.elapsed(), Duration::from_secs(5), "200 documents")?;
    Ok(format!("200 documents ({empty} with N=0), max |delta| < 1e-12, {:.2?}", start.elapsed()))
}

// 2 -----------------------------------------------------------------------

fn corpus_bands() -> Outcome {
    let start = Instant::now();
    let cfg = GenConfig::default();
    let (mut ec, mut clean) = (0.0, 0.0);
    for seed in 0..500 {
        let s = generate(seed, &cfg).map_err(|e| e.to_string())?;
        let rep = ComplexityReport::of_document(&parse_svg(&s.svg).map_err(|e| e.to_string())?);
        ec += rep.element_complexity;
        clean += rep.cleanliness.ok_or("sample without geometry")?;
    }
    let (ec, clean) = (ec / 500.0, clean / 500.0);
    ensure((3.2..=4.2).contains(&ec), || format!("mean EC {ec:.3} outside [3.2, 4.2]"))?;
    ensure((0.35..=0.65).contains(&clean), || format!("mean Clean {clean:.3} outside [0.35, 0.65]"))?;
    within(start.elapsed(), Duration::from_secs(120), "500 samples")?;
    Ok(format!("mean EC {ec:.3}, mean Clean {clean:.3}, {:.2?}", start.elapsed()))
}

// 3 -----------------------------------------------------------------------

const FILTER_TABLE: [(u64, u64, u64); 50] = [
    (2, 0, 3), (0, 2, 3), (1, 1, 3), (20, 0, 30), (10, 10, 30), (40, 0, 60),
    (1, 0, 2), (2, 0, 4), (1, 0, 3), (19, 0, 30), (0, 19, 30), (9, 10, 30),
    (0, 0, 50), (50, 0, 50), (34, 0, 50), (33, 0, 50), (100, 0, 50), (100, 0, 51),
    (0, 0, 51), (40, 0, 51), (0, 0, 0), (0, 0, 1), (1, 0, 0), (0, 1, 0),
    (5, 5, 0), (3, 0, 1), (2, 2, 6), (4, 0, 6), (3, 1, 6), (4, 1, 6),
    (200, 0, 49), (200, 0, 50), (200, 0, 52), (7, 0, 10), (6, 0, 9), (7, 0, 11),
    (12, 8, 30), (11, 8, 30), (0, 34, 51), (0, 34, 50), (8, 0, 12), (0, 8, 12),
    (1, 1, 4), (4, 4, 12), (4, 3, 12), (60, 0, 90), (59, 0, 90), (1, 0, 1),
    (2, 0, 3), (0, 0, 2),
];

fn document_with(b: u64, k: u64, c: u64) -> SvgDocument {
    let mut s = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\">");
    for i in 0..b {
        s += if i % 3 == 0 { "<rect width=\"1\" height=\"1\"/>" } else if i % 3 == 1 { "<circle r=\"1\"/>" } else { "<ellipse rx=\"1\" ry=\"2\"/>" };
    }
    for i in 0..k {
        s += if i % 2 == 0 { "<line x2=\"1\"/>" } else { "<polyline points=\"0,0 1,1\"/>" };
    }
    for i in 0..c {
        s += if i % 2 == 0 { "<path d=\"M0 0L1 1\"/>" } else { "<polygon points=\"0,0 1,1 1,0\"/>" };
    }
    s += "</svg>";
    parse_svg(&s).expect("table document parses")
}

fn filter_rule() -> Outcome {
    let th = FilterThresholds::default();
    let mut kept = 0;
    for &(b, k, c) in &FILTER_TABLE {
        let n = b + k + c;
        // Integer form of (B+K)/N >= 0.40 and C <= 50.
        let expect = n > 0 && 100 * (b + k) >= 40 * n && c <= 50;
        let got = filter_code(&document_with(b, k, c), &th).keep;
        ensure(got == expect, || format!("(B,K,C)=({b},{k},{c}): got keep={got}, expected {expect}"))?;
        kept += usize::from(expect);
    }
    Ok(format!("50 cases, 0 disagreements ({kept} kept)"))
}

// 4 -----------------------------------------------------------------------

fn seg_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0) };
    ((a.x + t * dx - p.x).powi(2) + (a.y + t * dy - p.y).powi(2)).sqrt()
}

fn outline_distance(outline: &Outline, p: Point) -> f64 {
    let ring: Vec<Point> = match outline {
        Outline::Polygon(v) => v.clone(),
        Outline::Ellipse { c, rx, ry } => (0..20_000)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 20_000.0;
                Point::new(c.x + rx * a.cos(), c.y + ry * a.sin())
            })
            .collect(),
    };
    (0..ring.len()).map(|i| seg_distance(p, ring[i], ring[(i + 1) % ring.len()])).fold(f64::INFINITY, f64::min)
}

fn generator_geometry() -> Outcome {
    let start = Instant::now();
    let cfg = GenConfig::default();
    let (mut pairs, mut endpoints, mut worst) = (0usize, 0usize, 0.0f64);
    for seed in 0..1000 {
        let s = generate(seed, &cfg).map_err(|e| e.to_string())?;
        let boxes: Vec<[f64; 4]> = s
            .metadata
            .shapes
            .iter()
            .map(|m| {
                let ([cx, cy], [w, h]) = (m.attributes.center, m.attributes.size);
                [cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0]
            })
            .collect();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                let (a, b) = (boxes[i], boxes[j]);
                let ox = a[2].min(b[2]) - a[0].max(b[0]);
                let oy = a[3].min(b[3]) - a[1].max(b[1]);
                ensure(!(ox > 1e-9 && oy > 1e-9), || format!("seed {seed}: shapes {i} and {j} overlap"))?;
                pairs += 1;
            }
        }
        for conn in &s.connections {
            for (id, p) in [(&conn.src, conn.start), (&conn.dst, conn.end)] {
                let shape = s.shapes.iter().find(|sh| &sh.id == id).ok_or(format!("seed {seed}: unknown shape {id}"))?;
                let d = outline_distance(&shape.geometry.outline, p);
                worst = worst.max(d);
                ensure(d <= 0.5, || format!("seed {seed}: {} endpoint {d:.3} px from {id}", conn.id))?;
                endpoints += 1;
            }
        }
        let draw = s.metadata.connections.ok_or(format!("seed {seed}: no connection draw recorded"))?;
        let n = s.shapes.len() as f64;
        let (lo, hi) = ((n * draw.r_low).floor() as usize, (n * draw.r_high).floor() as usize);
        let count = s.metadata.arrows.len();
        ensure((lo..=hi).contains(&count), || format!("seed {seed}: {count} arrows outside [{lo}, {hi}]"))?;
    }
    within(start.elapsed(), Duration::from_secs(300), "1000 seeds")?;
    Ok(format!("{pairs} shape pairs, {endpoints} endpoints (worst {worst:.3} px), 1000 counts in range, {:.2?}", start.elapsed()))
}

// 5 -----------------------------------------------------------------------

fn digest(s: &DiagramSample) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(s.svg.as_bytes());
    h.update([0]);
    h.update(s.metadata_json().as_bytes());
    h.finalize().into()
}

fn determinism() -> Outcome {
    let a: Vec<_> = samples(0..100).iter().map(digest).collect();
    let b: Vec<_> = samples(0..100).iter().map(digest).collect();
    match a.iter().zip(&b).position(|(x, y)| x != y) {
        Some(i) => Err(format!("seed {i} differs between runs")),
        None => Ok("100 seeds hash-identical across two runs".into()),
    }
}

// 6 -----------------------------------------------------------------------

fn perfect(card: &ScoreCard) -> bool {
    let ok = |v: f64| (v - 1.0).abs() <= 1e-9;
    card.shapes.iter().all(|s| s.values().into_iter().all(ok))
        && card.arrows.iter().all(|a| a.values().into_iter().all(ok))
        && ok(card.r)
}

fn self_evaluation() -> Outcome {
    let tiers = Tiers::default();
    let (mut shapes, mut arrows) = (0, 0);
    for (seed, s) in samples(0..500).iter().enumerate() {
        let doc = parse_svg(&s.svg).map_err(|e| e.to_string())?;
        let card = evaluate(&s.metadata, &doc, &tiers);
        ensure(perfect(&card), || format!("seed {seed}: R = {}", card.r))?;
        shapes += card.shapes.len();
        arrows += card.arrows.len();
    }
    Ok(format!("500 samples, {shapes} shapes and {arrows} arrows all 1.0"))
}

// 7 -----------------------------------------------------------------------

fn group_mut<'a>(root: &'a mut Element, id: &str) -> Option<&'a mut Element> {
    root.children.iter_mut().find_map(|n| match n {
        Node::Element(e) if e.id() == Some(id) => Some(e),
        _ => None,
    })
}

fn for_each_drawn(e: &mut Element, f: &mut dyn FnMut(&mut Element)) {
    for c in e.children.iter_mut() {
        if let Node::Element(c) = c {
            if c.kind.is_geometric() {
                f(c);
            }
            for_each_drawn(c, f);
        }
    }
}

fn hex(c: Rgb) -> String {
    format!("#{:02x}{:02x}{:02x}", c.r, c.g, c.b)
}

#[derive(Clone, Copy, Debug)]
enum Corruption {
    FillColor,
    StrokeColor,
    Displace,
    Dash,
    Label,
    Font,
    Resize,
    DropShape,
    ExtraShape,
    DropArrow,
    ArrowColor,
    DropHead,
    ArrowDash,
}

const CORRUPTIONS: [Corruption; 13] = [
    Corruption::FillColor,
    Corruption::StrokeColor,
    Corruption::Displace,
    Corruption::Dash,
    Corruption::Label,
    Corruption::Font,
    Corruption::Resize,
    Corruption::DropShape,
    Corruption::ExtraShape,
    Corruption::DropArrow,
    Corruption::ArrowColor,
    Corruption::DropHead,
    Corruption::ArrowDash,
];

/// Applies one corruption to shape or arrow `pick` of `s`. `amount` in
/// (0, 1] scales the size of the change. Returns None when the sample has
/// nothing to corrupt of that kind.
fn corrupt(s: &DiagramSample, what: Corruption, pick: usize, amount: f64) -> Option<String> {
    let doc = parse_svg(&s.svg).ok()?;
    let shapes = &s.metadata.shapes;
    let arrows = &s.metadata.arrows;
    let shape = shapes.get(pick % shapes.len().max(1))?;
    let arrow = (!arrows.is_empty()).then(|| &arrows[pick % arrows.len()]);
    let shift = |c: Rgb| {
        let d = (40.0 + 180.0 * amount) as i32;
        let f = |v: u8| if v >= 128 { (v as i32 - d).max(0) as u8 } else { (v as i32 + d).min(255) as u8 };
        Rgb { r: f(c.r), g: f(c.g), b: f(c.b) }
    };
    let text = match what {
        Corruption::FillColor => {
            let from = hex(shape.attributes.fill_color);
            s.svg.replace(&from, &hex(shift(shape.attributes.fill_color)))
        }
        Corruption::StrokeColor => {
            let new = hex(shift(shape.attributes.stroke_color));
            doc.edited(|root| {
                if let Some(g) = group_mut(root, &shape.id) {
                    for_each_drawn(g, &mut |e| {
                        e.attrs.insert("stroke".into(), new.clone());
                    });
                }
            })
            .to_svg_string()
        }
        Corruption::Displace => {
            let (dx, dy) = (15.0 + 120.0 * amount, -10.0 - 60.0 * amount);
            doc.edited(|root| {
                if let Some(g) = group_mut(root, &shape.id) {
                    g.attrs.insert("transform".into(), format!("translate({dx:.3},{dy:.3})"));
                }
            })
            .to_svg_string()
        }
        Corruption::Dash => {
            let value = if shape.attributes.border_style == DashClass::Solid { "8 4" } else { "none" };
            doc.edited(|root| {
                if let Some(g) = group_mut(root, &shape.id) {
                    for_each_drawn(g, &mut |e| {
                        e.attrs.insert("stroke-dasharray".into(), value.into());
                    });
                }
            })
            .to_svg_string()
        }
        Corruption::Label => {
            let label = &shape.attributes.label;
            if label.is_empty() {
                return None;
            }
            doc.edited(|root| {
                if let Some(g) = group_mut(root, &shape.id) {
                    for c in g.children.iter_mut() {
                        if let Node::Element(t) = c {
                            if t.local_name() == "text" {
                                t.children = vec![Node::Text(format!("{label} Qzx"))];
                            }
                        }
                    }
                }
            })
            .to_svg_string()
        }
        Corruption::Font => {
            let family = if shape.attributes.font.contains("Courier") { "Georgia, serif" } else { "'Courier New', monospace" };
            doc.edited(|root| {
                if let Some(g) = group_mut(root, &shape.id) {
                    for c in g.children.iter_mut() {
                        if let Node::Element(t) = c {
                            if t.local_name() == "text" {
                                t.attrs.insert("font-family".into(), family.into());
                            }
                        }
                    }
                }
            })
            .to_svg_string()
        }
        Corruption::Resize => {
            // Stretch horizontally about the group's left edge.
            let k = 1.5 + 2.0 * amount;
            let x0 = shape.attributes.center[0] - shape.attributes.size[0] / 2.0;
            doc.edited(|root| {
                if let Some(g) = group_mut(root, &shape.id) {
                    for_each_drawn(g, &mut |e| stretch_x(e, x0, k));
                }
            })
            .to_svg_string()
        }
        Corruption::DropShape => {
            if shapes.len() < 2 {
                return None;
            }
            doc.edited(|root| root.children.retain(|n| !matches!(n, Node::Element(e) if e.id() == Some(shape.id.as_str()))))
                .to_svg_string()
        }
        Corruption::ExtraShape => {
            let x = 5.0 + 40.0 * amount;
            doc.edited(|root| {
                root.push(
                    Element::new("g").with("id", "extra").with_child(
                        Element::new("rect")
                            .with_num("x", x)
                            .with_num("y", 5.0)
                            .with_num("width", 30.0)
                            .with_num("height", 20.0)
                            .with("fill", "#123456")
                            .with("stroke", "#000000"),
                    ),
                )
            })
            .to_svg_string()
        }
        Corruption::DropArrow => {
            let a = arrow?;
            doc.edited(|root| root.children.retain(|n| !matches!(n, Node::Element(e) if e.id() == Some(a.id.as_str()))))
                .to_svg_string()
        }
        Corruption::ArrowColor => {
            let a = arrow?;
            let new = hex(shift(a.attributes.color));
            doc.edited(|root| {
                if let Some(e) = group_mut(root, &a.id) {
                    e.attrs.insert("stroke".into(), new);
                }
            })
            .to_svg_string()
        }
        Corruption::DropHead => {
            let a = arrow?;
            doc.edited(|root| {
                if let Some(e) = group_mut(root, &a.id) {
                    e.attrs.remove("marker-end");
                }
            })
            .to_svg_string()
        }
        Corruption::ArrowDash => {
            let a = arrow?;
            let value = if a.extras.line_pattern == DashClass::Solid { "6 3" } else { "none" };
            doc.edited(|root| {
                if let Some(e) = group_mut(root, &a.id) {
                    e.attrs.insert("stroke-dasharray".into(), value.into());
                }
            })
            .to_svg_string()
        }
    };
    Some(text)
}

fn stretch_x(e: &mut Element, x0: f64, k: f64) {
    let sx = |v: f64| x0 + (v - x0) * k;
    let fmt = |v: f64| format!("{}", (v * 1000.0).round() / 1000.0);
    for key in ["x", "cx", "x1", "x2"] {
        if let Some(v) = e.number(key) {
            e.attrs.insert(key.into(), fmt(sx(v)));
        }
    }
    for key in ["width", "rx"] {
        if let Some(v) = e.number(key) {
            e.attrs.insert(key.into(), fmt(v * k));
        }
    }
    if let Some(r) = e.number("r") {
        // A circle becomes an ellipse of the same height.
        let (cx, cy) = (e.number("cx").unwrap_or(0.0), e.number("cy").unwrap_or(0.0));
        e.name = "ellipse".into();
        e.kind = diagramforge::svg::ElementKind::Ellipse;
        e.attrs.remove("r");
        e.attrs.insert("cx".into(), fmt(cx));
        e.attrs.insert("cy".into(), fmt(cy));
        e.attrs.insert("rx".into(), fmt(r * k));
        e.attrs.insert("ry".into(), fmt(r));
    }
    if let Some(pts) = e.attr("points").map(str::to_string) {
        let nums = diagramforge::svg::parse_number_list(&pts);
        let out: Vec<String> = nums.chunks(2).map(|c| format!("{},{}", fmt(sx(c[0])), fmt(c[1]))).collect();
        e.attrs.insert("points".into(), out.join(" "));
    }
    if let Some(d) = e.attr("d").map(str::to_string) {
        // Generator paths use absolute M/L/A/C/Q/Z commands with x,y pairs;
        // arc radii are stretched along with the x coordinates.
        e.attrs.insert("d".into(), stretch_path(&d, x0, k));
    }
}

fn stretch_path(d: &str, x0: f64, k: f64) -> String {
    let mut out = String::new();
    let mut cmd = 'M';
    let mut idx = 0usize;
    let fmt = |v: f64| format!("{}", (v * 1000.0).round() / 1000.0);
    let tokens: Vec<String> = d
        .replace(',', " ")
        .chars()
        .fold(String::new(), |mut acc, c| {
            if c.is_ascii_alphabetic() && c != 'e' && c != 'E' {
                acc.push(' ');
                acc.push(c);
                acc.push(' ');
            } else {
                acc.push(c);
            }
            acc
        })
        .split_whitespace()
        .map(str::to_string)
        .collect();
    for t in tokens {
        if t.len() == 1 && t.chars().all(|c| c.is_ascii_alphabetic()) {
            cmd = t.chars().next().unwrap();
            idx = 0;
            out.push_str(&t);
            out.push(' ');
            continue;
        }
        let v: f64 = t.parse().unwrap_or(0.0);
        let nv = match cmd {
            'A' => match idx % 7 {
                0 => v * k,
                5 => x0 + (v - x0) * k,
                _ => v,
            },
            'a' => if idx % 7 == 0 || idx % 7 == 5 { v * k } else { v },
            'H' => x0 + (v - x0) * k,
            'h' => v * k,
            'V' | 'v' => v,
            c if c.is_ascii_uppercase() => if idx % 2 == 0 { x0 + (v - x0) * k } else { v },
            _ => if idx % 2 == 0 { v * k } else { v },
        };
        idx += 1;
        out.push_str(&fmt(nv));
        out.push(' ');
    }
    out.trim_end().to_string()
}

fn mode_agreement() -> Outcome {
    let tiers = Tiers::default();
    let perturb = [Corruption::FillColor, Corruption::Displace, Corruption::DropArrow, Corruption::Dash];
    let (mut ds, mut da, mut dr, mut n_a, mut n) = (0.0, 0.0, 0.0, 0usize, 0usize);
    for (i, s) in samples(1000..1200).iter().enumerate() {
        let mut what = perturb[i % 4];
        let pred = match corrupt(s, what, i / 4, 0.5) {
            Some(p) => p,
            None => {
                what = Corruption::FillColor;
                corrupt(s, what, i / 4, 0.5).expect("fill corruption always applies")
            }
        };
        let json = fideval::evaluate_text(&s.metadata, Some(&pred), &tiers);
        let alone = evaluate_standalone(&s.svg, Some(&pred), &tiers).map_err(|e| format!("sample {i}: {e}"))?;
        ds += (json.r_s - alone.r_s).abs();
        if let (Some(a), Some(b)) = (json.r_a, alone.r_a) {
            da += (a - b).abs();
            n_a += 1;
        } else if json.r_a.is_some() != alone.r_a.is_some() {
            return Err(format!("sample {i}: arrow presence differs between modes ({what:?})"));
        }
        dr += (json.r - alone.r).abs();
        n += 1;
    }
    let (ds, da, dr) = (ds / n as f64, da / n_a.max(1) as f64, dr / n as f64);
    ensure(ds <= 0.02 && da <= 0.02 && dr <= 0.02, || format!("mean gaps R_S {ds:.4}, R_A {da:.4}, R {dr:.4}"))?;
    Ok(format!("200 perturbed samples: mean |dR_S| {ds:.4}, |dR_A| {da:.4}, |dR| {dr:.4}"))
}

// 8 -----------------------------------------------------------------------

fn tier_tables() -> Outcome {
    let t = Tiers::default();
    let c = |r, g, b| Some(Rgb { r, g, b });
    let checks: Vec<(&str, f64, f64)> = vec![
        ("color identity", score_color(c(12, 200, 99), c(12, 200, 99)), 1.0),
        ("color diameter", score_color(c(0, 0, 0), c(255, 255, 255)), 0.0),
        ("aspect equal", score_aspect_ratio(2.0, 2.0, &t), 1.0),
        ("aspect 1.2x", score_aspect_ratio(1.0, 1.2, &t), 1.0),
        ("aspect 1/1.2x", score_aspect_ratio(1.2, 1.0, &t), 1.0),
        ("aspect 3x", score_aspect_ratio(1.0, 3.0, &t), 0.0),
        ("aspect 5x", score_aspect_ratio(5.0, 1.0, &t), 0.0),
        ("overlap 0", score_overlap(0, &t), 1.0),
        ("overlap 1", score_overlap(1, &t), 0.4),
        ("overlap 2", score_overlap(2, &t), 0.0),
        ("overlap 4", score_overlap(4, &t), 0.0),
        ("head equal", score_head_size(10.0, 1.0, 10.0, 1.0, &t), 1.0),
        ("head +30%", score_head_size(10.0, 1.0, 13.0, 1.0, &t), 1.0),
        ("head -30%", score_head_size(13.0, 1.0, 10.0, 1.0, &t), 1.0),
        ("head 2.6x", score_head_size(10.0, 1.0, 26.0, 1.0, &t), 0.1),
        ("head 4x", score_head_size(40.0, 1.0, 10.0, 1.0, &t), 0.1),
        ("fill same", score_fill_style(FillStyle::Solid, FillStyle::Solid, &t), 1.0),
        ("fill both patterned", score_fill_style(FillStyle::Crosshatch, FillStyle::Dots, &t), 0.5),
        ("fill solid vs patterned", score_fill_style(FillStyle::Solid, FillStyle::Crosshatch, &t), 0.0),
        ("border same", score_dash_class(DashClass::Dashed, DashClass::Dashed, &t), 1.0),
        ("border both patterned", score_dash_class(DashClass::Dashed, DashClass::Dotted, &t), 0.5),
        ("border solid vs dashed", score_dash_class(DashClass::Solid, DashClass::Dashed, &t), 0.0),
        ("border from dasharray", score_border_style(DashClass::Dotted, Some("1 3"), 1.0, &t), 1.0),
    ];
    for (name, got, want) in &checks {
        ensure(got == want, || format!("{name}: {got} != {want}"))?;
    }
    Ok(format!("{} tier values exact", checks.len()))
}

// 9 -----------------------------------------------------------------------

/// Thousandths of `x`, rounding a trailing 5 to the even neighbour. `x` is
/// first snapped to four decimals so binary residue does not break ties.
fn round3_half_even(x: f64) -> i64 {
    let t = (x * 10_000.0).round() as i64;
    let (q, rem) = (t / 10, t % 10);
    if rem > 5 || (rem == 5 && q % 2 == 1) {
        q + 1
    } else {
        q
    }
}

fn composite_arithmetic() -> Outcome {
    // Reference composites are rounded half-to-even: both rows below land
    // exactly on a .5 in the fourth decimal.
    for (r_s, r_a, want) in [(0.675, 0.602, 638), (0.654, 0.583, 618)] {
        let r = overall(r_s, Some(r_a));
        let got = round3_half_even(r);
        ensure(got == want, || format!("({r_s} + {r_a}) / 2 = {r} rounds to 0.{got}, expected 0.{want}"))?;
    }
    let r = overall(0.675, Some(0.602));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for card in 0..100 {
        let n_s = rng.random_range(0..8usize);
        let n_a = rng.random_range(0..6usize);
        let (ex_s, ex_a) = (rng.random_range(0..4usize), rng.random_range(0..4usize));
        let shape_rows: Vec<Vec<f64>> = (0..n_s).map(|_| (0..9).map(|_| rng.random::<f64>()).collect()).collect();
        let arrow_rows: Vec<Vec<f64>> = (0..n_a).map(|_| (0..7).map(|_| rng.random::<f64>()).collect()).collect();
        // Oracle: sum of per-element means over matched + extra elements.
        let oracle = |rows: &[Vec<f64>], extra: usize| -> f64 {
            if rows.is_empty() {
                return if extra == 0 { 1.0 } else { 0.0 };
            }
            let total: f64 = rows.iter().map(|r| r.iter().sum::<f64>() / r.len() as f64).sum();
            total / (rows.len() + extra) as f64
        };
        let means = |rows: &[Vec<f64>]| rows.iter().map(|r| r.iter().sum::<f64>() / r.len() as f64).collect::<Vec<_>>();
        let r_s = composite(&means(&shape_rows), ex_s);
        let r_a = (n_a > 0).then(|| composite(&means(&arrow_rows), ex_a));
        let want_s = oracle(&shape_rows, ex_s);
        let want_r = match n_a {
            0 => want_s,
            _ => (want_s + oracle(&arrow_rows, ex_a)) / 2.0,
        };
        ensure((r_s - want_s).abs() < 1e-12, || format!("card {card}: R_S {r_s} vs {want_s}"))?;
        let got = overall(r_s, r_a);
        ensure((got - want_r).abs() < 1e-12, || format!("card {card}: R {got} vs {want_r}"))?;
    }
    Ok(format!("reference rows -> 0.{} and 0.618; 100 random cards match the oracle", round3_half_even(r)))
}

// 10 ----------------------------------------------------------------------

fn reward_aggregation() -> Outcome {
    let s = RubricScores::new(0.8, 0.6, 1.0, 0.4);
    let full = aggregate_reward(RewardInput::Scored(s), RewardMask::ALL);
    ensure((full - 0.7).abs() < 1e-15, || format!("(0.8,0.6,1.0,0.4) -> {full}"))?;
    ensure(aggregate_reward(RewardInput::RenderFailed, RewardMask::ALL) == 0.0, || "render failure not 0".into())?;
    let masks = [
        ("full", [true; 4]),
        ("no-presence", [false, true, true, true]),
        ("no-layout", [true, false, true, true]),
        ("no-connectivity", [true, true, false, true]),
        ("no-details", [true, true, true, false]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..1000 {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
        let input = RewardInput::Scored(RubricScores::new(v[0], v[1], v[2], v[3]));
        for (name, keep) in masks {
            let mask = RewardMask::from_name(name).ok_or(format!("mask {name} unknown"))?;
            let kept: Vec<f64> = (0..4).filter(|&i| keep[i]).map(|i| v[i]).collect();
            let want = kept.iter().sum::<f64>() / kept.len() as f64;
            let got = aggregate_reward(input, mask);
            ensure((got - want).abs() < 1e-12, || format!("trial {trial} {name}: {got} vs {want}"))?;
        }
    }
    Ok("0.7 exact, render failure 0, 5 masks x 1000 tuples match".into())
}

// 11 ----------------------------------------------------------------------

fn monotonicity() -> Outcome {
    let tiers = Tiers::default();
    let pool = samples(2000..2040);
    let base: Vec<f64> = pool.iter().map(|s| evaluate(&s.metadata, &parse_svg(&s.svg).unwrap(), &tiers).r).collect();
    let strategy = (0..pool.len(), 0..CORRUPTIONS.len(), 0usize..64, 0.05f64..1.0);
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let applied = std::cell::Cell::new(0usize);
    let lowered = std::cell::Cell::new(0usize);
    let result = runner.run(&strategy, |(si, ci, pick, amount)| {
        let s = &pool[si];
        let Some(pred) = corrupt(s, CORRUPTIONS[ci], pick, amount) else { return Ok(()) };
        let r = fideval::evaluate_text(&s.metadata, Some(&pred), &tiers).r;
        applied.set(applied.get() + 1);
        if r < base[si] {
            lowered.set(lowered.get() + 1);
        }
        if r > base[si] + 1e-12 {
            return Err(TestCaseError::fail(format!("{:?} on sample {si} raised R {} -> {r}", CORRUPTIONS[ci], base[si])));
        }
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    Ok(format!("1000 trials ({} applicable): R never increased, strictly lower in {}", applied.get(), lowered.get()))
}

// 12 ----------------------------------------------------------------------

fn hermetic_judge() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let stub = dir.path().join("stub");
    std::fs::create_dir_all(&stub).map_err(|e| e.to_string())?;
    let put = |name: &str, body: &str| std::fs::write(stub.join(name), body).map_err(|e| e.to_string());
    put("judge.response", "Scores:\n```json\n{\"presence\":0.8,\"layout\":0.6,\"connectivity\":1.0,\"details\":0.4}\n```")?;
    put("garbled.response", "{\"presence\": \"lots\"}")?;
    put("slow.response", "{\"presence\":1,\"layout\":1,\"connectivity\":1,\"details\":1}")?;
    put("slow.delay_ms", "2000")?;
    put("flaky.error", "transient")?;

    let shim = RenderShim::new("cp {in} {out}", Duration::from_secs(10));
    let workdir = dir.path().to_path_buf();
    let render = |svg: &str| -> Result<ImageData, String> {
        let input = workdir.join("candidate.svg");
        let output = workdir.join("candidate.png");
        std::fs::write(&input, svg).map_err(|e| e.to_string())?;
        shim.render(&input, &output).map_err(|e| e.to_string())?;
        std::fs::read(&output).map(ImageData::png).map_err(|e| e.to_string())
    };
    let client = JudgeClient::with_limits(Arc::new(StubTransport::new(&stub)), 1, Duration::from_millis(1), 2);
    let reference = ImageData::png(b"reference raster".to_vec());
    let good = "Here you go:\n```svg\n<svg xmlns=\"http://www.w3.org/2000/svg\"><rect width=\"5\" height=\"5\"/></svg>\n```";
    let run = |output: &str, model: &str, mask: RewardMask, timeout_ms: u64| {
        reward_for_output(output, render, &reference, &client, model, Duration::from_millis(timeout_ms), mask)
    };

    let cases: Vec<(&str, diagramforge::judge::RewardOutcome, f64, RewardDiagnostic)> = vec![
        ("scored", run(good, "judge", RewardMask::ALL, 1000), 0.7, RewardDiagnostic::Ok),
        ("masked", run(good, "judge", RewardMask::NO_DETAILS, 1000), 0.8, RewardDiagnostic::Ok),
        ("no block", run("I would draw a box.", "judge", RewardMask::ALL, 1000), 0.0, RewardDiagnostic::NoSvgBlock),
        ("malformed", run(good, "garbled", RewardMask::ALL, 1000), 0.0, RewardDiagnostic::Malformed),
        ("timeout", run(good, "slow", RewardMask::ALL, 100), 0.0, RewardDiagnostic::Timeout),
        ("transport", run(good, "flaky", RewardMask::ALL, 1000), 0.0, RewardDiagnostic::Transport),
    ];
    for (name, got, reward, diag) in &cases {
        ensure((got.reward - reward).abs() < 1e-12 && got.diagnostic == *diag, || {
            format!("{name}: got {} / {:?}, expected {reward} / {diag:?}", got.reward, got.diagnostic)
        })?;
    }
    let failing = RenderShim::new("false {in} {out}", Duration::from_secs(10));
    let broken = reward_for_output(
        good,
        |svg: &str| {
            let input = workdir.join("x.svg");
            std::fs::write(&input, svg).map_err(|e| e.to_string())?;
            failing.render(&input, &workdir.join("x.png")).map_err(|e| e.to_string())?;
            Ok(ImageData::png(Vec::new()))
        },
        &reference,
        &client,
        "judge",
        Duration::from_secs(1),
        RewardMask::ALL,
    );
    ensure(broken.reward == 0.0 && broken.diagnostic == RewardDiagnostic::RenderFailed, || {
        format!("render failure: {} / {:?}", broken.reward, broken.diagnostic)
    })?;
    Ok(format!("{} stubbed paths plus render failure map to the expected reward and diagnostic", cases.len()))
}

// -------------------------------------------------------------------------

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("complexity formulas", complexity_formulas),
        ("corpus bands", corpus_bands),
        ("filter rule", filter_rule),
        ("generator geometry", generator_geometry),
        ("determinism", determinism),
        ("self-evaluation", self_evaluation),
        ("mode agreement", mode_agreement),
        ("tier tables", tier_tables),
        ("composite arithmetic", composite_arithmetic),
        ("reward aggregation", reward_aggregation),
        ("monotonicity", monotonicity),
        ("hermetic judge", hermetic_judge),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

proptest! {
    #![proptest_config(Config { cases: 64, failure_persistence: None, ..Config::default() })]

    #[test]
    fn composite_never_exceeds_mean(scores in prop::collection::vec(0.0f64..=1.0, 1..20), extra in 0usize..10) {
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        let c = composite(&scores, extra);
        prop_assert!(c <= mean + 1e-12);
        prop_assert!(c >= 0.0);
    }
}

