use diagramforge::curator::clean_svg;
use diagramforge::fideval::{score_aspect_ratio, score_color, score_label, Tiers};
use diagramforge::genforge::{generate, ray_cast_boundary, GenConfig, Outline};
use diagramforge::judge::extract_svg_block;
use diagramforge::svg::{classify_elements, parse_svg, Point, Rgb};
use proptest::prelude::*;
use proptest::test_runner::Config;

fn rgb() -> impl Strategy<Value = Rgb> {
    (any::<u8>(), any::<u8>(), any::<u8>()).prop_map(|(r, g, b)| Rgb { r, g, b })
}

fn on_outline(outline: &Outline, p: Point) -> f64 {
    match outline {
        Outline::Ellipse { c, rx, ry } => (((p.x - c.x) / rx).powi(2) + ((p.y - c.y) / ry).powi(2)).sqrt() - 1.0,
        Outline::Polygon(v) => (0..v.len())
            .map(|i| diagramforge::svg::point_segment_distance(p, v[i], v[(i + 1) % v.len()]))
            .fold(f64::INFINITY, f64::min),
    }
}

proptest! {
    #![proptest_config(Config { cases: 48, failure_persistence: None, ..Config::default() })]

    #[test]
    fn serializer_is_idempotent(seed in 0u64..10_000) {
        let s = generate(seed, &GenConfig::default()).unwrap();
        let once = parse_svg(&s.svg).unwrap().to_svg_string();
        let twice = parse_svg(&once).unwrap().to_svg_string();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn cleaning_keeps_counts(seed in 0u64..10_000) {
        let s = generate(seed, &GenConfig::default()).unwrap();
        let doc = parse_svg(&s.svg).unwrap();
        let cleaned = parse_svg(&clean_svg(&doc).to_svg_string()).unwrap();
        prop_assert_eq!(classify_elements(&doc), classify_elements(&cleaned));
    }

    #[test]
    fn ray_cast_lands_on_outline(seed in 0u64..5_000, angle in 0.0f64..std::f64::consts::TAU) {
        let s = generate(seed, &GenConfig::default()).unwrap();
        for shape in &s.shapes {
            let a = shape.geometry.anchor;
            let target = Point::new(a.x + 2000.0 * angle.cos(), a.y + 2000.0 * angle.sin());
            let hit = ray_cast_boundary(shape, target).unwrap();
            let err = on_outline(&shape.geometry.outline, hit);
            prop_assert!(err.abs() < 1e-6, "{} {:?}: off by {}", shape.id, shape.kind, err);
        }
    }

    #[test]
    fn color_score_is_symmetric_and_bounded(a in rgb(), b in rgb()) {
        let s = score_color(Some(a), Some(b));
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, score_color(Some(b), Some(a)));
        prop_assert_eq!(score_color(Some(a), Some(a)), 1.0);
    }

    #[test]
    fn aspect_score_is_symmetric(g in 0.05f64..20.0, p in 0.05f64..20.0) {
        let t = Tiers::default();
        let s = score_aspect_ratio(g, p, &t);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s - score_aspect_ratio(p, g, &t)).abs() < 1e-12);
    }

    #[test]
    fn label_score_bounds(a in "[a-zA-Z ]{0,20}", b in "[a-zA-Z ]{0,20}") {
        let s = score_label(&a, &b);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(score_label(&a, &a.to_uppercase()), 1.0);
    }

    #[test]
    fn first_svg_block_is_extracted(prefix in "[a-z .,\n]{0,40}", suffix in "[a-z .,<>/\n]{0,40}", w in 1u32..500) {
        let block = format!("<svg width=\"{w}\"><rect/></svg>");
        let text = format!("{prefix}{block}{suffix}");
        prop_assert_eq!(extract_svg_block(&text), Ok(block.as_str()));
    }
}
