//! Corpus-level aggregation of score cards.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::ScoreCard;

pub const SHAPE_COLUMNS: [&str; 9] = ["Lbl", "Typ", "FC", "FS", "SC", "BS", "Pos", "Fnt", "AR"];
pub const ARROW_COLUMNS: [&str; 7] = ["Src", "Dst", "Hd", "Sz", "Cv", "Ovl", "Col"];

/// Means over a corpus. Attribute columns pool every ground-truth record;
/// the composites average per-sample values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub samples: usize,
    pub missing: usize,
    pub parse_errors: usize,
    pub shape_means: Vec<f64>,
    pub arrow_means: Vec<f64>,
    pub r_s: f64,
    pub r_a: Option<f64>,
    pub r: f64,
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

impl Aggregate {
    pub fn from_cards<'a>(cards: impl IntoIterator<Item = &'a ScoreCard>) -> Aggregate {
        let mut shape_cols: Vec<Vec<f64>> = vec![Vec::new(); 9];
        let mut arrow_cols: Vec<Vec<f64>> = vec![Vec::new(); 7];
        let (mut rs, mut ra, mut r) = (Vec::new(), Vec::new(), Vec::new());
        let mut agg = Aggregate::default();
        for c in cards {
            agg.samples += 1;
            agg.missing += c.coverage.missing as usize;
            agg.parse_errors += c.coverage.parse_error as usize;
            for s in &c.shapes {
                for (col, v) in shape_cols.iter_mut().zip(s.values()) {
                    col.push(v);
                }
            }
            for a in &c.arrows {
                for (col, v) in arrow_cols.iter_mut().zip(a.values()) {
                    col.push(v);
                }
            }
            rs.push(c.r_s);
            ra.extend(c.r_a);
            r.push(c.r);
        }
        agg.shape_means = shape_cols.iter().map(|c| mean(c)).collect();
        agg.arrow_means = arrow_cols.iter().map(|c| mean(c)).collect();
        agg.r_s = mean(&rs);
        agg.r_a = (!ra.is_empty()).then(|| mean(&ra));
        agg.r = mean(&r);
        agg
    }

    /// Plain-text table: one header row, one value row, three decimals.
    pub fn table(&self) -> String {
        let mut head = String::new();
        let mut row = String::new();
        let cols = SHAPE_COLUMNS
            .iter()
            .zip(&self.shape_means)
            .chain(ARROW_COLUMNS.iter().zip(&self.arrow_means))
            .map(|(k, v)| (k.to_string(), format!("{v:.3}")))
            .chain([
                ("R_S".to_string(), format!("{:.3}", self.r_s)),
                ("R_A".to_string(), self.r_a.map_or("-".to_string(), |v| format!("{v:.3}"))),
                ("R".to_string(), format!("{:.3}", self.r)),
                ("Miss.".to_string(), self.missing.to_string()),
                ("Err.".to_string(), self.parse_errors.to_string()),
            ]);
        for (k, v) in cols {
            let w = k.len().max(v.len());
            let _ = write!(head, "{k:>w$} ");
            let _ = write!(row, "{v:>w$} ");
        }
        format!("{}\n{}\n", head.trim_end(), row.trim_end())
    }
}
