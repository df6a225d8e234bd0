//! Rubric reward: candidate SVG extraction, judge response parsing and the
//! four-component average, plus the remote judge client.

mod client;
pub mod prompts;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use client::{
    request_hash, HttpTransport, ImageData, JudgeClient, JudgeError, JudgeRequest, StubTransport,
    Transport, TransportFailure,
};
pub use prompts::{build_prompt, PromptKind};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("no <svg>...</svg> block in model output")]
pub struct NoSvgBlock;

/// First `<svg ...>` through its matching `</svg>`. Nested `<svg>` elements
/// are balanced; a self-closing root is returned on its own.
pub fn extract_svg_block(output: &str) -> Result<&str, NoSvgBlock> {
    let start = find_open(output, 0).ok_or(NoSvgBlock)?;
    let mut depth = 0usize;
    let mut i = start;
    while i < output.len() {
        let rest = &output[i..];
        if rest.starts_with("</svg") {
            let close = rest.find('>').ok_or(NoSvgBlock)?;
            depth -= 1;
            i += close + 1;
            if depth == 0 {
                return Ok(&output[start..i]);
            }
        } else if is_open_at(output, i) {
            let close = rest.find('>').ok_or(NoSvgBlock)?;
            i += close + 1;
            if !output[..i].ends_with("/>") {
                depth += 1;
            } else if depth == 0 {
                return Ok(&output[start..i]);
            }
        } else {
            i += rest.chars().next().map_or(1, char::len_utf8);
        }
    }
    Err(NoSvgBlock)
}

fn is_open_at(s: &str, i: usize) -> bool {
    s[i..].starts_with("<svg")
        && s[i + 4..].chars().next().is_some_and(|c| c.is_whitespace() || c == '>' || c == '/')
}

fn find_open(s: &str, from: usize) -> Option<usize> {
    let mut i = from;
    while let Some(off) = s[i..].find("<svg") {
        if is_open_at(s, i + off) {
            return Some(i + off);
        }
        i += off + 4;
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RubricScores {
    pub presence: f64,
    pub layout: f64,
    pub connectivity: f64,
    pub details: f64,
}

impl RubricScores {
    pub fn new(presence: f64, layout: f64, connectivity: f64, details: f64) -> Self {
        RubricScores { presence, layout, connectivity, details }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.presence, self.layout, self.connectivity, self.details]
    }
}

pub const RUBRIC_KEYS: [&str; 4] = ["presence", "layout", "connectivity", "details"];

#[derive(Debug, Error, Clone, PartialEq)]
#[error("malformed judge response ({reason}): {raw:?}")]
pub struct MalformedJudgeResponse {
    pub reason: String,
    pub raw: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsedRubric {
    pub scores: RubricScores,
    /// Components whose value fell outside [0, 1] and was clamped.
    pub clamped: Vec<String>,
}

/// Reads the four-field score object, tolerating surrounding prose or code
/// fences. Values outside [0, 1] are clamped and reported.
pub fn parse_rubric_scores(response: &str) -> Result<ParsedRubric, MalformedJudgeResponse> {
    let malformed = |reason: &str| MalformedJudgeResponse { reason: reason.into(), raw: response.into() };
    let (Some(open), Some(close)) = (response.find('{'), response.rfind('}')) else {
        return Err(malformed("no JSON object"));
    };
    if close < open {
        return Err(malformed("no JSON object"));
    }
    let value: serde_json::Value =
        serde_json::from_str(&response[open..=close]).map_err(|e| malformed(&e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| malformed("not an object"))?;
    let mut vals = [0.0; 4];
    let mut clamped = Vec::new();
    for (slot, key) in vals.iter_mut().zip(RUBRIC_KEYS) {
        let v = obj
            .get(key)
            .ok_or_else(|| malformed(&format!("missing \"{key}\"")))?
            .as_f64()
            .ok_or_else(|| malformed(&format!("\"{key}\" is not a number")))?;
        if !(0.0..=1.0).contains(&v) {
            log::warn!("judge score {key}={v} outside [0,1], clamping");
            clamped.push(key.to_string());
        }
        *slot = v.clamp(0.0, 1.0);
    }
    Ok(ParsedRubric { scores: RubricScores::new(vals[0], vals[1], vals[2], vals[3]), clamped })
}

/// Which rubric components enter the average.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewardMask {
    pub presence: bool,
    pub layout: bool,
    pub connectivity: bool,
    pub details: bool,
}

impl Default for RewardMask {
    fn default() -> Self {
        RewardMask::ALL
    }
}

impl RewardMask {
    pub const ALL: RewardMask =
        RewardMask { presence: true, layout: true, connectivity: true, details: true };
    pub const NO_PRESENCE: RewardMask = RewardMask { presence: false, ..RewardMask::ALL };
    pub const NO_LAYOUT: RewardMask = RewardMask { layout: false, ..RewardMask::ALL };
    pub const NO_CONNECTIVITY: RewardMask = RewardMask { connectivity: false, ..RewardMask::ALL };
    pub const NO_DETAILS: RewardMask = RewardMask { details: false, ..RewardMask::ALL };

    pub fn as_array(&self) -> [bool; 4] {
        [self.presence, self.layout, self.connectivity, self.details]
    }

    pub fn from_name(name: &str) -> Option<RewardMask> {
        match name.to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "full" | "all" => Some(RewardMask::ALL),
            "no-presence" => Some(RewardMask::NO_PRESENCE),
            "no-layout" => Some(RewardMask::NO_LAYOUT),
            "no-connectivity" => Some(RewardMask::NO_CONNECTIVITY),
            "no-details" => Some(RewardMask::NO_DETAILS),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RewardInput {
    Scored(RubricScores),
    RenderFailed,
}

/// Mean of the unmasked components; zero on render failure or an empty mask.
pub fn aggregate_reward(input: RewardInput, mask: RewardMask) -> f64 {
    let RewardInput::Scored(s) = input else {
        return 0.0;
    };
    let (sum, k) = s
        .as_array()
        .iter()
        .zip(mask.as_array())
        .filter(|(_, keep)| *keep)
        .fold((0.0, 0usize), |(sum, k), (v, _)| (sum + v, k + 1));
    if k == 0 {
        0.0
    } else {
        sum / k as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewardDiagnostic {
    Ok,
    NoSvgBlock,
    RenderFailed,
    Timeout,
    Transport,
    Quota,
    Malformed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardOutcome {
    pub reward: f64,
    pub diagnostic: RewardDiagnostic,
    pub scores: Option<RubricScores>,
    pub detail: Option<String>,
}

impl RewardOutcome {
    pub fn failed(diagnostic: RewardDiagnostic, detail: impl Into<String>) -> Self {
        RewardOutcome { reward: 0.0, diagnostic, scores: None, detail: Some(detail.into()) }
    }
}

impl From<&JudgeError> for RewardDiagnostic {
    fn from(e: &JudgeError) -> Self {
        match e {
            JudgeError::Timeout(_) => RewardDiagnostic::Timeout,
            JudgeError::QuotaExceeded(_) => RewardDiagnostic::Quota,
            JudgeError::Transport(_) | JudgeError::InvalidRequest(_) => RewardDiagnostic::Transport,
        }
    }
}

/// Full reward path for one model output: extract the SVG, rasterize it with
/// `render`, ask the judge, and average. Every failure yields reward 0.
pub fn reward_for_output<R>(
    model_output: &str,
    render: R,
    reference: &ImageData,
    client: &JudgeClient,
    model_id: &str,
    timeout: std::time::Duration,
    mask: RewardMask,
) -> RewardOutcome
where
    R: FnOnce(&str) -> Result<ImageData, String>,
{
    let svg = match extract_svg_block(model_output) {
        Ok(s) => s,
        Err(e) => return RewardOutcome::failed(RewardDiagnostic::NoSvgBlock, e.to_string()),
    };
    let candidate = match render(svg) {
        Ok(img) => img,
        Err(e) => return RewardOutcome::failed(RewardDiagnostic::RenderFailed, e),
    };
    let req = JudgeRequest {
        reference_image: reference.clone(),
        candidate_image: candidate,
        rubric_prompt: prompts::JUDGE.to_string(),
        model_id: model_id.to_string(),
        timeout,
    };
    let raw = match client.submit(&req) {
        Ok(r) => r,
        Err(e) => return RewardOutcome::failed((&e).into(), e.to_string()),
    };
    match parse_rubric_scores(&raw) {
        Ok(parsed) => RewardOutcome {
            reward: aggregate_reward(RewardInput::Scored(parsed.scores), mask),
            diagnostic: RewardDiagnostic::Ok,
            scores: Some(parsed.scores),
            detail: (!parsed.clamped.is_empty()).then(|| format!("clamped: {}", parsed.clamped.join(","))),
        },
        Err(e) => RewardOutcome::failed(RewardDiagnostic::Malformed, e.reason),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn svg_block_extraction() {
        assert_eq!(extract_svg_block("```\n<svg>...</svg>\n```"), Ok("<svg>...</svg>"));
        assert_eq!(extract_svg_block("no code here"), Err(NoSvgBlock));
        let two = "a <svg id=\"1\"><rect/></svg> b <svg id=\"2\"></svg>";
        assert_eq!(extract_svg_block(two), Ok("<svg id=\"1\"><rect/></svg>"));
        let nested = "<svg><svg x=\"1\"></svg><g/></svg>tail";
        assert_eq!(extract_svg_block(nested), Ok("<svg><svg x=\"1\"></svg><g/></svg>"));
        assert_eq!(extract_svg_block("<svgfoo></svgfoo>"), Err(NoSvgBlock));
        assert_eq!(extract_svg_block("<svg><rect/>"), Err(NoSvgBlock));
        assert_eq!(extract_svg_block("x <svg/> y"), Ok("<svg/>"));
    }

    #[test]
    fn rubric_parsing() {
        let p = parse_rubric_scores(r#"{"presence":0.8,"layout":0.6,"connectivity":1.0,"details":0.4}"#)
            .unwrap();
        assert_eq!(p.scores, RubricScores::new(0.8, 0.6, 1.0, 0.4));
        assert!(p.clamped.is_empty());
        let err = parse_rubric_scores(r#"{"presence":0.8,"layout":0.6,"connectivity":1.0}"#).unwrap_err();
        assert!(err.reason.contains("details"));
        let c = parse_rubric_scores(
            "Sure:\n```json\n{\"presence\":1,\"layout\":1.4,\"connectivity\":0,\"details\":-2}\n```",
        )
        .unwrap();
        assert_eq!(c.scores.layout, 1.0);
        assert_eq!(c.scores.details, 0.0);
        assert_eq!(c.clamped, vec!["layout", "details"]);
        assert!(parse_rubric_scores("nothing").is_err());
        assert!(parse_rubric_scores(r#"{"presence":"high","layout":1,"connectivity":1,"details":1}"#).is_err());
    }

    #[test]
    fn reward_values() {
        let all = RubricScores::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(aggregate_reward(RewardInput::Scored(all), RewardMask::ALL), 1.0);
        let s = RubricScores::new(0.8, 0.6, 1.0, 0.4);
        assert!((aggregate_reward(RewardInput::Scored(s), RewardMask::ALL) - 0.7).abs() < 1e-15);
        assert_eq!(aggregate_reward(RewardInput::RenderFailed, RewardMask::ALL), 0.0);
        assert!((aggregate_reward(RewardInput::Scored(s), RewardMask::NO_PRESENCE) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(RewardMask::from_name("No Details"), Some(RewardMask::NO_DETAILS));
    }

    proptest! {
        #[test]
        fn reward_monotone(base in proptest::array::uniform4(0.0f64..=1.0), idx in 0usize..4, bump in 0.0f64..=1.0) {
            let mut up = base;
            up[idx] = (up[idx] + bump).min(1.0);
            let a = aggregate_reward(RewardInput::Scored(RubricScores::new(base[0], base[1], base[2], base[3])), RewardMask::ALL);
            let b = aggregate_reward(RewardInput::Scored(RubricScores::new(up[0], up[1], up[2], up[3])), RewardMask::ALL);
            prop_assert!(b >= a);
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }
}
