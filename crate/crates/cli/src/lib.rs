//! Batch pipelines over diagram corpora.

pub mod manifest;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use diagramforge::curator::{clean_svg, filter_text, CorruptionConfig, FilterThresholds};
use diagramforge::fideval::{
    evaluate_text, extract_groundtruth_from_svg, Aggregate, ScoreCard, Tiers, ARROW_COLUMNS, SHAPE_COLUMNS,
};
use diagramforge::genforge::{generate, sample_seed, GenConfig};
use diagramforge::judge::{HttpTransport, ImageData, JudgeClient, StubTransport, Transport};
use diagramforge::judge::{reward_for_output, RewardMask, RewardOutcome};
use diagramforge::metrics::{corpus_stats, ComplexityReport, StructuralDefinition};
use diagramforge::model::SampleMetadata;
use diagramforge::render::RenderShim;
use diagramforge::svg::{classify_elements, parse_svg};

use manifest::{relative_to, write_atomic, write_manifest, Manifest, ManifestRecord};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or values. Exit status 2.
    Usage(String),
    /// Filesystem or data errors. Exit status 1.
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: impl fmt::Display) -> CliError {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(name = "diagramforge", version, about = "Generate, curate, measure and score SVG diagrams")]
pub struct Cli {
    /// Worker threads for per-sample work (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    Json,
    Standalone,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate shape-and-arrow diagrams with ground-truth metadata.
    Generate {
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// key = value config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Extra key=value overrides applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Rasterizer template with {in} and {out} placeholders.
        #[arg(long)]
        render_cmd: Option<String>,
        #[arg(long, default_value_t = 30.0)]
        render_timeout: f64,
    },
    /// Screen SVGs by primitive ratio, complex-element count and corruption.
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0.40)]
        min_ratio: f64,
        #[arg(long, default_value_t = 50)]
        max_complex: u64,
        /// Write only the kept records.
        #[arg(long)]
        keep_only: bool,
    },
    /// Normalize SVGs: strip comments and metadata, unify the viewBox.
    Clean {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Complexity statistics over a manifest or directory.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also report means after a cleaning pass.
        #[arg(long)]
        with_cleaned: bool,
        #[arg(long, value_enum, default_value = "linear-element-total")]
        sc_definition: ScDefinition,
    },
    /// Fidelity scores of predictions against ground truth.
    Eval {
        #[arg(long)]
        gt_dir: PathBuf,
        #[arg(long)]
        pred_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = EvalMode::Json)]
        mode: EvalMode,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Judge-based rewards for model outputs.
    Reward {
        /// JSONL with id, output (or output_path) and reference (raster path).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Answer from canned responses in this directory.
        #[arg(long)]
        stub_dir: Option<PathBuf>,
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long, default_value = "judge")]
        model_id: String,
        #[arg(long)]
        render_cmd: Option<String>,
        #[arg(long, default_value_t = 30.0)]
        render_timeout: f64,
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// full, no-presence, no-layout, no-connectivity or no-details.
        #[arg(long, default_value = "full")]
        mask: String,
    },
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Generate { count, seed, out_dir, config, overrides, render_cmd, render_timeout } => {
            let cfg = load_config(config.as_deref(), &overrides)?;
            let shim = render_shim(render_cmd, render_timeout)?;
            cmd_generate(count, seed, &out_dir, &cfg, shim.as_ref())
        }
        Command::Filter { input, output, min_ratio, max_complex, keep_only } => {
            cmd_filter(&input, &output, FilterThresholds { min_ratio, max_complex }, keep_only)
        }
        Command::Clean { input, out_dir } => cmd_clean(&input, &out_dir),
        Command::Stats { input, report, csv, with_cleaned, sc_definition } => {
            cmd_stats(&input, report.as_deref(), csv.as_deref(), with_cleaned, sc_definition.into())
        }
        Command::Eval { gt_dir, pred_dir, mode, report, csv } => {
            cmd_eval(&gt_dir, &pred_dir, mode, report.as_deref(), csv.as_deref())
        }
        Command::Reward { input, report, stub_dir, endpoint, model_id, render_cmd, render_timeout, timeout, mask } => {
            let mask = RewardMask::from_name(&mask).ok_or_else(|| CliError::Usage(format!("unknown mask {mask:?}")))?;
            let shim = render_shim(render_cmd, render_timeout)?
                .ok_or_else(|| CliError::Usage("reward needs --render-cmd or DIAGRAMFORGE_RENDER_CMD".into()))?;
            let transport: Arc<dyn Transport> = match (stub_dir, endpoint) {
                (Some(dir), _) => Arc::new(StubTransport::new(dir)),
                (None, Some(url)) => Arc::new(HttpTransport::new(url, std::env::var("DIAGRAMFORGE_JUDGE_KEY").ok())),
                (None, None) => Arc::new(
                    HttpTransport::from_env()
                        .ok_or_else(|| CliError::Usage("reward needs --stub-dir, --endpoint or a judge endpoint in the environment".into()))?,
                ),
            };
            let secs = |s: f64, name: &str| {
                Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("invalid {name}")))
            };
            let client = JudgeClient::new(transport);
            cmd_reward(&input, &report, &client, &model_id, &shim, secs(timeout, "--timeout")?, mask)
        }
    })
}

/// Parses a `key = value` config file; `#` starts a comment.
pub fn parse_config_text(text: &str, cfg: &mut GenConfig) -> Result<(), CliError> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        cfg.set(k.trim(), v.trim()).map_err(|e| CliError::Usage(format!("config line {}: {e}", i + 1)))?;
    }
    Ok(())
}

fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<GenConfig, CliError> {
    let mut cfg = GenConfig::default();
    if let Some(p) = path {
        let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
        parse_config_text(&text, &mut cfg)?;
    }
    parse_config_text(&overrides.join("\n"), &mut cfg)?;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn render_shim(flag: Option<String>, timeout: f64) -> Result<Option<RenderShim>, CliError> {
    let t = Duration::try_from_secs_f64(timeout).map_err(|_| CliError::Usage("invalid --render-timeout".into()))?;
    let shim = match flag {
        Some(tpl) => Some(RenderShim::new(tpl, t)),
        None => RenderShim::from_env(t),
    };
    if let Some(s) = &shim {
        if !s.template.contains("{in}") || !s.template.contains("{out}") {
            return Err(CliError::Usage("render template needs {in} and {out} placeholders".into()));
        }
    }
    Ok(shim)
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

pub fn cmd_generate(count: u64, seed: u64, out_dir: &Path, cfg: &GenConfig, shim: Option<&RenderShim>) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let hash = cfg.hash();
    let records: Vec<Result<ManifestRecord, CliError>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let id = format!("{i:06}");
            let s = sample_seed(seed, i);
            let sample = generate(s, cfg).map_err(|e| CliError::Io(format!("sample {id}: {e}")))?;
            let svg = out_dir.join(format!("{id}.svg"));
            let meta = out_dir.join(format!("{id}.json"));
            write_atomic(&svg, sample.svg.as_bytes())?;
            write_atomic(&meta, sample.metadata_json().as_bytes())?;
            let mut rec = ManifestRecord {
                id: id.clone(),
                svg: format!("{id}.svg"),
                metadata: Some(format!("{id}.json")),
                seed: Some(s),
                config_hash: Some(hash.clone()),
                ..Default::default()
            };
            if let Some(shim) = shim {
                let png = out_dir.join(format!("{id}.png"));
                match shim.render(&svg, &png) {
                    Ok(()) => rec.raster = Some(format!("{id}.png")),
                    Err(e) => {
                        log::warn!("render failed for {id}: {e}");
                        rec.render_error = Some(e.to_string());
                    }
                }
            }
            Ok(rec)
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
    write_manifest(&out_dir.join("manifest.jsonl"), &records)?;
    let failed = records.iter().filter(|r| r.render_error.is_some()).count();
    eprintln!("generated {} samples in {}{}", records.len(), out_dir.display(), if failed > 0 { format!(" ({failed} render failures)") } else { String::new() });
    Ok(())
}

fn rebased(rec: &ManifestRecord, m: &Manifest, out_base: &Path) -> ManifestRecord {
    let mut r = rec.clone();
    r.svg = relative_to(&m.resolve(&rec.svg), out_base);
    r.metadata = rec.metadata.as_ref().map(|p| relative_to(&m.resolve(p), out_base));
    r.raster = rec.raster.as_ref().map(|p| relative_to(&m.resolve(p), out_base));
    r
}

fn parent_dir(p: &Path) -> PathBuf {
    match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

pub fn cmd_filter(input: &Path, output: &Path, thresholds: FilterThresholds, keep_only: bool) -> Result<(), CliError> {
    let m = Manifest::load(input)?;
    let out_base = parent_dir(output);
    fs::create_dir_all(&out_base).map_err(|e| CliError::io(&out_base, e))?;
    let corruption = CorruptionConfig::default();
    let results: Vec<Result<(bool, ManifestRecord), CliError>> = m
        .records
        .par_iter()
        .map(|rec| {
            let path = m.resolve(&rec.svg);
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let verdict = filter_text(&text, &thresholds, &corruption);
            let mut r = rebased(rec, &m, &out_base);
            r.verdict = Some(serde_json::to_value(&verdict).expect("verdict serializes"));
            Ok((verdict.keep, r))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let kept = results.iter().filter(|(k, _)| *k).count();
    let out: Vec<ManifestRecord> = results.into_iter().filter(|(k, _)| *k || !keep_only).map(|(_, r)| r).collect();
    write_manifest(output, &out)?;
    eprintln!("kept {kept} of {} records", m.records.len());
    Ok(())
}

pub fn cmd_clean(input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let m = Manifest::load(input)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let results: Vec<Result<Option<ManifestRecord>, CliError>> = m
        .records
        .par_iter()
        .map(|rec| {
            let path = m.resolve(&rec.svg);
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let Ok(doc) = parse_svg(&text) else {
                log::warn!("skipping unparseable {}", path.display());
                return Ok(None);
            };
            let name = format!("{}.svg", rec.id);
            write_atomic(&out_dir.join(&name), clean_svg(&doc).to_svg_string().as_bytes())?;
            let mut r = rebased(rec, &m, out_dir);
            r.svg = name;
            Ok(Some(r))
        })
        .collect();
    let records: Vec<ManifestRecord> = results.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    write_manifest(&out_dir.join("manifest.jsonl"), &records)?;
    eprintln!("cleaned {} of {} records", records.len(), m.records.len());
    Ok(())
}

/// Structural complexity definition, selectable from the command line.
#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScDefinition {
    /// N + T
    LinearElementTotal,
    /// N
    GeometricTotal,
}

impl From<ScDefinition> for StructuralDefinition {
    fn from(d: ScDefinition) -> Self {
        match d {
            ScDefinition::LinearElementTotal => StructuralDefinition::LinearElementTotal,
            ScDefinition::GeometricTotal => StructuralDefinition::GeometricTotal,
        }
    }
}

pub fn cmd_stats(
    input: &Path,
    report: Option<&Path>,
    csv: Option<&Path>,
    with_cleaned: bool,
    def: StructuralDefinition,
) -> Result<(), CliError> {
    let m = Manifest::load(input)?;
    // Per sample: raw report, and the report after cleaning when requested.
    type Pair = (Option<ComplexityReport>, Option<ComplexityReport>);
    let pairs: Vec<Result<Pair, CliError>> = m
        .records
        .par_iter()
        .map(|rec| {
            let path = m.resolve(&rec.svg);
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let Ok(doc) = parse_svg(&text) else { return Ok((None, None)) };
            let of = |d: &diagramforge::svg::SvgDocument| ComplexityReport::from_counts(classify_elements(d), def);
            let cleaned = with_cleaned.then(|| of(&clean_svg(&doc)));
            Ok((Some(of(&doc)), cleaned))
        })
        .collect();
    let pairs = pairs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let reports: Vec<Option<ComplexityReport>> = pairs.iter().map(|p| p.0.clone()).collect();
    let stats = corpus_stats(reports.iter().map(Option::as_ref));
    let body = if with_cleaned {
        let cleaned = corpus_stats(pairs.iter().map(|p| p.1.as_ref()));
        to_json(&json!({ "raw": stats, "cleaned": cleaned }))
    } else {
        to_json(&stats)
    };
    match report {
        Some(p) => write_atomic(p, &body)?,
        None => print!("{}", String::from_utf8_lossy(&body)),
    }
    if let Some(p) = csv {
        let mut out = String::from("id,basic,connectors,complex,text,ec,clean,pd,sc\n");
        for (rec, r) in m.records.iter().zip(&reports) {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            match r {
                Some(r) => out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    rec.id,
                    r.counts.basic,
                    r.counts.connectors,
                    r.counts.complex,
                    r.counts.text,
                    r.element_complexity,
                    opt(r.cleanliness),
                    opt(r.path_dominance),
                    r.structural_complexity
                )),
                None => out.push_str(&format!("{},,,,,,,,\n", rec.id)),
            }
        }
        write_atomic(p, out.as_bytes())?;
    }
    Ok(())
}

fn list_ids(dir: &Path, ext: &str) -> Result<Vec<String>, CliError> {
    let mut ids: Vec<String> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|n| n.strip_suffix(ext)).map(str::to_string))
        .filter(|n| !n.starts_with('.') && n != "manifest")
        .collect();
    ids.sort();
    Ok(ids)
}

#[derive(Serialize)]
struct EvalRow {
    id: String,
    card: ScoreCard,
}

pub fn cmd_eval(gt_dir: &Path, pred_dir: &Path, mode: EvalMode, report: Option<&Path>, csv: Option<&Path>) -> Result<(), CliError> {
    if !pred_dir.is_dir() {
        return Err(CliError::io(pred_dir, "not a directory"));
    }
    let tiers = Tiers::default();
    let ext = match mode {
        EvalMode::Json => ".json",
        EvalMode::Standalone => ".svg",
    };
    let ids = list_ids(gt_dir, ext)?;
    let rows: Vec<Result<Option<EvalRow>, CliError>> = ids
        .par_iter()
        .map(|id| {
            let gt_path = gt_dir.join(format!("{id}{ext}"));
            let text = fs::read_to_string(&gt_path).map_err(|e| CliError::io(&gt_path, e))?;
            let gt: SampleMetadata = match mode {
                EvalMode::Json => serde_json::from_str(&text).map_err(|e| CliError::io(&gt_path, e))?,
                EvalMode::Standalone => {
                    let parsed = parse_svg(&text).map_err(|e| e.to_string()).and_then(|d| {
                        extract_groundtruth_from_svg(&d, &tiers).map_err(|e| e.to_string())
                    });
                    match parsed {
                        Ok(gt) => gt,
                        Err(e) => {
                            log::warn!("skipping reference {}: {e}", gt_path.display());
                            return Ok(None);
                        }
                    }
                }
            };
            let pred_path = pred_dir.join(format!("{id}.svg"));
            let pred = fs::read(&pred_path).ok().map(|b| String::from_utf8_lossy(&b).into_owned());
            Ok(Some(EvalRow { id: id.clone(), card: evaluate_text(&gt, pred.as_deref(), &tiers) }))
        })
        .collect();
    let rows: Vec<EvalRow> = rows.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    let agg = Aggregate::from_cards(rows.iter().map(|r| &r.card));
    print!("{}", agg.table());
    if let Some(p) = report {
        let mode_name = match mode {
            EvalMode::Json => "json",
            EvalMode::Standalone => "standalone",
        };
        let body = json!({
            "mode": mode_name,
            "shape_columns": SHAPE_COLUMNS,
            "arrow_columns": ARROW_COLUMNS,
            "aggregate": agg,
            "samples": rows,
        });
        write_atomic(p, &to_json(&body))?;
    }
    if let Some(p) = csv {
        let mut out = String::from("id");
        for c in SHAPE_COLUMNS.iter().chain(ARROW_COLUMNS.iter()).chain(["R_S", "R_A", "R", "Miss.", "Err."].iter()) {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &rows {
            let single = Aggregate::from_cards([&row.card]);
            let c = &row.card;
            let mut cells = vec![row.id.clone()];
            cells.extend(single.shape_means.iter().chain(&single.arrow_means).map(|v| format!("{v:.6}")));
            cells.push(format!("{:.6}", c.r_s));
            cells.push(c.r_a.map(|v| format!("{v:.6}")).unwrap_or_default());
            cells.push(format!("{:.6}", c.r));
            cells.push((c.coverage.missing as u8).to_string());
            cells.push((c.coverage.parse_error as u8).to_string());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        write_atomic(p, out.as_bytes())?;
    }
    Ok(())
}

#[derive(serde::Deserialize)]
struct RewardItem {
    id: String,
    #[serde(default)]
    output: Option<String>,
    #[serde(default)]
    output_path: Option<String>,
    reference: String,
}

#[derive(Serialize)]
struct RewardRow {
    id: String,
    #[serde(flatten)]
    outcome: RewardOutcome,
}

pub fn cmd_reward(
    input: &Path,
    report: &Path,
    client: &JudgeClient,
    model_id: &str,
    shim: &RenderShim,
    timeout: Duration,
    mask: RewardMask,
) -> Result<(), CliError> {
    let base = parent_dir(input);
    let text = fs::read_to_string(input).map_err(|e| CliError::io(input, e))?;
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let item: RewardItem =
            serde_json::from_str(line).map_err(|e| CliError::Io(format!("{}:{}: {e}", input.display(), i + 1)))?;
        items.push(item);
    }
    let resolve = |p: &str| {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    };
    let work = std::env::temp_dir().join(format!("diagramforge-reward-{}", std::process::id()));
    fs::create_dir_all(&work).map_err(|e| CliError::io(&work, e))?;
    let rows: Vec<Result<RewardRow, CliError>> = items
        .par_iter()
        .enumerate()
        .map(|(i, item)| {
            let output = match (&item.output, &item.output_path) {
                (Some(o), _) => o.clone(),
                (None, Some(p)) => fs::read_to_string(resolve(p)).map_err(|e| CliError::io(&resolve(p), e))?,
                (None, None) => return Err(CliError::Io(format!("record {}: no output or output_path", item.id))),
            };
            let ref_path = resolve(&item.reference);
            let reference = ImageData::png(fs::read(&ref_path).map_err(|e| CliError::io(&ref_path, e))?);
            let render = |svg: &str| -> Result<ImageData, String> {
                let src = work.join(format!("{i}.svg"));
                let dst = work.join(format!("{i}.png"));
                fs::write(&src, svg).map_err(|e| e.to_string())?;
                shim.render(&src, &dst).map_err(|e| e.to_string())?;
                fs::read(&dst).map(ImageData::png).map_err(|e| e.to_string())
            };
            let outcome = reward_for_output(&output, render, &reference, client, model_id, timeout, mask);
            Ok(RewardRow { id: item.id.clone(), outcome })
        })
        .collect();
    let _ = fs::remove_dir_all(&work);
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mean = if rows.is_empty() { 0.0 } else { rows.iter().map(|r| r.outcome.reward).sum::<f64>() / rows.len() as f64 };
    let failures = rows.iter().filter(|r| r.outcome.scores.is_none()).count();
    write_atomic(report, &to_json(&json!({ "mean_reward": mean, "failures": failures, "mask": mask, "samples": rows })))?;
    eprintln!("mean reward {mean:.3} over {} outputs ({failures} failed)", rows.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parsing() {
        let mut cfg = GenConfig::default();
        parse_config_text("# comment\nstack_prob = 0.5\n\njitter=0.01 # trailing\n", &mut cfg).unwrap();
        assert_eq!(cfg.stack_prob, 0.5);
        assert_eq!(cfg.jitter, 0.01);
        assert!(matches!(parse_config_text("novalue", &mut cfg), Err(CliError::Usage(_))));
        assert!(matches!(parse_config_text("bogus_key = 1", &mut cfg), Err(CliError::Usage(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
    }
}
