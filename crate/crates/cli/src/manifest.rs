//! JSONL manifests and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// One line of a manifest. Paths are relative to the manifest's directory
/// unless absolute.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub svg: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raster: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub render_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

/// Writes `bytes` to a sibling temp file and renames it into place, so a
/// reader never sees a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

pub fn write_manifest(path: &Path, records: &[ManifestRecord]) -> Result<(), CliError> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub struct Manifest {
    pub base: PathBuf,
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    /// Reads a JSONL manifest, or lists `*.svg` files when `path` is a directory.
    pub fn load(path: &Path) -> Result<Manifest, CliError> {
        if path.is_dir() {
            let mut names: Vec<String> = fs::read_dir(path)
                .map_err(|e| CliError::io(path, e))?
                .filter_map(|e| e.ok())
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .filter(|n| n.ends_with(".svg"))
                .collect();
            names.sort();
            let records = names
                .into_iter()
                .map(|n| ManifestRecord { id: n.trim_end_matches(".svg").to_string(), svg: n, ..Default::default() })
                .collect();
            return Ok(Manifest { base: path.to_path_buf(), records });
        }
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let r: ManifestRecord = serde_json::from_str(line)
                .map_err(|e| CliError::Io(format!("{}:{}: {e}", path.display(), i + 1)))?;
            records.push(r);
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Manifest { base, records })
    }

    pub fn resolve(&self, rel: &str) -> PathBuf {
        let p = Path::new(rel);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

/// `target` expressed relative to `base` when it lies inside it.
pub fn relative_to(target: &Path, base: &Path) -> String {
    let abs = |p: &Path| fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    let (t, b) = (abs(target), abs(base));
    match t.strip_prefix(&b) {
        Ok(rel) => rel.to_string_lossy().into_owned(),
        Err(_) => t.to_string_lossy().into_owned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_roundtrip_and_directory_listing() {
        let dir = tempfile::tempdir().unwrap();
        let recs = vec![
            ManifestRecord { id: "a".into(), svg: "a.svg".into(), seed: Some(3), ..Default::default() },
            ManifestRecord { id: "b".into(), svg: "b.svg".into(), ..Default::default() },
        ];
        let path = dir.path().join("m.jsonl");
        write_manifest(&path, &recs).unwrap();
        assert_eq!(Manifest::load(&path).unwrap().records, recs);
        fs::write(dir.path().join("b.svg"), "<svg/>").unwrap();
        fs::write(dir.path().join("a.svg"), "<svg/>").unwrap();
        let listed = Manifest::load(dir.path()).unwrap();
        assert_eq!(listed.records.iter().map(|r| r.id.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        // No temp files are left behind.
        assert!(fs::read_dir(dir.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().contains("tmp")));
    }

    #[test]
    fn bad_line_is_reported_with_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.jsonl");
        fs::write(&path, "{\"id\":\"a\",\"svg\":\"a.svg\"}\n{oops\n").unwrap();
        let err = Manifest::load(&path).err().unwrap();
        assert!(err.to_string().contains(":2:"));
    }
}
