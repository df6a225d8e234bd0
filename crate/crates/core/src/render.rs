//! Rasterization through an external command.
//!
//! The command template is run with `sh -c` after substituting `{in}` and
//! `{out}` with shell-quoted paths.

use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RENDER_CMD_ENV: &str = "DIAGRAMFORGE_RENDER_CMD";

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RenderFailure {
    #[error("renderer not found: {detail}")]
    RendererMissing { detail: String },
    #[error("renderer exceeded {timeout_ms} ms")]
    RenderTimeout { timeout_ms: u64 },
    #[error("renderer exited with status {code:?}")]
    NonzeroExit { code: Option<i32> },
    #[error("renderer succeeded but wrote no output")]
    NoOutput,
    #[error("template lacks {{in}}/{{out}} placeholders")]
    BadTemplate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderShim {
    pub template: String,
    pub timeout: Duration,
}

fn shell_quote(p: &Path) -> String {
    format!("'{}'", p.to_string_lossy().replace('\'', r"'\''"))
}

impl RenderShim {
    pub fn new(template: impl Into<String>, timeout: Duration) -> Self {
        RenderShim { template: template.into(), timeout }
    }

    /// Template from [`RENDER_CMD_ENV`], if set and non-empty.
    pub fn from_env(timeout: Duration) -> Option<Self> {
        std::env::var(RENDER_CMD_ENV)
            .ok()
            .filter(|t| !t.trim().is_empty())
            .map(|t| RenderShim::new(t, timeout))
    }

    pub fn command_line(&self, input: &Path, output: &Path) -> String {
        self.template.replace("{in}", &shell_quote(input)).replace("{out}", &shell_quote(output))
    }

    pub fn render(&self, input: &Path, output: &Path) -> Result<(), RenderFailure> {
        if !self.template.contains("{in}") || !self.template.contains("{out}") {
            return Err(RenderFailure::BadTemplate);
        }
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(self.command_line(input, output))
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| RenderFailure::RendererMissing { detail: e.to_string() })?;
        let started = Instant::now();
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status,
                Ok(None) if started.elapsed() >= self.timeout => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(RenderFailure::RenderTimeout { timeout_ms: self.timeout.as_millis() as u64 });
                }
                Ok(None) => thread::sleep(Duration::from_millis(5)),
                Err(e) => return Err(RenderFailure::RendererMissing { detail: e.to_string() }),
            }
        };
        match status.code() {
            Some(0) if output.exists() => Ok(()),
            Some(0) => Err(RenderFailure::NoOutput),
            Some(127) => Err(RenderFailure::RendererMissing { detail: "command not found".into() }),
            code => Err(RenderFailure::NonzeroExit { code }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("a b.svg");
        let out = dir.path().join("it's.png");
        std::fs::write(&input, "<svg/>").unwrap();
        let t = Duration::from_secs(5);
        assert_eq!(RenderShim::new("true {in} {out}", t).render(&input, &out), Err(RenderFailure::NoOutput));
        std::fs::write(&out, b"png").unwrap();
        assert_eq!(RenderShim::new("true {in} {out}", t).render(&input, &out), Ok(()));
        assert_eq!(
            RenderShim::new("false {in} {out}", t).render(&input, &out),
            Err(RenderFailure::NonzeroExit { code: Some(1) })
        );
        assert!(matches!(
            RenderShim::new("no-such-renderer-xyz {in} {out}", t).render(&input, &out),
            Err(RenderFailure::RendererMissing { .. })
        ));
        assert_eq!(RenderShim::new("true", t).render(&input, &out), Err(RenderFailure::BadTemplate));
    }

    #[test]
    fn copies_with_quoted_paths() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in put.svg");
        let out = dir.path().join("o'ut.png");
        std::fs::write(&input, "x").unwrap();
        RenderShim::new("cp {in} {out}", Duration::from_secs(5)).render(&input, &out).unwrap();
        assert_eq!(std::fs::read_to_string(&out).unwrap(), "x");
    }

    #[test]
    fn timeout_kills_the_renderer() {
        let dir = tempfile::tempdir().unwrap();
        let started = Instant::now();
        let r = RenderShim::new("sleep 5; true {in} {out}", Duration::from_millis(300))
            .render(&dir.path().join("a"), &dir.path().join("b"));
        assert_eq!(r, Err(RenderFailure::RenderTimeout { timeout_ms: 300 }));
        assert!(started.elapsed() < Duration::from_secs(3));
    }
}
