use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::Duration;

use base64::Engine;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageData {
    pub bytes: Vec<u8>,
    pub media_type: String,
}

impl ImageData {
    pub fn png(bytes: Vec<u8>) -> Self {
        ImageData { bytes, media_type: "image/png".into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JudgeRequest {
    pub reference_image: ImageData,
    pub candidate_image: ImageData,
    pub rubric_prompt: String,
    pub model_id: String,
    pub timeout: Duration,
}

impl JudgeRequest {
    fn validate(&self) -> Result<(), JudgeError> {
        if self.reference_image.bytes.is_empty() || self.candidate_image.bytes.is_empty() {
            return Err(JudgeError::InvalidRequest("empty image".into()));
        }
        if self.timeout.is_zero() {
            return Err(JudgeError::InvalidRequest("timeout must be positive".into()));
        }
        Ok(())
    }
}

/// Hex SHA-256 over the model id, prompt and both images.
pub fn request_hash(req: &JudgeRequest) -> String {
    let mut h = Sha256::new();
    for part in [
        req.model_id.as_bytes(),
        req.rubric_prompt.as_bytes(),
        req.reference_image.media_type.as_bytes(),
        &req.reference_image.bytes,
        req.candidate_image.media_type.as_bytes(),
        &req.candidate_image.bytes,
    ] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JudgeError {
    #[error("judge did not answer within {0:?}")]
    Timeout(Duration),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("quota exceeded: {0}")]
    QuotaExceeded(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransportFailure {
    /// Worth retrying (connection refused, 5xx, ...).
    #[error("transient: {0}")]
    Transient(String),
    #[error("quota: {0}")]
    Quota(String),
    #[error("fatal: {0}")]
    Fatal(String),
}

pub trait Transport: Send + Sync {
    fn send(&self, req: &JudgeRequest) -> Result<String, TransportFailure>;
}

/// JSON over HTTP POST with base64 images and an optional bearer credential.
pub struct HttpTransport {
    pub endpoint: String,
    pub credential: Option<String>,
}

impl HttpTransport {
    pub fn new(endpoint: impl Into<String>, credential: Option<String>) -> Self {
        HttpTransport { endpoint: endpoint.into(), credential }
    }

    /// Endpoint from `DIAGRAMFORGE_JUDGE_URL`, credential from
    /// `DIAGRAMFORGE_JUDGE_KEY`.
    pub fn from_env() -> Option<Self> {
        let endpoint = std::env::var("DIAGRAMFORGE_JUDGE_URL").ok()?;
        Some(HttpTransport::new(endpoint, std::env::var("DIAGRAMFORGE_JUDGE_KEY").ok()))
    }
}

impl Transport for HttpTransport {
    fn send(&self, req: &JudgeRequest) -> Result<String, TransportFailure> {
        let b64 = base64::engine::general_purpose::STANDARD;
        let body = serde_json::json!({
            "model": req.model_id,
            "prompt": req.rubric_prompt,
            "images": [
                {"media_type": req.reference_image.media_type, "data": b64.encode(&req.reference_image.bytes)},
                {"media_type": req.candidate_image.media_type, "data": b64.encode(&req.candidate_image.bytes)},
            ],
        });
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(req.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut call = agent.post(&self.endpoint).header("Content-Type", "application/json");
        if let Some(key) = &self.credential {
            call = call.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = call
            .send(body.to_string())
            .map_err(|e| TransportFailure::Transient(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| TransportFailure::Transient(e.to_string()))?;
        match status {
            200..=299 => Ok(text),
            429 => Err(TransportFailure::Quota(format!("HTTP 429: {text}"))),
            500..=599 => Err(TransportFailure::Transient(format!("HTTP {status}"))),
            _ => Err(TransportFailure::Fatal(format!("HTTP {status}: {text}"))),
        }
    }
}

/// Offline transport answering from canned files in a directory.
///
/// For each request the first existing key among the request hash, the
/// model id and `default` is used. `<key>.response` holds the body,
/// `<key>.delay_ms` an optional delay, and `<key>.error` an optional failure
/// (`transient`, `quota` or `fatal`) returned instead of the body.
pub struct StubTransport {
    pub dir: PathBuf,
}

impl StubTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        StubTransport { dir: dir.into() }
    }

    fn key_for(&self, req: &JudgeRequest) -> Option<String> {
        [request_hash(req), req.model_id.clone(), "default".to_string()].into_iter().find(|k| {
            self.dir.join(format!("{k}.response")).exists() || self.dir.join(format!("{k}.error")).exists()
        })
    }
}

impl Transport for StubTransport {
    fn send(&self, req: &JudgeRequest) -> Result<String, TransportFailure> {
        let key = self
            .key_for(req)
            .ok_or_else(|| TransportFailure::Transient(format!("no canned response in {}", self.dir.display())))?;
        let read = |ext: &str| std::fs::read_to_string(self.dir.join(format!("{key}.{ext}"))).ok();
        if let Some(ms) = read("delay_ms").and_then(|s| s.trim().parse::<u64>().ok()) {
            thread::sleep(Duration::from_millis(ms));
        }
        if let Some(kind) = read("error") {
            let msg = format!("stub {key}");
            return Err(match kind.trim() {
                "quota" => TransportFailure::Quota(msg),
                "fatal" => TransportFailure::Fatal(msg),
                _ => TransportFailure::Transient(msg),
            });
        }
        read("response").ok_or_else(|| TransportFailure::Fatal(format!("unreadable stub {key}")))
    }
}

struct Gate {
    in_flight: Mutex<usize>,
    freed: Condvar,
    cap: usize,
}

impl Gate {
    fn enter(self: &Arc<Self>) -> GateTicket {
        let mut n = self.in_flight.lock().unwrap();
        while *n >= self.cap {
            n = self.freed.wait(n).unwrap();
        }
        *n += 1;
        GateTicket(Arc::clone(self))
    }
}

struct GateTicket(Arc<Gate>);

impl Drop for GateTicket {
    fn drop(&mut self) {
        *self.0.in_flight.lock().unwrap() -= 1;
        self.0.freed.notify_one();
    }
}

/// Retrying, timeout-enforcing front end over a [`Transport`]. Shareable
/// across threads; at most `max_in_flight` requests run at once.
#[derive(Clone)]
pub struct JudgeClient {
    transport: Arc<dyn Transport>,
    pub max_retries: u32,
    pub backoff: Duration,
    gate: Arc<Gate>,
}

impl JudgeClient {
    pub fn new(transport: Arc<dyn Transport>) -> Self {
        JudgeClient::with_limits(transport, 3, Duration::from_millis(200), 8)
    }

    pub fn with_limits(
        transport: Arc<dyn Transport>,
        max_retries: u32,
        backoff: Duration,
        max_in_flight: usize,
    ) -> Self {
        JudgeClient {
            transport,
            max_retries,
            backoff,
            gate: Arc::new(Gate { in_flight: Mutex::new(0), freed: Condvar::new(), cap: max_in_flight.max(1) }),
        }
    }

    pub fn submit(&self, req: &JudgeRequest) -> Result<String, JudgeError> {
        req.validate()?;
        let _ticket = self.gate.enter();
        let hash = request_hash(req);
        let shared = Arc::new(req.clone());
        let mut attempt = 0u32;
        loop {
            let (tx, rx) = mpsc::channel();
            let transport = Arc::clone(&self.transport);
            let job = Arc::clone(&shared);
            thread::spawn(move || {
                let _ = tx.send(transport.send(&job));
            });
            let result = match rx.recv_timeout(req.timeout) {
                Ok(r) => r,
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    log::warn!("judge request {hash} timed out after {:?}", req.timeout);
                    return Err(JudgeError::Timeout(req.timeout));
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => {
                    Err(TransportFailure::Transient("transport worker panicked".into()))
                }
            };
            match result {
                Ok(body) => {
                    log::info!("judge request {hash} answered ({} bytes)", body.len());
                    return Ok(body);
                }
                Err(TransportFailure::Quota(m)) => {
                    log::warn!("judge request {hash}: quota exceeded");
                    return Err(JudgeError::QuotaExceeded(m));
                }
                Err(TransportFailure::Fatal(m)) => {
                    log::warn!("judge request {hash}: {m}");
                    return Err(JudgeError::Transport(m));
                }
                Err(TransportFailure::Transient(m)) => {
                    if attempt >= self.max_retries {
                        log::warn!("judge request {hash}: giving up after {} attempts: {m}", attempt + 1);
                        return Err(JudgeError::Transport(m));
                    }
                    let wait = self.backoff.saturating_mul(1 << attempt.min(16));
                    log::info!("judge request {hash}: retry {} in {wait:?}: {m}", attempt + 1);
                    thread::sleep(wait);
                    attempt += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn request(timeout_ms: u64) -> JudgeRequest {
        JudgeRequest {
            reference_image: ImageData::png(vec![1, 2, 3]),
            candidate_image: ImageData::png(vec![4, 5]),
            rubric_prompt: "p".into(),
            model_id: "m".into(),
            timeout: Duration::from_millis(timeout_ms),
        }
    }

    struct Flaky {
        calls: AtomicUsize,
        fail_first: usize,
    }

    impl Transport for Flaky {
        fn send(&self, _: &JudgeRequest) -> Result<String, TransportFailure> {
            let n = self.calls.fetch_add(1, Ordering::SeqCst);
            if n < self.fail_first {
                Err(TransportFailure::Transient("down".into()))
            } else {
                Ok("ok".into())
            }
        }
    }

    #[test]
    fn retries_then_succeeds() {
        let t = Arc::new(Flaky { calls: AtomicUsize::new(0), fail_first: 2 });
        let c = JudgeClient::with_limits(t.clone(), 3, Duration::from_millis(1), 2);
        assert_eq!(c.submit(&request(1000)), Ok("ok".into()));
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn gives_up_after_retries() {
        let t = Arc::new(Flaky { calls: AtomicUsize::new(0), fail_first: 100 });
        let c = JudgeClient::with_limits(t.clone(), 2, Duration::from_millis(1), 2);
        assert!(matches!(c.submit(&request(1000)), Err(JudgeError::Transport(_))));
        assert_eq!(t.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn rejects_invalid_requests() {
        let t = Arc::new(Flaky { calls: AtomicUsize::new(0), fail_first: 0 });
        let c = JudgeClient::new(t);
        let mut r = request(0);
        assert!(matches!(c.submit(&r), Err(JudgeError::InvalidRequest(_))));
        r.timeout = Duration::from_secs(1);
        r.candidate_image.bytes.clear();
        assert!(matches!(c.submit(&r), Err(JudgeError::InvalidRequest(_))));
    }

    #[test]
    fn hash_depends_on_content() {
        let a = request(10);
        let mut b = request(10);
        assert_eq!(request_hash(&a), request_hash(&b));
        b.candidate_image.bytes.push(0);
        assert_ne!(request_hash(&a), request_hash(&b));
        assert_eq!(request_hash(&a).len(), 64);
    }

    #[test]
    fn unreachable_endpoint_is_transport_error() {
        let t = Arc::new(HttpTransport::new("http://127.0.0.1:9/judge", None));
        let c = JudgeClient::with_limits(t, 1, Duration::from_millis(1), 1);
        assert!(matches!(c.submit(&request(2000)), Err(JudgeError::Transport(_))));
    }
}
