use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Candidate,
    Indeterminate,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass | Verdict::Candidate => 0,
            Verdict::Fail => 1,
            Verdict::Indeterminate => 4,
        }
    }

    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub params: Value,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
    pub elapsed_ms: u64,
    pub verdict: Verdict,
    /// SHA-256 over command, params, version, verdict and payload; no
    /// timestamps or host data.
    pub digest: String,
    pub payload: Value,
}

pub fn content_digest(command: &str, params: &Value, verdict: Verdict, payload: &Value) -> String {
    let content = serde_json::json!({
        "command": command,
        "params": params,
        "version": env!("CARGO_PKG_VERSION"),
        "verdict": verdict,
        "payload": payload,
    });
    hex::encode(Sha256::digest(content.to_string().as_bytes()))
}

pub struct Clock {
    started_at: String,
    start: Instant,
}

impl Clock {
    pub fn start() -> Self {
        Clock { started_at: now(), start: Instant::now() }
    }

    pub fn finish(self, command: &str, params: Value, verdict: Verdict, payload: Value) -> RunManifest {
        RunManifest {
            schema: SCHEMA,
            command: command.to_string(),
            digest: content_digest(command, &params, verdict, &payload),
            params,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: self.started_at,
            finished_at: now(),
            elapsed_ms: self.start.elapsed().as_millis() as u64,
            verdict,
            payload,
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn write_json(value: &impl Serialize, out: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
