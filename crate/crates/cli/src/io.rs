//! Output plumbing: the run manifest embedded in every report, the
//! deterministic JSON writer, and the timing side channel that keeps
//! wall-clock values out of the byte-comparable reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os("RIPSLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Every report embeds its manifest; identical manifests imply
/// byte-identical reports. Wall-clock values never appear here.
pub struct Manifest {
    pub command: &'static str,
    pub input_digest: String,
    pub parameters: BTreeMap<String, Value>,
}

impl Manifest {
    pub fn new(command: &'static str, input_bytes: &[u8]) -> Self {
        Manifest {
            command,
            input_digest: format!("sha256:{}", sha256_hex(input_bytes)),
            parameters: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "input_digest": self.input_digest,
            "parameters": self.parameters,
        })
    }
}

/// Writes pretty JSON with a trailing newline and echoes it to stdout.
pub fn write_report(dir: &Path, name: &str, value: &Value) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    std::fs::write(dir.join(name), &text)?;
    print!("{text}");
    Ok(())
}

/// Writes an auxiliary artifact (DOT, face list) without echoing.
pub fn write_artifact(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

/// The timing side channel; separate file, excluded from determinism
/// comparisons.
pub fn write_timing(dir: &Path, command: &str, elapsed: Duration) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    let value = json!({
        "command": command,
        "millis": elapsed.as_millis() as u64,
    });
    std::fs::write(
        dir.join("timing.json"),
        format!("{}\n", serde_json::to_string_pretty(&value)?),
    )?;
    Ok(())
}
