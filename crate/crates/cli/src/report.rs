//! Run reports: a config echo plus a purely numeric payload. Re-running the
//! embedded config must reproduce the payload byte for byte, so nothing
//! time- or host-dependent belongs in here.

use std::fs;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport<C: Serialize, P: Serialize> {
    pub tool_version: String,
    pub seed: u64,
    pub config: C,
    pub payload: P,
}

impl<C: Serialize, P: Serialize> RunReport<C, P> {
    pub fn new(seed: u64, config: C, payload: P) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            payload,
        }
    }

    pub fn write_json(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

/// Scientific notation with 17 significant digits: enough to round-trip any
/// f64 exactly.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        Self {
            buf: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        fs::write(path, &self.buf).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Both,
}

impl OutputFormat {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "both" => Ok(Self::Both),
            other => anyhow::bail!("unknown format '{other}' (expected json, csv or both)"),
        }
    }

    pub fn json(&self) -> bool {
        matches!(self, Self::Json | Self::Both)
    }

    pub fn csv(&self) -> bool {
        matches!(self, Self::Csv | Self::Both)
    }
}
