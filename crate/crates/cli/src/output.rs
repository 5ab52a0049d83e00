//! Manifest, number formatting and the JSON writer.

use std::io;
use std::path::Path;

use landau_kratzer::model::ConfigFile;
use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use sha2::{Digest, Sha256};

use crate::args::Format;
use crate::error::CliError;

pub const TOOL: &str = env!("CARGO_BIN_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Loads the config and returns it with the digest of its canonical form.
pub fn load_config(path: &Path) -> Result<(ConfigFile, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file: ConfigFile = serde_json::from_str(&text).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let canonical = serde_json::to_vec(&file).expect("config serializes");
    Ok((file, hex::encode(Sha256::digest(canonical))))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_sha256: Option<String>,
    pub format: Format,
    /// Command parameters in the order given.
    pub parameters: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &'static str, config_sha256: Option<String>, format: Format) -> Self {
        Self { tool: TOOL, version: VERSION, command, config_sha256, format, parameters: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header_line(&self) -> String {
        let mut line = format!("# {} {} command={}", self.tool, self.version, self.command);
        if let Some(digest) = &self.config_sha256 {
            line.push_str(&format!(" config_sha256={digest}"));
        }
        for (key, value) in &self.parameters {
            line.push_str(&format!(" {key}={value}"));
        }
        line.push_str(" format=csv\n");
        line
    }
}

/// Writes floats with 17 significant digits; everything else as compact JSON.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(num(value as f64).as_bytes())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buffer = Vec::new();
    let mut serializer = Serializer::with_formatter(&mut buffer, FixedDigits);
    value.serialize(&mut serializer).expect("output serializes");
    buffer.push(b'\n');
    String::from_utf8(buffer).expect("JSON is UTF-8")
}
