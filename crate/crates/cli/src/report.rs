use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(pjlab_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<pjlab_core::Error> for CliError {
    fn from(e: pjlab_core::Error) -> Self {
        CliError::Domain(e)
    }
}

/// Collects what a run read, for the report digest.
///
/// The digest covers the arguments (minus `--out` and its value) followed by
/// the bytes of every file read, in order.
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn new(args: impl Iterator<Item = String>) -> Self {
        let mut hasher = Sha256::new();
        let mut skip = false;
        for a in args {
            if skip {
                skip = false;
                continue;
            }
            if a == "--out" {
                skip = true;
                continue;
            }
            if a.starts_with("--out=") {
                continue;
            }
            hasher.update(a.as_bytes());
            hasher.update([0]);
        }
        Inputs { hasher }
    }

    pub fn read_json(&mut self, path: &Path) -> Result<Value, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.hasher.update(&bytes);
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Domain(pjlab_core::Error::Parse(format!("{}: {e}", path.display()))))
    }

    pub fn digest(&self) -> String {
        hex::encode(self.hasher.clone().finalize())
    }
}

pub struct RunReport {
    pub command: &'static str,
    pub arith: &'static str,
    pub seed: u64,
    pub inputs_sha256: String,
    pub schedule: Option<Value>,
    pub outputs: Value,
}

impl RunReport {
    pub fn new(command: &'static str, arith: &'static str, seed: u64) -> Self {
        RunReport { command, arith, seed, inputs_sha256: String::new(), schedule: None, outputs: Value::Null }
    }

    pub fn render(&self) -> String {
        let v = json!({
            "command": self.command,
            "arith": self.arith,
            "seed": self.seed,
            "inputs_sha256": self.inputs_sha256,
            "schedule": self.schedule,
            "outputs": self.outputs,
        });
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    }
}

/// Writes to stdout, or atomically to `path` through a sibling temp file.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match path {
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
            tmp.write_all(text.as_bytes()).map_err(io)?;
            tmp.persist(path).map_err(|e| io(e.error))?;
            Ok(())
        }
    }
}
