use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use fcat_core::{FcatError, Report};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

pub const DEFAULT_STATES: usize = 100_000;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(FcatError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(FcatError::BudgetExhausted { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<FcatError> for CliError {
    fn from(e: FcatError) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn digest(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

/// Writes through a temporary file in the target directory, so a failed run
/// never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e| CliError::Io(path.to_path_buf(), e);
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Report header: tool, version, command, input digests and budgets. Inputs
/// are listed by digest only so that reports do not depend on file paths.
pub struct Header {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub budgets: Map<String, Value>,
}

impl Header {
    pub fn new(command: &'static str, states: usize) -> Self {
        let mut budgets = Map::new();
        budgets.insert("states".into(), json!(states));
        Self {
            command,
            inputs: Vec::new(),
            budgets,
        }
    }

    pub fn input(&mut self, text: &str) {
        self.inputs.push(digest(text));
    }

    pub fn budget(&mut self, key: &str, v: impl Into<Value>) {
        self.budgets.insert(key.into(), v.into());
    }

    pub fn to_value(&self) -> Value {
        json!({
            "budgets": self.budgets,
            "command": self.command,
            "input-sha256": self.inputs,
            "tool": "fcat",
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

/// Emits the report and returns the exit code it implies.
pub fn emit(report: &Report, header: &Header, json_out: Option<&Path>) -> CliResult<u8> {
    let h = header.to_value();
    match json_out {
        Some(p) => {
            let text = serde_json::to_string_pretty(&report.to_json(h)).expect("report serializes") + "\n";
            if p == Path::new("-") {
                print!("{text}");
            } else {
                write_atomic(p, &text)?;
            }
        }
        None => print!("{}", report.to_text(&h)),
    }
    Ok(if report.has_failures() { 1 } else { 0 })
}
