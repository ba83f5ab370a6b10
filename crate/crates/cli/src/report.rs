use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use henkin::fraenkel::FraenkelError;
use henkin::model::ModelError;
use henkin::schemas::{BuildError, CheckError};
use henkin::symmetry::SymmetryError;

/// Exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    True = 0,
    False = 1,
}

#[derive(Debug)]
pub enum CliError {
    /// I/O, parse, arity and argument errors: exit 2.
    Input(String),
    /// A resource cap was hit: exit 3.
    Cap(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::OrderCap(_) => CliError::Cap(e.to_string()),
            SymmetryError::Model(m) => m.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FraenkelError> for CliError {
    fn from(e: FraenkelError) -> Self {
        match e {
            FraenkelError::CapExceeded { .. } | FraenkelError::TooManyTypes { .. } => {
                CliError::Cap(e.to_string())
            }
            FraenkelError::Model(m) => m.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Model(m) => m.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<BuildError> for CliError {
    fn from(e: BuildError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Hash of everything a run depends on: file contents and parameters,
/// but not file paths or output flags.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn param(&mut self, name: &str, value: impl std::fmt::Display) {
        self.feed(name, value.to_string().as_bytes());
    }

    pub fn read(&mut self, name: &str, path: &Path) -> Result<String, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        self.feed(name, text.as_bytes());
        Ok(text)
    }

    fn feed(&mut self, name: &str, bytes: &[u8]) {
        self.hasher.update((name.len() as u64).to_le_bytes());
        self.hasher.update(name.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap_hit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(flatten)]
    pub body: Value,
}

/// What a command hands back: the body and a one-line summary.
pub struct Finished {
    pub outcome: Outcome,
    pub summary: String,
    pub body: Value,
}

pub struct Run {
    pub command: String,
    pub inputs: Inputs,
    started: Instant,
    timing: bool,
}

impl Run {
    pub fn new(command: &str, timing: bool) -> Self {
        Run {
            command: command.to_string(),
            inputs: Inputs::default(),
            started: Instant::now(),
            timing,
        }
    }

    /// Prints the report and summary; returns the exit code.
    pub fn finish(self, result: Result<Finished, CliError>) -> i32 {
        let elapsed = self
            .timing
            .then(|| self.started.elapsed().as_secs_f64() * 1e3);
        let command = self.command;
        let digest = self.inputs.digest();
        let (report, code, summary) = match result {
            Ok(f) => (
                RunReport {
                    command: command.clone(),
                    inputs_digest: digest,
                    verdict: Some(f.outcome == Outcome::True),
                    cap_hit: None,
                    error: None,
                    elapsed_ms: elapsed,
                    body: f.body,
                },
                f.outcome as i32,
                f.summary,
            ),
            Err(e) => (
                RunReport {
                    command: command.clone(),
                    inputs_digest: digest,
                    verdict: None,
                    cap_hit: matches!(e, CliError::Cap(_)).then(|| e.message().to_string()),
                    error: Some(e.message().to_string()),
                    elapsed_ms: elapsed,
                    body: Value::Object(Default::default()),
                },
                e.code(),
                format!("error: {}", e.message()),
            ),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serialises")
        );
        eprintln!("{command}: {summary}");
        code
    }
}
