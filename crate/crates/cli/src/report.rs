use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "hookamp/1";

pub const EXIT_OK: u8 = 0;
pub const EXIT_PRECONDITION: u8 = 1;
pub const EXIT_INTERNAL: u8 = 2;
pub const EXIT_COUNTEREXAMPLE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn precondition(message: impl Into<String>) -> Self {
        Self { code: EXIT_PRECONDITION, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<hookamp::Error> for CliError {
    fn from(e: hookamp::Error) -> Self {
        match e {
            hookamp::Error::Internal(_) => Self::internal(e.to_string()),
            _ => Self::precondition(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::precondition(e.to_string())
    }
}

/// Rendered report plus the process exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
    /// Messages for stderr.
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    config_hash: String,
    seed: Option<u64>,
    /// Seconds since the Unix epoch. Not part of the hash.
    timestamp: u64,
    result: &'a R,
}

/// SHA-256 of the command name and its JSON-serialized configuration.
pub fn config_hash<C: Serialize>(command: &str, config: &C) -> String {
    let body = serde_json::json!({ "command": command, "config": config });
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

pub fn envelope<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    seed: Option<u64>,
    result: &R,
) -> Result<String, CliError> {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let env = Envelope {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        config_hash: config_hash(command, config),
        seed,
        timestamp,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env)
        .map_err(|e| CliError::internal(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// `HOOKAMP_SEED` when set, otherwise the command-line seed.
pub fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("HOOKAMP_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::precondition(format!("HOOKAMP_SEED={v:?} is not a 64-bit integer"))),
        Err(_) => Ok(flag),
    }
}
