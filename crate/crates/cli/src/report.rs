//! The report envelope shared by every command, and exit codes.

use std::fmt;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use crate::format::{ParseError, FORMAT_VERSION};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    /// Unreadable input, malformed document or bad flags.
    Usage = 2,
    /// The order is invalid or a command precondition does not hold.
    Precondition = 3,
    /// A certificate or inequality check failed.
    CheckFailed = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn verdict(self) -> &'static str {
        match self {
            Exit::Pass => "pass",
            Exit::CheckFailed | Exit::Precondition => "fail",
            Exit::Usage => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub exit: Exit,
    /// Human-readable lines for standard output.
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Report {
        Report {
            command,
            inputs: Map::new(),
            result: Value::Null,
            exit: Exit::Pass,
            summary: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    /// Replaces the result with an error description.
    pub fn fail_with(&mut self, err: &CommandError) {
        self.exit = err.exit();
        let mut e = json!({"kind": err.kind(), "message": err.to_string()});
        if let CommandError::Parse { error, .. } = err {
            e["line"] = json!(error.line);
            e["column"] = json!(error.column);
        }
        if let CommandError::Precondition { details, .. } = err {
            if !details.is_null() {
                e["details"] = details.clone();
            }
        }
        self.result = json!({ "error": e });
        self.summary.push(format!("error: {err}"));
    }

    pub fn verdict(&self) -> &'static str {
        self.exit.verdict()
    }

    pub fn to_json(&self, meta: Option<Duration>) -> Value {
        let mut v = json!({
            "version": FORMAT_VERSION,
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "result": self.result,
            "verdict": self.verdict(),
            "exit_code": self.exit.code(),
        });
        if let Some(elapsed) = meta {
            let unix = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            v["meta"] = json!({
                "tool": "ordembed",
                "tool_version": env!("CARGO_PKG_VERSION"),
                "unix_time": unix,
                "elapsed_ms": elapsed.as_millis() as u64,
            });
        }
        v
    }
}

#[derive(Clone, Debug)]
pub enum CommandError {
    Usage(String),
    Io { path: String, message: String },
    Parse { path: String, error: ParseError },
    Precondition { message: String, details: Value },
}

impl CommandError {
    pub fn precondition(message: impl Into<String>) -> CommandError {
        CommandError::Precondition {
            message: message.into(),
            details: Value::Null,
        }
    }

    pub fn exit(&self) -> Exit {
        match self {
            CommandError::Precondition { .. } => Exit::Precondition,
            _ => Exit::Usage,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CommandError::Usage(_) => "usage",
            CommandError::Io { .. } => "io",
            CommandError::Parse { .. } => "parse",
            CommandError::Precondition { .. } => "precondition",
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Usage(m) => f.write_str(m),
            CommandError::Io { path, message } => write!(f, "{path}: {message}"),
            CommandError::Parse { path, error } => write!(f, "{path}: {error}"),
            CommandError::Precondition { message, .. } => f.write_str(message),
        }
    }
}
