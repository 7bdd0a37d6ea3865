//! The report document shared by every verb, in human and machine form.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use evs_core::error::EvsError;

pub const SCHEMA: &str = "evs-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Finding,
    InputError,
    Undecided,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Finding => 2,
            Status::InputError => 3,
            Status::Undecided => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Finding => "finding",
            Status::InputError => "input-error",
            Status::Undecided => "undecided",
        }
    }

    /// Exit status for an error raised by a core operation. A failed
    /// verification that should have succeeded is a finding, not a crash.
    pub fn of_error(e: &EvsError) -> Status {
        match e {
            EvsError::Input(_) | EvsError::Document { .. } | EvsError::Domain(_) => Status::InputError,
            EvsError::Undecided(_) => Status::Undecided,
            EvsError::InvalidInstance(_) | EvsError::Internal(_) => Status::Finding,
        }
    }
}

fn error_kind(e: &EvsError) -> &'static str {
    match e {
        EvsError::Input(_) => "input",
        EvsError::Document { .. } => "document",
        EvsError::Domain(_) => "domain",
        EvsError::Undecided(_) => "undecided",
        EvsError::InvalidInstance(_) => "invalid-instance",
        EvsError::Internal(_) => "internal",
    }
}

/// What a verb produced: a one-line summary, optional detail lines for the
/// human format, and the structured result.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub verdict: Option<bool>,
    pub summary: String,
    pub details: Vec<String>,
    pub result: Value,
    pub dimension: Option<Value>,
}

impl Outcome {
    pub fn new(status: Status, summary: impl Into<String>, result: Value) -> Self {
        Outcome {
            status,
            verdict: None,
            summary: summary.into(),
            details: Vec::new(),
            result,
            dimension: None,
        }
    }

    /// A true/false answer: 0 when true, 2 when false.
    pub fn verdict(v: bool, summary: impl Into<String>, result: Value) -> Self {
        let mut o = Outcome::new(if v { Status::Ok } else { Status::Finding }, summary, result);
        o.verdict = Some(v);
        o
    }

    pub fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn with_dimension(mut self, d: Value) -> Self {
        self.dimension = Some(d);
        self
    }

    pub fn from_error(e: &EvsError) -> Self {
        let status = Status::of_error(e);
        Outcome::new(
            status,
            format!("error: {e}"),
            json!({"error": {"kind": error_kind(e), "message": e.to_string()}}),
        )
    }
}

/// Context echoed into every report.
pub struct Header {
    pub verb: String,
    pub command: Vec<String>,
    pub seed: u64,
    pub samples: usize,
    pub grid: (i64, i64),
    pub instance: Option<(String, String)>,
}

/// `sha256:` digest of the canonical (sorted-key, compact) JSON text.
pub fn digest(v: &Value) -> String {
    let text = serde_json::to_string(v).expect("values serialize");
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

pub fn machine(h: &Header, o: &Outcome, elapsed_ms: Option<u128>) -> String {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("tool".into(), json!({"name": "evs", "version": env!("CARGO_PKG_VERSION")}));
    m.insert("verb".into(), json!(h.verb));
    m.insert("command".into(), json!(h.command));
    m.insert("seed".into(), json!(h.seed));
    m.insert("samples".into(), json!(h.samples));
    m.insert("grid".into(), json!({"bound": h.grid.0, "max_den": h.grid.1}));
    m.insert(
        "instance".into(),
        match &h.instance {
            Some((name, digest)) => json!({"name": name, "digest": digest}),
            None => Value::Null,
        },
    );
    m.insert("status".into(), json!(o.status.label()));
    m.insert("exit_code".into(), json!(o.status.code()));
    m.insert("verdict".into(), json!(o.verdict));
    m.insert("summary".into(), json!(o.summary));
    m.insert("result".into(), o.result.clone());
    if let Some(d) = &o.dimension {
        m.insert("dimension".into(), d.clone());
    }
    if let Some(ms) = elapsed_ms {
        m.insert("timing".into(), json!({"elapsed_ms": ms}));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(m)).expect("values serialize");
    text.push('\n');
    text
}

pub fn human(o: &Outcome, elapsed_ms: Option<u128>) -> String {
    let mut out = format!("{}\n", o.summary);
    for line in &o.details {
        out.push_str("  ");
        out.push_str(line);
        out.push('\n');
    }
    if let Some(ms) = elapsed_ms {
        out.push_str(&format!("  elapsed: {ms} ms\n"));
    }
    out
}
