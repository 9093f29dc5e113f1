use serde::Serialize;
use sha2::{Digest, Sha256};

/// One JSON line of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub check: String,
    pub inputs_digest: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Record {
    pub fn new(check: impl Into<String>, inputs: &str, lhs: impl ToString, rhs: impl ToString, pass: bool) -> Self {
        Record {
            check: check.into(),
            inputs_digest: digest(inputs),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

/// Terminates every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub check: &'static str,
    pub records: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let failed = records.iter().filter(|r| !r.pass).count();
        Summary {
            check: "summary",
            records: records.len(),
            failed,
            pass: failed == 0,
        }
    }
}

/// Hex SHA-256 of a canonical description of a check's inputs.
pub fn digest(inputs: &str) -> String {
    hex::encode(Sha256::digest(inputs.as_bytes()))
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: &'a str,
}

pub(crate) fn emit_error(kind: &str, message: &str) {
    let line = serde_json::to_string(&ErrorRecord { error: kind, message }).expect("error record serializes");
    eprintln!("{line}");
}
