use std::time::Duration;

use serde::Serialize;

use crate::congruence::ProgressionClaim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check could not be carried out (evaluation error, refused size).
    Error,
}

/// Where a check failed: the index `n` and the offending value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: i64,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

/// Outcome of one identity, congruence or support check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    /// Largest index checked (a truncation or an `n_max`).
    pub checked_to: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<ProgressionClaim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(serialize_with = "as_seconds")]
    pub elapsed: Duration,
}

fn as_seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl CheckReport {
    pub fn pass(id: impl Into<String>, checked_to: u64, elapsed: Duration) -> Self {
        CheckReport {
            id: id.into(),
            checked_to,
            status: Status::Pass,
            counterexample: None,
            claim: None,
            error: None,
            notes: Vec::new(),
            elapsed,
        }
    }

    pub fn fail(id: impl Into<String>, checked_to: u64, cx: Counterexample, elapsed: Duration) -> Self {
        CheckReport {
            status: Status::Fail,
            counterexample: Some(cx),
            ..CheckReport::pass(id, checked_to, elapsed)
        }
    }

    pub fn error(id: impl Into<String>, message: impl Into<String>) -> Self {
        CheckReport {
            status: Status::Error,
            error: Some(message.into()),
            ..CheckReport::pass(id, 0, Duration::ZERO)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
