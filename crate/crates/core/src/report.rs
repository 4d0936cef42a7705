//! JSON check records shared by the suite and the command line.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// `{check, inputs, measured, bound, verdict}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub inputs: Value,
    pub measured: Value,
    pub bound: Value,
    pub verdict: Verdict,
}

impl Record {
    pub fn new(check: impl Into<String>, inputs: Value, measured: Value, bound: Value, pass: bool) -> Self {
        Self {
            check: check.into(),
            inputs,
            measured,
            bound,
            verdict: Verdict::from_bool(pass),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}
