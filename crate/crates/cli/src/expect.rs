//! Expectations and exit codes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use blockmorita_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_STRUCTURAL: i32 = 3;
/// Unknown group names, malformed parameters, unreadable input.
pub const EXIT_USAGE: i32 = 4;

/// `--expect` on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    True,
    False,
    Consistent,
}

impl FromStr for Expect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "true" => Ok(Expect::True),
            "false" => Ok(Expect::False),
            "consistent" => Ok(Expect::Consistent),
            other => Err(format!("expected true, false or consistent, got `{other}`")),
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Expect::True => "true",
            Expect::False => "false",
            Expect::Consistent => "consistent",
        };
        f.write_str(s)
    }
}

impl Expect {
    /// Checks a job result. Paired results (`upperVerdict`/`lowerVerdict`)
    /// need both verdicts to equal the expectation.
    pub fn holds(&self, result: &Value) -> bool {
        let b = |p: &str| result.pointer(p).and_then(Value::as_bool);
        match self {
            Expect::Consistent => b("/consistent") == Some(true),
            Expect::True | Expect::False => {
                let want = *self == Expect::True;
                match (b("/upperVerdict"), b("/lowerVerdict")) {
                    (Some(u), Some(l)) => u == want && l == want,
                    _ => b("/verdict") == Some(want),
                }
            }
        }
    }
}

/// Manifest expectations: JSON pointers into the result and the values
/// found there.
pub type FieldExpectations = BTreeMap<String, Value>;

/// Pointers whose value differs from the expectation.
pub fn mismatches(result: &Value, expect: &FieldExpectations) -> Vec<String> {
    expect
        .iter()
        .filter(|(p, v)| result.pointer(p) != Some(v))
        .map(|(p, v)| {
            format!(
                "{p}: expected {v}, found {}",
                result.pointer(p).map_or("nothing".into(), Value::to_string)
            )
        })
        .collect()
}

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Cap { .. } | Error::IterationCap { .. } => EXIT_CAP,
        Error::UnknownGroup(_) | Error::InvalidParameter(_) | Error::Io(_) | Error::Format(_) => {
            EXIT_USAGE
        }
        _ => EXIT_STRUCTURAL,
    }
}

/// The exit code as a function of the outcome and the expectation.
pub fn exit_code(outcome: Result<&Value, &Error>, expect: Option<Expect>) -> i32 {
    match outcome {
        Err(e) => error_exit_code(e),
        Ok(v) => match expect {
            Some(x) if !x.holds(v) => EXIT_MISMATCH,
            _ => EXIT_OK,
        },
    }
}
