//! Pass/fail results with an optional serialized witness.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Outcome {
    pub fn pass() -> Outcome {
        Outcome {
            passed: true,
            witness: None,
        }
    }

    pub fn fail(witness: Value) -> Outcome {
        Outcome {
            passed: false,
            witness: Some(witness),
        }
    }

    /// Passes iff `ok`; the witness is built lazily on failure.
    pub fn check(ok: bool, witness: impl FnOnce() -> Value) -> Outcome {
        if ok {
            Outcome::pass()
        } else {
            Outcome::fail(witness())
        }
    }

    /// First failure wins; passes if every outcome passes.
    pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        for o in outcomes {
            if !o.passed {
                return o;
            }
        }
        Outcome::pass()
    }
}
