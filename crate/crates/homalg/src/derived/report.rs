use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the checked statement does not hold; nothing is asserted.
    HypothesisFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Outcome of a theorem or lemma check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub instance: String,
    pub hypotheses: Vec<Hypothesis>,
    /// Each entry is a degree or a `(p, q)` pair as a list.
    pub degrees_checked: Vec<Vec<i64>>,
    pub status: Status,
    /// Number of individual identities compared.
    #[serde(default)]
    pub checks: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn new(theorem: impl Into<String>, instance: impl Into<String>) -> Self {
        VerificationReport {
            theorem: theorem.into(),
            instance: instance.into(),
            hypotheses: Vec::new(),
            degrees_checked: Vec::new(),
            status: Status::Pass,
            checks: 0,
            counterexample: None,
            warnings: Vec::new(),
        }
    }

    pub fn hypothesis(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.hypotheses.push(Hypothesis { name: name.into(), holds, detail: detail.into() });
        if !holds && self.status == Status::Pass {
            self.status = Status::HypothesisFailed;
        }
    }

    /// Records the first failure; later ones are ignored.
    pub fn fail(&mut self, counterexample: serde_json::Value) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = Some(counterexample);
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) fn matrix_json(m: &crate::exactla::Matrix) -> serde_json::Value {
    serde_json::json!(m.to_string_rows())
}
