//! Structured check findings.
//!
//! Passing and skipped instances of a check are folded into one counted
//! finding per check id; failures are listed one by one with their witness.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedFrontier,
    SkippedMissingTheta,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedFrontier => "skipped-frontier",
            Status::SkippedMissingTheta => "skipped-missing-theta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check_id: String,
    pub status: Status,
    pub witness: Value,
}

fn keep_smaller(slot: &mut Option<Value>, w: Value) {
    let replace = match slot {
        None => true,
        Some(old) => {
            let (new, old) = (w.to_string(), old.to_string());
            new < old
        }
    };
    if replace {
        *slot = Some(w);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Tally {
    count: u64,
    first: Option<Value>,
}

/// Accumulates findings. Accessors return them in canonical order.
#[derive(Clone, Debug, Default)]
pub struct Report {
    failures: Vec<Finding>,
    explicit: Vec<Finding>,
    tallies: BTreeMap<(String, Status), Tally>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, check_id: &str) {
        self.tally(check_id, Status::Pass, None);
    }

    pub fn skip(&mut self, check_id: &str, status: Status, witness: Value) {
        debug_assert!(matches!(status, Status::SkippedFrontier | Status::SkippedMissingTheta));
        self.tally(check_id, status, Some(witness));
    }

    pub fn fail(&mut self, check_id: &str, witness: Value) {
        self.failures.push(Finding {
            check_id: check_id.to_string(),
            status: Status::Fail,
            witness,
        });
    }

    /// Records a finding verbatim (e.g. informational pass with data).
    pub fn note(&mut self, check_id: &str, status: Status, witness: Value) {
        if status == Status::Fail {
            self.fail(check_id, witness);
        } else {
            self.explicit.push(Finding {
                check_id: check_id.to_string(),
                status,
                witness,
            });
        }
    }

    pub fn record(&mut self, check_id: &str, status: Status, witness: Value) {
        match status {
            Status::Pass => self.pass(check_id),
            Status::Fail => self.fail(check_id, witness),
            s => self.skip(check_id, s, witness),
        }
    }

    fn tally(&mut self, check_id: &str, status: Status, witness: Option<Value>) {
        let t = self.tallies.entry((check_id.to_string(), status)).or_default();
        t.count += 1;
        if let Some(w) = witness {
            // keep the canonically smallest witness so the report is order-independent
            keep_smaller(&mut t.first, w);
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.failures.extend(other.failures);
        self.explicit.extend(other.explicit);
        for (k, t) in other.tallies {
            let mine = self.tallies.entry(k).or_default();
            mine.count += t.count;
            if let Some(w) = t.first {
                keep_smaller(&mut mine.first, w);
            }
        }
    }

    /// All findings in canonical `(check_id, status, witness)` order.
    pub fn findings(&self) -> Vec<Finding> {
        let mut out: Vec<Finding> = self.failures.clone();
        out.extend(self.explicit.iter().cloned());
        for ((id, status), t) in &self.tallies {
            let mut w = serde_json::Map::new();
            w.insert("instances".into(), json!(t.count));
            if let Some(first) = &t.first {
                w.insert("example".into(), first.clone());
            }
            out.push(Finding {
                check_id: id.clone(),
                status: *status,
                witness: Value::Object(w),
            });
        }
        out.sort_by_cached_key(|f| (f.check_id.clone(), f.status, f.witness.to_string()));
        out.dedup();
        out
    }

    pub fn count(&self, status: Status) -> u64 {
        let tallied: u64 = self
            .tallies
            .iter()
            .filter(|((_, s), _)| *s == status)
            .map(|(_, t)| t.count)
            .sum();
        let listed = match status {
            Status::Fail => self.failures.len() as u64,
            s => self.explicit.iter().filter(|f| f.status == s).count() as u64,
        };
        tallied + listed
    }

    pub fn has_failures(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn failures(&self) -> &[Finding] {
        &self.failures
    }

    /// Number of instances (any status) recorded for one check id.
    pub fn instances(&self, check_id: &str) -> u64 {
        let tallied: u64 = self
            .tallies
            .iter()
            .filter(|((id, _), _)| id == check_id)
            .map(|(_, t)| t.count)
            .sum();
        tallied
            + self.failures.iter().filter(|f| f.check_id == check_id).count() as u64
            + self.explicit.iter().filter(|f| f.check_id == check_id).count() as u64
    }

    pub fn status_of(&self, check_id: &str) -> Option<Status> {
        let mut worst: Option<Status> = None;
        for f in self.findings() {
            if f.check_id == check_id {
                worst = Some(match (worst, f.status) {
                    (_, Status::Fail) | (Some(Status::Fail), _) => Status::Fail,
                    (Some(Status::Pass), s) | (None, s) => s,
                    (Some(s), _) => s,
                });
            }
        }
        worst
    }

    pub fn summary(&self) -> Value {
        json!({
            "pass": self.count(Status::Pass),
            "fail": self.count(Status::Fail),
            "skipped-frontier": self.count(Status::SkippedFrontier),
            "skipped-missing-theta": self.count(Status::SkippedMissingTheta),
        })
    }

    /// Canonical JSON document. `header` carries tool metadata, input digest
    /// and budgets; it is embedded verbatim.
    pub fn to_json(&self, header: Value) -> Value {
        json!({
            "header": header,
            "findings": self.findings(),
            "summary": self.summary(),
        })
    }

    pub fn to_text(&self, header: &Value) -> String {
        let mut out = String::new();
        if let Value::Object(map) = header {
            for (k, v) in map {
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        for f in self.findings() {
            out.push_str(&format!("{:<22} {:<36} {}\n", f.status.as_str(), f.check_id, f.witness));
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} skipped-frontier, {} skipped-missing-theta\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::SkippedFrontier),
            self.count(Status::SkippedMissingTheta)
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_summary_only() {
        let r = Report::new();
        let doc = r.to_json(json!({}));
        assert_eq!(doc["findings"], json!([]));
        assert_eq!(doc["summary"]["fail"], json!(0));
    }

    #[test]
    fn order_of_recording_does_not_matter() {
        let mut a = Report::new();
        a.fail("x", json!({"k": 2}));
        a.pass("y");
        a.skip("z", Status::SkippedFrontier, json!("b"));
        a.fail("x", json!({"k": 1}));
        a.skip("z", Status::SkippedFrontier, json!("a"));
        let mut b = Report::new();
        b.skip("z", Status::SkippedFrontier, json!("a"));
        b.fail("x", json!({"k": 1}));
        b.skip("z", Status::SkippedFrontier, json!("b"));
        b.pass("y");
        b.fail("x", json!({"k": 2}));
        assert_eq!(a.to_json(json!({})), b.to_json(json!({})));
        assert_eq!(a.status_of("x"), Some(Status::Fail));
        assert_eq!(a.status_of("y"), Some(Status::Pass));
        assert_eq!(a.instances("z"), 2);
    }
}
