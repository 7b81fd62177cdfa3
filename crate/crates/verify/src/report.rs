//! Report entries, JSON and markdown output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The statement as written fails and a stated variant holds; see `note`.
    ReportedVariant,
    /// Degenerate parameters for which the statement is vacuous.
    NotApplicable,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    SampledExact,
    SampledNumeric,
    /// A deliberately perturbed identity; passes when the perturbation is detected.
    NegativeControl,
}

impl Mode {
    /// Whether failures in this mode gate the suite.
    pub fn is_exact(self) -> bool {
        !matches!(self, Mode::SampledNumeric)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub lemma_id: String,
    pub params: BTreeMap<String, Value>,
    pub mode: Mode,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Value>,
    /// Largest relative deviation between an exact value and its float recomputation.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numeric_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub millis: Option<u64>,
}

impl Entry {
    pub fn new(lemma_id: impl Into<String>, mode: Mode) -> Entry {
        Entry {
            lemma_id: lemma_id.into(),
            params: BTreeMap::new(),
            mode,
            status: Status::Pass,
            ratio: None,
            counterexample: None,
            numeric_deviation: None,
            note: None,
            millis: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Entry {
        self.params
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Entry {
        self.note = Some(note.into());
        self
    }

    /// Whether this entry counts as a failure of the suite.
    pub fn is_hard_failure(&self) -> bool {
        self.mode.is_exact() && self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(mut entries: Vec<Entry>) -> Report {
        entries.sort_by(|a, b| a.lemma_id.cmp(&b.lemma_id));
        Report { entries }
    }

    pub fn get(&self, lemma_id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.lemma_id == lemma_id)
    }

    /// True iff no exact-mode entry failed.
    pub fn passed(&self) -> bool {
        !self.entries.iter().any(Entry::is_hard_failure)
    }

    /// JSON array of entries; timing fields are dropped unless requested.
    pub fn to_json(&self, include_timing: bool) -> String {
        let entries: Vec<Entry> = self
            .entries
            .iter()
            .cloned()
            .map(|mut e| {
                if !include_timing {
                    e.millis = None;
                }
                e
            })
            .collect();
        serde_json::to_string_pretty(&entries).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        Ok(Report::new(serde_json::from_str(s)?))
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let fails = self.entries.iter().filter(|e| e.is_hard_failure()).count();
        let _ = writeln!(
            out,
            "# Verification report\n\n{} checks, {} hard failures.\n",
            self.entries.len(),
            fails
        );
        let _ = writeln!(out, "| check | mode | status | ratio | max deviation | ms | parameters |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|");
        for e in &self.entries {
            let ratio = e.ratio.map(|r| format!("{r:.6e}")).unwrap_or_default();
            let dev = e.numeric_deviation.map(|r| format!("{r:.1e}")).unwrap_or_default();
            let ms = e.millis.map(|m| m.to_string()).unwrap_or_default();
            let params = e
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                e.lemma_id,
                kebab(&e.mode),
                kebab(&e.status),
                ratio,
                dev,
                ms,
                params.replace('|', "\\|")
            );
        }
        let notes: Vec<&Entry> = self.entries.iter().filter(|e| e.note.is_some()).collect();
        if !notes.is_empty() {
            let _ = writeln!(out, "\n## Notes\n");
            for e in notes {
                let _ = writeln!(out, "- **{}**: {}", e.lemma_id, e.note.as_deref().unwrap_or(""));
            }
        }
        let failing: Vec<&Entry> = self.entries.iter().filter(|e| e.counterexample.is_some()).collect();
        if !failing.is_empty() {
            let _ = writeln!(out, "\n## Counterexamples\n");
            for e in failing {
                let c = serde_json::to_string(e.counterexample.as_ref().unwrap()).unwrap_or_default();
                let _ = writeln!(out, "- **{}**: `{}`", e.lemma_id, c);
            }
        }
        out
    }
}

fn kebab<T: Serialize>(t: &T) -> String {
    match serde_json::to_value(t) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_sorting() {
        let r = Report::new(vec![
            Entry::new("b", Mode::Exact).param("l", 2),
            Entry::new("a", Mode::SampledNumeric),
        ]);
        assert_eq!(r.entries[0].lemma_id, "a");
        let back = Report::from_json(&r.to_json(true)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn numeric_failures_do_not_gate() {
        let mut e = Entry::new("n", Mode::SampledNumeric);
        e.status = Status::Fail;
        assert!(Report::new(vec![e.clone()]).passed());
        e.mode = Mode::Exact;
        assert!(!Report::new(vec![e]).passed());
    }

    #[test]
    fn timing_is_optional() {
        let mut e = Entry::new("x", Mode::Exact);
        e.millis = Some(5);
        let r = Report::new(vec![e]);
        assert!(r.to_json(true).contains("millis"));
        assert!(!r.to_json(false).contains("millis"));
        assert!(r.to_markdown().contains("| x | exact | pass |"));
    }
}
