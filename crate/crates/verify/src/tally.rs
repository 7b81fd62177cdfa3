//! Accumulates exact comparisons and float deviations for one check.

use nctorus_core::{ExactVector, NumericCtx, Scalar};
use serde_json::{json, Value};

use crate::report::{Entry, Mode, Status};
use crate::twin::{exact_part, Twin, TwinVector};
use crate::Alg;

/// How many differing terms a counterexample shows.
const SHOWN_TERMS: usize = 6;

pub struct Tally {
    theta: f64,
    pub checked: u64,
    pub failed: u64,
    first_failure: Option<Value>,
    max_dev: f64,
}

impl Tally {
    pub fn new(theta: f64) -> Tally {
        Tally {
            theta,
            checked: 0,
            failed: 0,
            first_failure: None,
            max_dev: 0.0,
        }
    }

    pub fn alg(&self) -> Alg {
        Alg::new(NumericCtx::new(self.theta))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn note_scalar(&mut self, c: &Twin) {
        let d = c.deviation(self.theta);
        if d > self.max_dev || d.is_nan() {
            self.max_dev = if d.is_nan() { f64::INFINITY } else { d };
        }
    }

    pub fn note_vector(&mut self, v: &TwinVector) {
        for (_, c) in v.iter() {
            self.note_scalar(c);
        }
    }

    /// Records a boolean outcome; `context` is evaluated only on failure.
    pub fn check(&mut self, ok: bool, context: impl FnOnce() -> Value) -> bool {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
        ok
    }

    /// Exact equality of two vectors; both sides feed the float cross-check.
    pub fn vec_eq(&mut self, lhs: &TwinVector, rhs: &TwinVector, context: impl FnOnce() -> Value) -> bool {
        self.note_vector(lhs);
        self.note_vector(rhs);
        let ok = lhs == rhs;
        self.check(ok, || {
            let mut c = context();
            c["difference"] = vector_payload(&exact_part(&lhs.sub(rhs)));
            c
        })
    }

    pub fn scalar_eq(&mut self, lhs: &Twin, rhs: &Twin, context: impl FnOnce() -> Value) -> bool {
        self.note_scalar(lhs);
        self.note_scalar(rhs);
        let ok = lhs == rhs;
        self.check(ok, || {
            let mut c = context();
            c["lhs"] = json!(lhs.exact.to_string());
            c["rhs"] = json!(rhs.exact.to_string());
            c
        })
    }

    /// Folds in a tally computed in parallel; merge in a fixed order for determinism.
    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self.max_dev = self.max_dev.max(other.max_dev);
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_dev
    }

    /// Entry for an identity check: pass iff nothing failed.
    pub fn finish(self, entry: Entry) -> Entry {
        let status = if self.failed == 0 { Status::Pass } else { Status::Fail };
        self.finish_with(entry, status)
    }

    /// Entry for a negative control: pass iff the perturbed identity was rejected.
    pub fn finish_control(self, mut entry: Entry) -> Entry {
        entry.mode = Mode::NegativeControl;
        let detected = self.failed > 0;
        let status = if detected { Status::Pass } else { Status::Fail };
        let first = self.first_failure.clone();
        let mut e = self.finish_with(entry, status);
        // The rejected instance is evidence, not a counterexample.
        e.counterexample = None;
        if let Some(f) = first {
            e.params.insert("detected_example".into(), f);
        }
        e
    }

    pub fn finish_with(self, entry: Entry, status: Status) -> Entry {
        let mut e = entry.param("checked", self.checked).param("failed", self.failed);
        e.status = status;
        e.numeric_deviation = Some(round_dev(self.max_dev));
        if status == Status::Fail || status == Status::ReportedVariant {
            e.counterexample = self.first_failure;
        }
        e
    }
}

/// Deviations are rounded to two significant digits so reports stay byte-stable
/// across platforms with different last-bit float behaviour.
pub fn round_dev(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.1e}").parse().unwrap_or(x)
}

/// First few terms of a vector, as text, with its support size.
pub fn vector_payload(v: &ExactVector) -> Value {
    let terms: Vec<Value> = v
        .iter()
        .take(SHOWN_TERMS)
        .map(|(w, c)| json!({"word": w.to_string(), "coeff": c.to_string()}))
        .collect();
    json!({"support": v.support_len(), "terms": terms})
}

pub fn scalar_text(s: &Scalar) -> Value {
    json!(s.to_string())
}
