//! Structured pass/fail records for reproduction checks.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        })
    }
}

/// Either a reference number or a property whose deviation must stay under
/// the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Expected {
    Value(f64),
    Property(&'static str),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub expected: Expected,
    /// The computed value, or the largest observed deviation for properties.
    pub computed: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub pass: bool,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl VerificationReport {
    /// Passes iff `|computed − expected| ≤ tolerance`.
    pub fn value(
        check_id: impl Into<String>,
        expected: f64,
        computed: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let pass = (computed - expected).abs() <= tolerance;
        Self {
            check_id: check_id.into(),
            expected: Expected::Value(expected),
            computed,
            tolerance,
            provenance,
            pass,
            runtime_ms: 0,
            detail: String::new(),
        }
    }

    /// Passes iff the observed deviation is within tolerance.
    pub fn property(
        check_id: impl Into<String>,
        deviation: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            expected: Expected::Property("deviation ≤ tolerance"),
            computed: deviation,
            tolerance,
            provenance,
            pass: deviation <= tolerance,
            runtime_ms: 0,
            detail: String::new(),
        }
    }

    /// A check that could not be evaluated at all.
    pub fn failed(check_id: impl Into<String>, provenance: Provenance, why: impl fmt::Display) -> Self {
        Self {
            check_id: check_id.into(),
            expected: Expected::Property("evaluation succeeds"),
            computed: f64::NAN,
            tolerance: 0.0,
            provenance,
            pass: false,
            runtime_ms: 0,
            detail: why.to_string(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn with_runtime(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// Deviation from the expected value (the computed value itself for
    /// properties).
    pub fn deviation(&self) -> f64 {
        match self.expected {
            Expected::Value(e) => (self.computed - e).abs(),
            Expected::Property(_) => self.computed,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let expected = match self.expected {
            Expected::Value(v) => format!("{v:.12}"),
            Expected::Property(_) => "property".to_string(),
        };
        write!(
            f,
            "{status} {:<44} expected {:>18} computed {:>20.12e} tol {:.0e} [{}] {}ms",
            self.check_id, expected, self.computed, self.tolerance, self.provenance, self.runtime_ms
        )?;
        if !self.detail.is_empty() {
            write!(f, "  ({})", self.detail)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_matches_tolerance() {
        assert!(VerificationReport::value("a", 1.0, 1.0 + 1e-7, 1e-6, Provenance::Paper).pass);
        assert!(!VerificationReport::value("a", 1.0, 1.0 + 1e-5, 1e-6, Provenance::Paper).pass);
        assert!(!VerificationReport::value("a", 1.0, f64::NAN, 1e-6, Provenance::Paper).pass);
        assert!(VerificationReport::property("p", 0.0, 1e-9, Provenance::Derived).pass);
        assert!(!VerificationReport::failed("f", Provenance::Trivial, "boom").pass);
    }

    #[test]
    fn serializes_provenance_lowercase() {
        let r = VerificationReport::value("x", 0.5, 0.5, 1e-9, Provenance::Derived);
        let j = serde_json::to_string(&r).unwrap();
        assert!(j.contains("\"provenance\":\"derived\""));
        assert!(j.contains("\"expected\":0.5"));
    }
}
