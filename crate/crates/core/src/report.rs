//! Machine-readable run reports.
//!
//! The JSON form is a pure function of the command, its arguments and the
//! seed; wall-clock timings are kept out of it and only appear in the
//! human-readable summary.

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

/// One verified quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: Value,
    pub reference: Value,
    /// Zero for exact comparisons.
    pub tolerance: f64,
    /// Where the reference value comes from.
    pub basis: String,
    pub pass: bool,
}

impl Check {
    pub fn exact(
        name: impl Into<String>,
        computed: impl Serialize,
        reference: impl Serialize,
        basis: impl Into<String>,
    ) -> Self {
        let computed = serde_json::to_value(computed).expect("serializable");
        let reference = serde_json::to_value(reference).expect("serializable");
        let pass = computed == reference;
        Check { name: name.into(), computed, reference, tolerance: 0.0, basis: basis.into(), pass }
    }

    pub fn within(
        name: impl Into<String>,
        computed: f64,
        reference: f64,
        tolerance: f64,
        basis: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            computed: computed.into(),
            reference: reference.into(),
            tolerance,
            basis: basis.into(),
            pass: (computed - reference).abs() <= tolerance,
        }
    }

    /// A check whose verdict was decided by the caller.
    pub fn verdict(
        name: impl Into<String>,
        computed: impl Serialize,
        reference: impl Serialize,
        tolerance: f64,
        basis: impl Into<String>,
        pass: bool,
    ) -> Self {
        Check {
            name: name.into(),
            computed: serde_json::to_value(computed).expect("serializable"),
            reference: serde_json::to_value(reference).expect("serializable"),
            tolerance,
            basis: basis.into(),
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub arguments: Value,
    pub seed: Option<u64>,
    pub results: Vec<Check>,
    pub details: Value,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl Report {
    pub fn new(command: impl Into<String>, arguments: Value, seed: Option<u64>) -> Self {
        Report {
            command: command.into(),
            arguments,
            seed,
            results: Vec::new(),
            details: Value::Null,
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.results.push(c);
    }

    pub fn time(&mut self, label: impl Into<String>, d: Duration) {
        self.timings.push((label.into(), d));
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}\n", self.command, if self.passed() { "PASS" } else { "FAIL" });
        for c in &self.results {
            let _ =
                write!(s, "  [{}] {}: {} vs {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.computed, c.reference);
            if c.tolerance > 0.0 {
                let _ = write!(s, " (tol {:e})", c.tolerance);
            }
            s.push('\n');
        }
        for (label, d) in &self.timings {
            let _ = writeln!(s, "  time {label}: {:.3} s", d.as_secs_f64());
        }
        s
    }
}
