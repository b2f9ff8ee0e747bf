use alloc::string::String;
use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;

/// One evaluated instance of a check: its slack against the inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub index: usize,
    pub label: String,
    /// Positive is slack, negative is a violation.
    pub margin: f64,
}

/// Result of one inequality check over many instances.
///
/// `passed` is always `worst_margin >= -tolerance`; a check with no
/// instances passes vacuously and says so in its notes.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check_id: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub tolerance: f64,
    pub instances: Vec<Instance>,
    pub config_digest: String,
    pub notes: Vec<String>,
}

/// 64-bit FNV-1a digest of a configuration description, as hex.
pub fn digest(description: &str) -> String {
    let mut h = FnvHasher::default();
    h.write(description.as_bytes());
    alloc::format!("{:016x}", h.finish())
}

impl VerificationReport {
    pub fn new(check_id: &str, tolerance: f64, config_digest: &str) -> Self {
        Self {
            check_id: check_id.into(),
            passed: true,
            worst_margin: f64::INFINITY,
            tolerance,
            instances: Vec::new(),
            config_digest: config_digest.into(),
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, label: impl Into<String>, margin: f64) {
        let index = self.instances.len();
        self.instances.push(Instance {
            index,
            label: label.into(),
            margin,
        });
        // NaN margins count as violations.
        let m = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        self.worst_margin = self.worst_margin.min(m);
        self.passed = self.worst_margin >= -self.tolerance;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn instance_count(&self) -> usize {
        self.instances.len()
    }

    /// Close the report; adds a note for vacuous checks.
    pub fn finish(mut self) -> Self {
        if self.instances.is_empty() {
            self.note("no instances evaluated");
        }
        self
    }
}

/// `true` iff every report passed.
pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_worst_margin() {
        let mut r = VerificationReport::new("x", 1e-10, &digest("cfg"));
        r.record("a", 0.5);
        r.record("b", -5e-11);
        assert!(r.passed);
        assert_eq!(r.worst_margin, -5e-11);
        r.record("c", -1e-9);
        assert!(!r.passed);
        r.record("d", 1.0);
        assert!(!r.passed);
        let mut n = VerificationReport::new("y", 0.0, "");
        n.record("nan", f64::NAN);
        assert!(!n.passed);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("abc"), digest("abc"));
        assert_ne!(digest("abc"), digest("abd"));
        assert_eq!(digest("").len(), 16);
    }
}
