use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of one numerical comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Diagnostics are reported but never decide the verdict.
    pub diagnostic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default)]
    pub seconds: f64,
}

impl CheckResult {
    pub fn compare(name: &str, lhs: Complex64, rhs: Complex64, tolerance: f64) -> Self {
        let abs_error = (lhs - rhs).norm();
        CheckResult {
            name: name.to_string(),
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_error,
            tolerance,
            pass: abs_error <= tolerance,
            diagnostic: false,
            note: None,
            seconds: 0.0,
        }
    }

    pub fn real(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::compare(name, lhs.into(), rhs.into(), tolerance)
    }

    pub fn as_diagnostic(mut self) -> Self {
        self.diagnostic = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn timed(mut self, seconds: f64) -> Self {
        self.seconds = seconds;
        self
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }

    /// Whether the check counts against the verdict.
    pub fn failed(&self) -> bool {
        !self.diagnostic && !self.pass
    }
}
