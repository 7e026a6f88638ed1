use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localization::CheckResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub n: usize,
    pub resolution: usize,
    pub stencil_order: u32,
    pub checks: Vec<CheckResult>,
    pub runtime_seconds: f64,
    pub verdict: Verdict,
    pub tube_radius: f64,
    pub truncation: [f64; 2],
}

impl Report {
    /// Recomputes the verdict: pass iff every non-diagnostic check passes.
    pub fn finalize(&mut self) {
        self.verdict = if self.checks.iter().any(CheckResult::failed) { Verdict::Fail } else { Verdict::Pass };
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

pub fn emit_report(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(r)? + "\n"),
        Format::Text => Ok(text(r)),
    }
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scenario {}  n={}  resolution={}  tube={}  trunc=({}, {})",
        r.scenario, r.n, r.resolution, r.tube_radius, r.truncation[0], r.truncation[1]
    );
    let _ = writeln!(
        s,
        "{:<31} {:>15} {:>15} {:>10} {:>9}  {}",
        "check", "lhs", "rhs", "error", "tol", "status"
    );
    for c in &r.checks {
        let status = match (c.diagnostic, c.pass) {
            (true, _) => "diag",
            (false, true) => "pass",
            (false, false) => "FAIL",
        };
        let _ = writeln!(
            s,
            "{:<31} {:>15.8} {:>15.8} {:>10.2e} {:>9.1e}  {}",
            c.name, c.lhs_re, c.rhs_re, c.abs_error, c.tolerance, status
        );
        if let Some(note) = &c.note {
            let _ = writeln!(s, "    {note}");
        }
    }
    let _ = writeln!(s, "verdict: {:?} ({:.2} s)", r.verdict, r.runtime_seconds);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> Report {
        Report {
            scenario: "x".into(),
            n: 1,
            resolution: 16,
            stencil_order: 4,
            checks: vec![],
            runtime_seconds: 0.0,
            verdict: Verdict::Fail,
            tube_radius: 0.8,
            truncation: [0.4, 0.72],
        }
    }

    #[test]
    fn empty_report_passes() {
        let mut r = empty();
        r.finalize();
        assert!(r.passed());
    }

    #[test]
    fn failing_check_fails_report_but_diagnostic_does_not() {
        let mut r = empty();
        r.checks.push(CheckResult::real("d", 0.0, 1.0, 0.1).as_diagnostic());
        r.finalize();
        assert!(r.passed());
        r.checks.push(CheckResult::real("c", 0.0, 1.0, 0.1));
        r.finalize();
        assert!(!r.passed());
    }

    #[test]
    fn json_round_trip_is_exact_and_ordered() {
        let mut r = empty();
        r.checks.push(CheckResult::real("c", 0.1 + 0.2, 1.0 / 3.0, 1e-7).with_note("n"));
        r.finalize();
        let s = emit_report(&r, Format::Json).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let order = ["\"scenario\"", "\"n\"", "\"resolution\"", "\"stencil_order\"", "\"checks\"", "\"runtime_seconds\"", "\"verdict\""];
        let pos: Vec<usize> = order.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!("yaml".parse::<Format>().is_err());
    }
}
