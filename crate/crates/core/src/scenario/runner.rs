use std::time::Instant;

use num_complex::Complex64;

use super::config::ScenarioConfig;
use super::report::{Report, Verdict};
use crate::error::Result;
use crate::localization::verify::{
    check_complement, check_degree_sum, check_euler_recovery, check_exterior_character, check_gauss_bonnet,
    check_localized_pairings, check_normal_euler, check_transgression, check_tube_localization, check_zero_set,
    degrees, localized_pairings,
};
use crate::localization::{sweep, CheckResult};

/// Order of the finite-difference stencil behind every derivative.
pub const STENCIL_ORDER: u32 = 4;

/// Runs every check that applies to the scenario. Validation happens before
/// any computation.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Report> {
    let start = Instant::now();
    let p = cfg.build()?;
    let t = &cfg.tolerances;
    let mut checks: Vec<CheckResult> = Vec::new();

    if p.symbol.is_some() {
        checks.push(check_zero_set(&p, cfg.seed)?);
    }

    let s = sweep(&p)?;
    checks.push(check_tube_localization(&s, t.tube_localization));
    checks.extend(check_complement(&s, t.complement_vanishing, t.tube_localization));

    let pairing_start = Instant::now();
    let pairings = localized_pairings(&p)?;
    let pairing_seconds = pairing_start.elapsed().as_secs_f64();
    checks.push(check_localized_pairings(&s, &pairings, pairing_seconds, t.localized_pairings));
    checks.extend(check_normal_euler(&p, &pairings, &s.tubes, t.normal_euler_identity)?);

    if let Some(d) = degrees(&p)? {
        checks.extend(check_degree_sum(p.n(), &s, &d, t.degree_sum));
    }
    if p.symbol.is_some() {
        checks.push(check_exterior_character(&p, &s, t.exterior_algebra_character)?);
        checks.push(check_euler_recovery(&p, &pairings, t.euler_characteristic_recovery)?);
    }
    // the time-integrated transgression needs jets at shifted points; it is
    // only affordable on surfaces
    if p.atlas.dim() == 2 {
        checks.push(check_transgression(&p, t.transgression)?);
    }
    checks.push(check_gauss_bonnet(&p, &s, t.gauss_bonnet)?);

    let mut r = Report {
        scenario: cfg.name.clone(),
        n: cfg.n,
        resolution: cfg.resolution,
        stencil_order: STENCIL_ORDER,
        checks,
        runtime_seconds: start.elapsed().as_secs_f64(),
        verdict: Verdict::Fail,
        tube_radius: cfg.tube_radius,
        truncation: cfg.truncation,
    };
    r.finalize();
    Ok(r)
}

/// Sum of localized pairings divided by `(−2)ⁿ`, from a finished report.
pub fn recovered_euler_characteristic(r: &Report) -> Option<Complex64> {
    r.check("euler_characteristic_recovery").map(CheckResult::lhs)
}
