//! Runs a built-in scenario with overrides and prints its JSON report, the
//! same document `chernloc run --format json` writes.
//!
//! ```text
//! cargo run --release --example scenario_report -- s2_corollary1 48
//! ```

use chernloc::scenario::{builtin, emit_report, list_scenarios, run_scenario, ConfigOverride, Format};

fn main() -> chernloc::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "t2_oriented_frame".into());
    for (n, summary) in list_scenarios() {
        eprintln!("{}{n:<22} {summary}", if n == name { "* " } else { "  " });
    }
    let resolution = std::env::args().nth(2).map(|r| r.parse().expect("resolution"));
    let mut cfg = builtin(&name)?;
    cfg.apply(ConfigOverride { resolution, ..Default::default() })?;
    let report = run_scenario(&cfg)?;
    print!("{}", emit_report(&report, Format::Json)?);
    eprintln!("verdict {:?}", report.verdict);
    Ok(())
}
