use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chernloc::scenario::{builtin, emit_report, list_scenarios, run_scenario, ConfigOverride, Format, SCENARIOS};
use chernloc::Error;

#[derive(Parser)]
#[command(name = "chernloc", about = "Localization checks for graded Chern characters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Run one scenario.
    Run {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        tube_radius: Option<f64>,
        /// Truncation radii as `a,b`.
        #[arg(long, value_parser = parse_pair)]
        trunc: Option<[f64; 2]>,
        /// Tolerance applied to every check.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file with overrides for the built-in configuration.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run every built-in scenario.
    VerifyAll {
        #[arg(long)]
        resolution: Option<usize>,
    },
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?]),
        _ => Err(format!("expected `a,b`, got `{s}`")),
    }
}

/// Configuration problems exit with 2, numerical breakdowns count as failures.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::UnknownScenario(_)
        | Error::UnknownFormat(_)
        | Error::Io(_)
        | Error::ZeroSetMismatch(_)
        | Error::DiagnosticUndefined(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::List => {
            for (name, summary) in list_scenarios() {
                println!("{name:<22} {summary}");
            }
            Ok(true)
        }
        Command::Run { scenario, resolution, tube_radius, trunc, tolerance, format, out, config } => {
            let format: Format = format.parse()?;
            let mut cfg = builtin(&scenario)?;
            if let Some(path) = config {
                let o: ConfigOverride = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                cfg.apply(o)?;
            }
            cfg.apply(ConfigOverride { resolution, tube_radius, truncation: trunc, tolerance, ..Default::default() })?;
            let report = run_scenario(&cfg)?;
            let text = emit_report(&report, format)?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(report.passed())
        }
        Command::VerifyAll { resolution } => {
            let mut all = true;
            for name in SCENARIOS {
                let mut cfg = builtin(name)?;
                cfg.apply(ConfigOverride { resolution, ..Default::default() })?;
                let report = run_scenario(&cfg)?;
                print!("{}", emit_report(&report, Format::Text)?);
                all &= report.passed();
            }
            Ok(all)
        }
    }
}

fn status(cli: Cli) -> u8 {
    match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(status(Cli::parse()))
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use serde_json::Value;

    use super::*;

    fn status_of(args: &[&str]) -> u8 {
        match Cli::try_parse_from(std::iter::once("chernloc").chain(args.iter().copied())) {
            Ok(cli) => status(cli),
            Err(e) => e.exit_code() as u8,
        }
    }

    /// The report at `path` with its timing fields removed.
    fn untimed(path: &Path) -> Value {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("runtime_seconds");
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("seconds");
        }
        v
    }

    fn scratch(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("chernloc-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn listing_exits_zero() {
        assert_eq!(status_of(&["list"]), 0);
    }

    #[test]
    fn passing_scenario_exits_zero_with_deterministic_json() {
        let dir = scratch("determinism");
        let paths = [dir.join("a.json"), dir.join("b.json")];
        for p in &paths {
            let args = ["run", "--scenario", "t2_oriented_frame", "--format", "json", "--out", p.to_str().unwrap()];
            assert_eq!(status_of(&args), 0);
        }
        let (a, b) = (untimed(&paths[0]), untimed(&paths[1]));
        assert_eq!(a, b);
        assert_eq!(a["verdict"], "pass");
        let keys: Vec<&str> = a["checks"][0].as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["name", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_error", "tolerance", "pass", "diagnostic"] {
            assert!(keys.contains(&k), "missing {k}");
        }
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn failing_check_exits_one() {
        // the local-degree sum has the opposite sign of the global number
        assert_eq!(status_of(&["run", "--scenario", "s2_corollary1", "--resolution", "32"]), 1);
    }

    #[test]
    fn configuration_errors_exit_two() {
        let cases: [&[&str]; 6] = [
            &["run", "--scenario", "t2_nonvanishing", "--resolution", "8"],
            &["run", "--scenario", "nope"],
            &["run", "--scenario", "t2_nonvanishing", "--format", "yaml"],
            &["run", "--scenario", "s2_corollary1", "--trunc", "0.5,0.4"],
            &["run", "--scenario", "s2_corollary1", "--trunc", "0.5"],
            &["run", "--scenario", "s2_corollary1", "--tube-radius", "-1"],
        ];
        for args in cases {
            assert_eq!(status_of(args), 2, "{args:?}");
        }
    }

    #[test]
    fn config_file_is_applied_before_flags() {
        let dir = scratch("config");
        let bad = dir.join("bad.json");
        std::fs::write(&bad, r#"{"tolerances": {"no_such_check": 1.0}}"#).unwrap();
        assert_eq!(status_of(&["run", "--scenario", "t2_nonvanishing", "--config", bad.to_str().unwrap()]), 2);

        let good = dir.join("good.json");
        std::fs::write(&good, r#"{"resolution": 16, "tolerance": 1e-3}"#).unwrap();
        let out = dir.join("report.json");
        let args = [
            "run", "--scenario", "t2_nonvanishing", "--config", good.to_str().unwrap(), "--resolution", "20",
            "--format", "json", "--out", out.to_str().unwrap(),
        ];
        assert_eq!(status_of(&args), 0);
        let v = untimed(&out);
        assert_eq!(v["resolution"], 20);
        assert_eq!(v["checks"][1]["tolerance"], 1e-3);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
