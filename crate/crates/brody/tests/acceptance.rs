//! Runs every acceptance criterion and prints one line per criterion.
//!
//! `BRODY_ACCEPTANCE_ONLY=1,5,9` restricts the run to a subset.

use std::process::ExitCode;

use brody::acceptance::{run_acceptance, AcceptanceConfig, CRITERIA};

fn main() -> ExitCode {
    let mut cfg = AcceptanceConfig::default();
    if let Ok(s) = std::env::var("BRODY_ACCEPTANCE_ONLY") {
        cfg.only = Some(s.split(',').map(|t| t.trim().parse().expect("criterion id")).collect());
    }
    let report = match run_acceptance(&cfg, &mut |c| println!("{}", c.line())) {
        Ok(r) => r,
        Err(e) => {
            println!("acceptance aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let expected = cfg.only.as_ref().map_or(CRITERIA as usize, Vec::len);
    let failed = report.failures();
    println!("{} of {} criteria passed", report.criteria.len() - failed, expected);
    if failed == 0 && report.criteria.len() == expected {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
