//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use flatsol::oracle::DEFAULT_DEPTH;
use flatsol::verify::{self, CriterionResult};

fn main() -> ExitCode {
    let criteria: Vec<fn() -> CriterionResult> = vec![
        verify::klein_golden,
        verify::catalog_integrity,
        verify::degree_zero,
        verify::top_degree,
        verify::rational_ranks,
        verify::torsion_at_special_degree,
        verify::putnam_verdicts,
        verify::lefschetz,
        || verify::oracle_equivalence(DEFAULT_DEPTH),
        verify::property_suites,
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let r = c();
        println!("{r} ({:.2?})", start.elapsed());
        if !r.passed {
            failed += 1;
        }
    }

    let out = Command::new(env!("CARGO_BIN_EXE_flatsol")).arg("verify").output().expect("run flatsol verify");
    let code = out.status.code();
    let ok = code == Some(0);
    println!("[{}] verify command exit status {code:?}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        failed += 1;
    }

    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} failed");
        ExitCode::FAILURE
    }
}
