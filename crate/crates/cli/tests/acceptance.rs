//! Every acceptance criterion at its pinned scale, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines are always shown.

use std::process::ExitCode;

use roundlab_cli::suite::CRITERIA;

const SEED: u64 = 7;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, name, check) in CRITERIA {
        match check(SEED) {
            Ok(outcome) => {
                println!("{}", outcome.line());
                if !outcome.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("FAIL criterion {id:>2} {name}: error: {e:#}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
