use std::process::ExitCode;

use curvelog::par::Execution;
use curvelog::selftest::run_all;

fn main() -> ExitCode {
    let seed = std::env::var("CURVELOG_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20240611);
    let reports = run_all(seed, Execution::Parallel);
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} of {} criteria passed", reports.len() - failed, reports.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
