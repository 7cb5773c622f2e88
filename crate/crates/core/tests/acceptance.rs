use std::process::ExitCode;

use lagmark::verify::{format_line, run_criterion, VerifyConfig};

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for id in 1..=8 {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let r = run_criterion(id, &cfg);
        println!("{}", format_line(&r));
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
