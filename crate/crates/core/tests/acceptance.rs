//! Acceptance criteria, one line each. Sample counts and time limits are
//! fixed here; the run uses the default seed and full sample counts.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use genoid::selftest::{run_suite, SelfTestConfig, SuiteReport};

struct Criterion {
    id: u32,
    suite: &'static str,
    /// Exact number of samples the suite must examine.
    samples: usize,
    limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, suite: "genoid-axioms", samples: 10_000, limit: secs(30) },
    // Three fixed equalities plus 1,000 random Kleisli/δ samples.
    Criterion { id: 2, suite: "monad", samples: 1_001, limit: secs(1) },
    Criterion { id: 3, suite: "combinators", samples: 1_000, limit: secs(10) },
    Criterion { id: 4, suite: "lambda-formulas", samples: 1_000, limit: secs(60) },
    Criterion { id: 5, suite: "oracle-differential", samples: 1_000, limit: secs(60) },
    Criterion { id: 6, suite: "rank-laws", samples: 2_000, limit: secs(30) },
    Criterion { id: 7, suite: "clone", samples: 500, limit: secs(60) },
    Criterion { id: 8, suite: "quantifier-algebra", samples: 500, limit: secs(120) },
    // Seven valid instances, two refutations.
    Criterion { id: 9, suite: "validity", samples: 9, limit: secs(60) },
    Criterion { id: 10, suite: "round-trips", samples: 5_000, limit: secs(10) },
];

fn judge(c: &Criterion, r: &SuiteReport, elapsed: Duration) -> Result<(), String> {
    if r.failures > 0 {
        return Err(format!("{} failures, first: {}", r.failures, r.examples.first().map_or("", |s| s)));
    }
    if r.samples != c.samples {
        return Err(format!("{} samples, expected {}", r.samples, c.samples));
    }
    if elapsed > c.limit {
        return Err(format!("took {:.2} s", elapsed.as_secs_f64()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = SelfTestConfig::default();
    println!("acceptance, seed {:#x}", cfg.seed);
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let r = run_suite(c.suite, &cfg).expect("suite is registered");
        let elapsed = start.elapsed();
        let verdict = judge(c, &r, elapsed);
        println!(
            "criterion {:>2} {:<20} {} {:>6} samples {:>9} checks {:>4} skipped {:>8.3} s (limit {} s){}",
            c.id,
            c.suite,
            if verdict.is_ok() { "PASS" } else { "FAIL" },
            r.samples,
            r.checks,
            r.skipped,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            verdict.as_ref().err().map_or(String::new(), |e| format!(": {e}")),
        );
        if verdict.is_err() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
