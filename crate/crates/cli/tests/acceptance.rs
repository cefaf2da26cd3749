//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kahler_cli::verify::{
    conic_example, conic_two_forms, fat_points_p3, four_points, hyperplane_p5, nine_and_ten_points,
    p1_example, property_suites, six_points, twisted_cubic, CheckResult, PropertyOptions,
};

struct Criterion {
    id: u32,
    what: &'static str,
    limit: Option<Duration>,
    run: fn() -> Vec<CheckResult>,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            what: "four reduced points in P^3: tables for m = 1..4, ri 3 4 5 5",
            limit: secs(5),
            run: || vec![four_points()],
        },
        Criterion {
            id: 2,
            what: "P^1 scheme with mu = 6: engine and closed form, ri = 8",
            limit: secs(1),
            run: || vec![p1_example()],
        },
        Criterion {
            id: 3,
            what: "six points on a conic vs on two lines (chosen representatives)",
            limit: secs(10),
            run: || vec![six_points()],
        },
        Criterion {
            id: 4,
            what: "nine and ten points in P^2: six tables, 14 > 13 < 14 in Omega^1",
            limit: secs(10),
            run: || vec![nine_and_ten_points()],
        },
        Criterion {
            id: 5,
            what: "fat points in P^3: ri = m + 4, general position bounds attained",
            limit: secs(60),
            run: || vec![fat_points_p3()],
        },
        Criterion {
            id: 6,
            what: "eight conic points, nu = 1, 2, 3: HF and Omega^3 via engine and closed form",
            limit: secs(60),
            run: || (1..=3).map(conic_example).collect(),
        },
        Criterion {
            id: 7,
            what: "eight conic points: Omega^2 via both paths, stable values 0, 32, 88",
            limit: secs(120),
            run: || vec![conic_two_forms()],
        },
        Criterion {
            id: 8,
            what: "seven fat points on a hyperplane in P^5: top forms ending in 337",
            limit: None,
            run: || vec![hyperplane_p5()],
        },
        Criterion {
            id: 9,
            what: "property suites, 100 seeded instances each",
            limit: None,
            run: || property_suites(PropertyOptions::default()),
        },
        Criterion {
            id: 10,
            what: "twisted cubic: hp of the top forms = deg Y = 141",
            limit: secs(30 * 60),
            run: || vec![twisted_cubic()],
        },
    ]
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let results = (c.run)();
        let elapsed = start.elapsed();
        let checks_ok = results.iter().all(|r| r.passed);
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let limit = c
            .limit
            .map(|l| format!(", limit {} s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "criterion {:>2}: {}  {}  ({:.2} s{limit})",
            c.id,
            if checks_ok && in_time { "PASS" } else { "FAIL" },
            c.what,
            elapsed.as_secs_f64()
        );
        for r in &results {
            if results.len() > 1 || !r.passed {
                println!("    {}: {}", if r.passed { "pass" } else { "FAIL" }, r.name);
            }
            for line in r.detail.lines() {
                println!("      {line}");
            }
        }
        if !in_time {
            println!("    over the time limit");
        }
        if !(checks_ok && in_time) {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
