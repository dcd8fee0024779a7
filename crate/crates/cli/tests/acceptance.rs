//! Acceptance suite: one pass/fail line per criterion, with time budgets.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serre_lab::characters::{brauer_expand, char_of_virtual, weyl_character, weyl_dimension, FormalCharacter};
use serre_lab::{Perm, RootCtx, Weight};
use serre_lab_cli::checks::{self, CheckResult};

/// Time budgets in seconds, by criterion.
const BUDGET: [(u32, f64); 7] = [(1, 300.0), (2, 10.0), (3, 60.0), (4, 600.0), (5, 600.0), (6, 60.0), (7, 600.0)];

const BRAUER_CASES: u32 = 1000;
const WEYL_DIMENSION_CASES: u32 = 500;

fn budget(id: u32) -> f64 {
    BUDGET.iter().find(|b| b.0 == id).map(|b| b.1).expect("budgeted")
}

fn symmetric_character(n: usize, seeds: &[(Vec<i64>, i64)]) -> FormalCharacter {
    let mut chi = FormalCharacter::zero();
    for (v, c) in seeds {
        let mut orbit: Vec<Weight> = Perm::all(n).iter().map(|w| w.act(&Weight(v.clone()))).collect();
        orbit.sort();
        orbit.dedup();
        for x in orbit {
            chi.add_term(x, *c);
        }
    }
    chi
}

/// `lambda_i - lambda_{i+1} = gaps_i` and `lambda_n = gaps_n - 2`.
fn dominant_from_gaps(gaps: &[i64]) -> Weight {
    let n = gaps.len();
    let mut v = vec![0i64; n];
    v[n - 1] = gaps[n - 1] - 2;
    for i in (0..n - 1).rev() {
        v[i] = v[i + 1] + gaps[i];
    }
    Weight(v)
}

fn brauer_random() -> Result<(), String> {
    let strategy = (2usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(0i64..4, n),
            prop::collection::vec((prop::collection::vec(-3i64..4, n), -2i64..3), 1..4),
        )
    });
    let mut runner = TestRunner::new(Config { cases: BRAUER_CASES, ..Config::default() });
    runner
        .run(&strategy, |(n, lambda, seeds)| {
            let ctx = RootCtx::new(n, 5).unwrap();
            let chi = symmetric_character(n, &seeds);
            let lambda = dominant_from_gaps(&lambda);
            let v = brauer_expand(&lambda, &chi, &ctx).unwrap();
            let lhs = char_of_virtual(&v, &ctx).unwrap();
            let rhs = weyl_character(&lambda, &ctx).unwrap().mul(&chi);
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn weyl_dimension_random() -> Result<(), String> {
    let strategy = (2usize..=4).prop_flat_map(|n| (Just(n), prop::collection::vec(0i64..5, n)));
    let mut runner = TestRunner::new(Config { cases: WEYL_DIMENSION_CASES, ..Config::default() });
    runner
        .run(&strategy, |(n, gaps)| {
            let lambda = dominant_from_gaps(&gaps);
            let v = lambda.0.clone();
            let ctx = RootCtx::new(n, 5).unwrap();
            let mut num: i128 = 1;
            let mut den: i128 = 1;
            for i in 0..n {
                for j in i + 1..n {
                    num *= (v[i] - v[j] + (j - i) as i64) as i128;
                    den *= (j - i) as i128;
                }
            }
            prop_assert_eq!(num % den, 0);
            prop_assert_eq!(weyl_dimension(&lambda), num / den);
            prop_assert_eq!(weyl_character(&lambda, &ctx).unwrap().mass() as i128, num / den);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn with_random_suites(mut r: CheckResult) -> CheckResult {
    let start = std::time::Instant::now();
    let extra = [("Brauer x1000", brauer_random()), ("Weyl dimension x500", weyl_dimension_random())];
    for (name, out) in extra {
        match out {
            Ok(()) => r.detail.push_str(&format!(", {name}")),
            Err(e) => {
                r.passed = false;
                r.detail.push_str(&format!("; {name} failed: {e}"));
            }
        }
    }
    r.seconds += start.elapsed().as_secs_f64();
    r
}

fn main() {
    let mut results = checks::run_all(false);
    let last = results.pop().expect("seven criteria");
    results.push(with_random_suites(last));
    let mut failed = Vec::new();
    println!();
    for r in &mut results {
        let limit = budget(r.id);
        if r.passed && r.seconds > limit {
            r.passed = false;
            r.detail.push_str(&format!("; over budget of {limit}s"));
        }
        println!("{}", r.line());
        if !r.passed {
            failed.push(r.id);
        }
    }
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
