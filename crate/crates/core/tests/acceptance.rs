//! End-to-end acceptance run: one line per criterion, non-zero exit on any
//! failure. The large-matrix criterion runs only with `--extended` (or
//! `JETINV_EXTENDED=1`):
//!
//! ```text
//! cargo test -p jetinv --release --test acceptance -- --extended
//! ```

use std::process::ExitCode;
use std::time::Instant;

use jetinv::decomp::{decompose_target, Variant};
use jetinv::invariant::Weights;
use jetinv::suite::{run_criterion, title, SuiteConfig, DEFAULT_CRITERIA, EXTENDED};

/// Independent re-derivation of selected facts, run alongside the suite.
fn cross_checks(id: u8) -> Vec<String> {
    match id {
        2 => weight_table_check(),
        7 => decomposition_check(),
        _ => Vec::new(),
    }
}

fn choose(n: u128, k: u128) -> u128 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

/// Reference `(n, k, js, l, K)` rows; `l = Σ C(n+j−1, n)`, `K = C(2+k, 3)`.
fn weight_table_check() -> Vec<String> {
    let table: [(u128, u128, &[u128], u64, u64); 12] = [
        (3, 1, &[1], 1, 1),
        (3, 2, &[2], 4, 4),
        (3, 3, &[3], 10, 10),
        (3, 3, &[1, 2], 5, 10),
        (3, 6, &[2, 5], 39, 56),
        (3, 8, &[1, 3, 6], 67, 120),
        (4, 3, &[2], 5, 10),
        (4, 8, &[2, 4], 40, 120),
        (4, 9, &[3, 4], 50, 165),
        (4, 4, &[1, 2], 6, 20),
        (4, 5, &[3], 15, 35),
        (4, 7, &[4], 35, 84),
    ];
    let mut failures = Vec::new();
    for (n, k, js, l, big_k) in table {
        let oracle_l: u128 = js.iter().map(|&j| choose(n + j - 1, n)).sum();
        let oracle_k = choose(2 + k, 3);
        let js_usize: Vec<usize> = js.iter().map(|&j| j as usize).collect();
        let w = Weights::closed_form(2, n as usize, k as usize, &js_usize);
        if (oracle_l, oracle_k) != (l as u128, big_k as u128) || (w.l, w.k_exp) != (l, big_k) {
            failures.push(format!("n={n} k={k} js={js:?}: library ({}, {}), oracle ({oracle_l}, {oracle_k}), reference ({l}, {big_k})", w.l, w.k_exp));
        }
    }
    failures
}

/// Subset-sum oracle over `C(n−1+l, n−1)` by recursion on include/exclude.
fn decomposition_check() -> Vec<String> {
    fn subsets(values: &[(usize, u64)], target: u64, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if target == 0 {
            out.push(acc.clone());
            return;
        }
        let Some((&(l, v), rest)) = values.split_first() else {
            return;
        };
        if v <= target {
            acc.push(l);
            subsets(rest, target - v, acc, out);
            acc.pop();
        }
        subsets(rest, target, acc, out);
    }
    let mut failures = Vec::new();
    for n in 3..=4u64 {
        for target in 1..=100u64 {
            let values: Vec<(usize, u64)> = (1..)
                .map(|l: usize| (l, choose((n - 1 + l as u64) as u128, (n - 1) as u128) as u64))
                .take_while(|&(_, v)| v <= target)
                .collect();
            let mut expected = Vec::new();
            subsets(&values, target, &mut Vec::new(), &mut expected);
            expected.sort();
            let found: Vec<Vec<usize>> = decompose_target(target, n as usize).into_iter().map(|d| d.parts).collect();
            if found != expected {
                failures.push(format!("n={n} target={target}: {found:?} vs {expected:?}"));
            }
        }
    }
    // both stacking variants of two-parameter targets
    if Variant::WithZeroRow.target(2, 3) != 10 || Variant::WithoutZeroRow.target(2, 3) != 9 {
        failures.push("targets for k = 3".into());
    }
    failures
}

fn main() -> ExitCode {
    let extended = std::env::args().any(|a| a == "--extended")
        || std::env::var("JETINV_EXTENDED").is_ok_and(|v| v == "1");
    // the libtest protocol asks for a listing first; there is nothing to list
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let config = SuiteConfig::default();
    let mut ids = DEFAULT_CRITERIA.to_vec();
    if extended {
        ids.push(EXTENDED);
    }
    let mut all_passed = true;
    for id in ids {
        let start = Instant::now();
        let outcome = run_criterion(id, &config);
        let extra = cross_checks(id);
        let passed = outcome.passed() && extra.is_empty();
        all_passed &= passed;
        println!(
            "criterion {id}: {} — {} ({} checks, {:.1}s)",
            if passed { "PASS" } else { "FAIL" },
            outcome.title,
            outcome.checks,
            start.elapsed().as_secs_f64()
        );
        for f in outcome.failures.iter().chain(&extra).take(10) {
            println!("    {f}");
        }
    }
    if !extended {
        println!("criterion {EXTENDED}: SKIPPED — {} (run with --extended)", title(EXTENDED));
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
