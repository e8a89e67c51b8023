//! Acceptance suite: one criterion per test, one pass/fail line each.
//! Budgets are pinned here; a run over budget fails the criterion.

use pcsp::experiments::run_experiment;
use pcsp::homsearch::SearchOpts;
use pcsp::SizeCap;
use std::time::{Duration, Instant};

fn criterion(number: u32, name: &str, budget: Duration) {
    let start = Instant::now();
    let result = run_experiment(name, &SearchOpts::default(), &SizeCap::default());
    let elapsed = start.elapsed();
    let (passed, details) = match &result {
        Ok(r) => (r.passed && elapsed <= budget, r.details.to_string()),
        Err(e) => (false, e.to_string()),
    };
    println!(
        "criterion {:2} [{}]: {} ({:.2?} of {:?})",
        number,
        name,
        if passed { "PASS" } else { "FAIL" },
        elapsed,
        budget,
    );
    assert!(passed, "criterion {} [{}] failed: {}", number, name, details);
}

#[test]
fn criterion_01_olsak_absent_k3_k5() {
    criterion(1, "olsak-k3-k5", Duration::from_secs(300));
}

#[test]
fn criterion_02_olsak_present_k3_k6() {
    // The explicit-witness path is near-instant; the additional indicator
    // search shares the same generous window.
    criterion(2, "olsak-k3-k6", Duration::from_secs(300));
}

#[test]
fn criterion_03_olsak_absent_c5_k3() {
    criterion(3, "olsak-c5-k3", Duration::from_secs(1800));
}

#[test]
fn criterion_04_pol_t_projections() {
    criterion(4, "pol-t-projections", Duration::from_secs(60));
}

#[test]
fn criterion_05_worked_examples() {
    criterion(5, "worked-examples", Duration::from_secs(300));
}

#[test]
fn criterion_06_k4_loop() {
    criterion(6, "k4loop", Duration::from_secs(60));
}

#[test]
fn criterion_07_aip_contract() {
    criterion(7, "aip-1in3-nae", Duration::from_secs(300));
}

#[test]
fn criterion_08_blp_incompleteness() {
    criterion(8, "blp-incompleteness", Duration::from_secs(60));
}

#[test]
fn criterion_09_width1_and_gac() {
    criterion(9, "width1-gac", Duration::from_secs(300));
}

#[test]
fn criterion_10_round_trip() {
    criterion(10, "round-trip", Duration::from_secs(300));
}

#[test]
fn criterion_11_robustness() {
    criterion(11, "robustness", Duration::from_secs(60));
}

#[test]
fn criterion_12_symmetric_alternating() {
    criterion(12, "symmetric-alternating", Duration::from_secs(300));
}

#[test]
fn criterion_13_trash_colour() {
    criterion(13, "trash-colour", Duration::from_secs(600));
}
