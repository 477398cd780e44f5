//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line. Run with `cargo test -p steerkit --test acceptance` (add
//! `-- --nocapture` to see the lines for passing criteria too).

use steerkit::selftest::{self, CriterionResult, DEFAULT_SEED};

fn assert_criterion(result: CriterionResult) {
    println!("{}", result.summary_line());
    assert!(result.passed, "{}", result.summary_line());
}

#[test]
fn criterion_1_inequality_reproduction() {
    assert_criterion(selftest::criterion_1_inequality_reproduction());
}

#[test]
fn criterion_2_corollary_classifier() {
    assert_criterion(selftest::criterion_2_corollary_classifier());
}

#[test]
fn criterion_3_gram_recovery() {
    assert_criterion(selftest::criterion_3_gram_recovery());
}

#[test]
fn criterion_4_kernel_optimality() {
    assert_criterion(selftest::criterion_4_kernel_optimality(DEFAULT_SEED));
}

#[test]
fn criterion_5_span_theorem_subspace() {
    assert_criterion(selftest::criterion_5_subspace(DEFAULT_SEED));
}

#[test]
fn criterion_6_effect_orthogonality() {
    assert_criterion(selftest::criterion_6_effect_orthogonality(DEFAULT_SEED));
}

#[test]
fn criterion_7_lhs_consistency() {
    assert_criterion(selftest::criterion_7_lhs_consistency(DEFAULT_SEED));
}

#[test]
fn criterion_8_witness_completeness() {
    assert_criterion(selftest::criterion_8_witness_completeness());
}

#[test]
fn criterion_9_ppt_cross_check() {
    assert_criterion(selftest::criterion_9_ppt_cross_check());
}
