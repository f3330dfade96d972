//! Acceptance suite: one test and one PASS/FAIL line per criterion.
//!
//! The lines go straight to the process stdout, so they show up even when
//! the test harness captures output.

use std::io::Write;

use braidgen::verify::{self, CheckReport};

fn report(check: CheckReport) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{check}").expect("stdout is writable");
    assert!(check.passed, "{check}");
}

#[test]
fn criterion_1_worked_example_values() {
    report(verify::check_known_values());
}

#[test]
fn criterion_2_example_chain() {
    report(verify::check_example_chain());
}

#[test]
fn criterion_3_automaton_table() {
    report(verify::check_automaton_table());
}

#[test]
fn criterion_4_oracle_equivalence() {
    report(verify::check_oracle_equivalence());
}

#[test]
fn criterion_5_uniformity() {
    report(verify::check_uniformity());
}

#[test]
fn criterion_6_naive_bias() {
    report(verify::check_bias());
}

#[test]
fn criterion_7_performance() {
    report(verify::check_performance());
}

#[test]
fn criterion_8_complement_rules() {
    report(verify::check_complement_rules());
}
