//! Acceptance battery: one test per gated criterion, each printing its
//! pass/fail line (run with `--nocapture` to see them as they finish).
//! Heavy solves are cached and shared across criteria within the process.

use pharm_bm::acceptance::{run_criterion, CriterionResult};

fn gate(index: usize) {
    let r: CriterionResult = run_criterion(index, false);
    println!("{}", r.format_line());
    assert!(r.passed, "{}", r.format_line());
}

#[test]
fn criterion_01_annulus_solver_oracle() {
    gate(1);
}

#[test]
fn criterion_02_functional_oracle() {
    gate(2);
}

#[test]
fn criterion_03_homogeneity_slope() {
    gate(3);
}

#[test]
fn criterion_04_hadamard_formula() {
    gate(4);
}

#[test]
fn criterion_05_support_coordinate_residuals() {
    gate(5);
}

#[test]
fn criterion_06_sup_convolution_subsolution() {
    gate(6);
}

#[test]
fn criterion_07_brunn_minkowski_min_form() {
    gate(7);
}

#[test]
fn criterion_08_limiting_characterization() {
    gate(8);
}

#[test]
fn criterion_09_property_suites() {
    gate(9);
}

#[test]
fn criterion_10_locality_probe() {
    gate(10);
}
