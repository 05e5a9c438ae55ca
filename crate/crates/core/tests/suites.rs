//! The three heavier verification suites as integration tests. The inverse
//! and operators suites run in the module unit tests.

use stribola::verify::{run_suite, Suite};
use stribola::Tolerances;

fn assert_suite(suite: Suite) {
    let report = run_suite(suite, &Tolerances::default()).unwrap();
    assert!(report.passed(), "{}", report.render());
}

#[test]
fn lemmas_suite_passes() {
    assert_suite(Suite::Lemmas);
}

#[test]
fn crossing_suite_passes() {
    assert_suite(Suite::Crossing);
}

#[test]
fn convergence_suite_passes() {
    assert_suite(Suite::Convergence);
}
