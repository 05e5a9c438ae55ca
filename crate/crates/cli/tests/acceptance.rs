//! Acceptance suite: the eight release criteria, run in order with one
//! pass/fail line each. Criteria share no state and pin every tolerance and
//! runtime budget in place.
//!
//! Run with `cargo test -p stribola-cli --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::{Duration, Instant};

use stribola::fixtures::{self, SeedKind};
use stribola::verify::{run_suite, Suite};
use stribola::{ops, solve, Tolerances};

struct Outcome {
    name: &'static str,
    result: Result<String, String>,
    elapsed: Duration,
}

fn run_criterion(
    outcomes: &mut Vec<Outcome>,
    name: &'static str,
    f: impl FnOnce() -> Result<String, String>,
) {
    let t0 = Instant::now();
    let result = f();
    outcomes.push(Outcome {
        name,
        result,
        elapsed: t0.elapsed(),
    });
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();

    run_criterion(&mut outcomes, "1 closed-form iterates via CLI", criterion_1);
    run_criterion(&mut outcomes, "2 kappa bracket at N=16384", criterion_2);
    run_criterion(&mut outcomes, "3 fixed-point residuals at N=8192", criterion_3);
    run_criterion(&mut outcomes, "4 lemma suite over convex fixtures", criterion_4);
    run_criterion(&mut outcomes, "5 crossing/domination suite", criterion_5);
    run_criterion(&mut outcomes, "6 global convergence from 5 seeds", criterion_6);
    run_criterion(&mut outcomes, "7 metric equivalence on 200 pairs", criterion_7);
    run_criterion(&mut outcomes, "8 order-of-accuracy check", criterion_8);

    let mut all_ok = true;
    for o in &outcomes {
        match &o.result {
            Ok(detail) => println!(
                "criterion {}: PASS ({detail}; {:.2?})",
                o.name, o.elapsed
            ),
            Err(detail) => {
                all_ok = false;
                println!("criterion {}: FAIL ({detail}; {:.2?})", o.name, o.elapsed);
            }
        }
    }
    assert!(all_ok, "acceptance criteria failed; see the lines above");
}

/// `iterate --n 4 --grid 4096` reproduces the first five areas
/// (1, 1/2, 1/3, 3/10, 2/7) within 1e-6 each, in under a second.
fn criterion_1() -> Result<String, String> {
    let t0 = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_stribola"))
        .args(["iterate", "--n", "4", "--grid", "4096", "--format", "svg", "--out", "/dev/null"])
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    let elapsed = t0.elapsed();
    if out.status.code() != Some(0) {
        return Err(format!("exit code {:?}", out.status.code()));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let kappas: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .nth(1)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| format!("bad trace line {l:?}"))
        })
        .collect::<Result<_, _>>()?;
    let expect = [1.0, 0.5, 1.0 / 3.0, 0.3, 2.0 / 7.0];
    if kappas.len() != expect.len() {
        return Err(format!("{} trace rows, expected 5", kappas.len()));
    }
    let worst = kappas
        .iter()
        .zip(expect)
        .map(|(k, e)| (k - e).abs())
        .fold(0.0f64, f64::max);
    if worst > 1e-6 {
        return Err(format!("worst area error {worst:.3e} > 1e-6"));
    }
    if elapsed > Duration::from_secs(1) {
        return Err(format!("took {elapsed:.2?}, budget 1 s"));
    }
    Ok(format!("worst area error {worst:.3e}, {elapsed:.2?}"))
}

/// At N = 16384 the extrapolated area lies in [0.27887696, 0.27887716] and
/// the trace brackets nest monotonically within 1e-9, in under 30 s.
fn criterion_2() -> Result<String, String> {
    let t0 = Instant::now();
    let n = 16384usize;
    let tol = Tolerances::with_grid(n);
    let sol = solve::solve(&fixtures::seed(SeedKind::One, n), &tol)
        .map_err(|e| format!("solve failed: {e}"))?;
    let elapsed = t0.elapsed();
    let estimate = sol.kappa_extrapolated;
    if !(0.27887696..=0.27887716).contains(&estimate) {
        return Err(format!("estimate {estimate:.10} outside the window"));
    }
    let steps = sol.trace.steps();
    let mut prev_lo = f64::NEG_INFINITY;
    let mut prev_hi = f64::INFINITY;
    for w in 2..steps.len() {
        let (k_n, k_prev) = (steps[w].kappa, steps[w - 1].kappa);
        let lo = k_n - 1.0 + k_n / k_prev;
        if lo < prev_lo - 1e-9 || k_n > prev_hi + 1e-9 {
            return Err(format!("bracket nesting breaks at step {w}"));
        }
        prev_lo = prev_lo.max(lo);
        prev_hi = prev_hi.min(k_n);
    }
    // by step 23 the trace bracket pins seven digits
    if steps.len() <= 23 {
        return Err(format!("trace stopped after {} steps", steps.len() - 1));
    }
    let (k23, k22) = (steps[23].kappa, steps[22].kappa);
    let (lo23, hi23) = (k23 - 1.0 + k23 / k22, k23);
    if !(0.27887706 < lo23 && hi23 < 0.27887707) {
        return Err(format!("step-23 bracket ({lo23:.10}, {hi23:.10}) misses 7 digits"));
    }
    if elapsed > Duration::from_secs(30) {
        return Err(format!("took {elapsed:.2?}, budget 30 s"));
    }
    Ok(format!("estimate {estimate:.10}, nested brackets, step-23 bracket in (0.27887706, 0.27887707)"))
}

/// Fixed-point residual at most 1e-10, equation residual at most 1e-3 at
/// N = 8192, and all five fixed-point identities within their tolerances.
fn criterion_3() -> Result<String, String> {
    let n = 8192usize;
    let tol = Tolerances::with_grid(n);
    let sol = solve::solve(&fixtures::seed(SeedKind::One, n), &tol)
        .map_err(|e| format!("solve failed: {e}"))?;
    if sol.residual_fix > 1e-10 {
        return Err(format!("fixed-point residual {:.3e} > 1e-10", sol.residual_fix));
    }
    if sol.residual_ide > 1e-3 {
        return Err(format!("equation residual {:.3e} > 1e-3", sol.residual_ide));
    }
    let report = solve::fixed_point_checks(&sol).map_err(|e| e.to_string())?;
    for c in &report.checks {
        if !c.passed {
            return Err(format!(
                "{}: measured {:.6}, target {:.6}, tolerance {:.1e}",
                c.name, c.measured, c.target, c.tolerance
            ));
        }
    }
    // the 8192-grid solve extrapolates over 8192/16384 and must agree with
    // the reference digits to 1e-6
    let kappa_err = (sol.kappa_extrapolated - 0.2788770613).abs();
    if kappa_err > 1e-6 {
        return Err(format!("extrapolated kappa off by {kappa_err:.2e}"));
    }
    Ok(format!(
        "residuals {:.2e} / {:.2e}, 5 identities hold, kappa off by {kappa_err:.1e}",
        sol.residual_fix, sol.residual_ide
    ))
}

/// The lemma suite (image bounds, invariant set, metric equivalence, stride
/// and pinched-area inequalities) passes with zero violations.
fn criterion_4() -> Result<String, String> {
    suite_criterion(Suite::Lemmas)
}

/// The crossing/domination suite passes (chain never refuted, the limit
/// crosses itself once, parity and symmetry hold), in under 60 s.
fn criterion_5() -> Result<String, String> {
    let t0 = Instant::now();
    let detail = suite_criterion(Suite::Crossing)?;
    let elapsed = t0.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.2?}, budget 60 s"));
    }
    Ok(detail)
}

/// The convergence suite passes: all seeds reach the reference profile and
/// fully converged runs agree pairwise.
fn criterion_6() -> Result<String, String> {
    suite_criterion(Suite::Convergence)
}

fn suite_criterion(suite: Suite) -> Result<String, String> {
    let report = run_suite(suite, &Tolerances::default()).map_err(|e| e.to_string())?;
    let (ok, bad) = report.counts();
    if bad > 0 {
        let first = report
            .checks
            .iter()
            .find(|c| !c.passed)
            .map(|c| format!("{} ({})", c.label, c.detail))
            .unwrap_or_default();
        return Err(format!("{bad} of {} checks failed, first: {first}", ok + bad));
    }
    Ok(format!("{ok} checks"))
}

/// 200 random pairs from the invariant set satisfy
/// d_1 <= d_inf <= 5 sqrt(d_1) + 1e-9.
fn criterion_7() -> Result<String, String> {
    let mut rng = fixtures::XorShift::new(0xACCE5505);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let f = fixtures::random_k_fixture(&mut rng, 512);
        let g = fixtures::random_k_fixture(&mut rng, 512);
        let d1 = f.d_1(&g);
        let di = f.d_inf(&g);
        worst = worst.max(d1 - di).max(di - 5.0 * d1.sqrt());
    }
    if worst > 1e-9 {
        return Err(format!("worst chain violation {worst:.3e} > 1e-9"));
    }
    Ok(format!("worst margin {worst:.3e}"))
}

/// The error of the second area against the exact 1/3 drops by a factor of
/// 4 +- 10% when the grid doubles from 2048 to 4096.
fn criterion_8() -> Result<String, String> {
    let kappa2 = |n: usize| -> Result<f64, String> {
        let (_, trace) = ops::iterate(
            &fixtures::seed(SeedKind::One, n),
            2,
            &Tolerances::with_grid(n),
        )
        .map_err(|e| e.to_string())?;
        Ok(trace.kappas()[2])
    };
    let e1 = (kappa2(2048)? - 1.0 / 3.0).abs();
    let e2 = (kappa2(4096)? - 1.0 / 3.0).abs();
    let ratio = e1 / e2;
    if !(3.6..=4.4).contains(&ratio) {
        return Err(format!("error ratio {ratio:.3} outside 4 +- 10%"));
    }
    Ok(format!("error ratio {ratio:.3}"))
}
