//! The tail-integral operator I, the slope-profile operator D, the
//! reflect-and-integrate step T, and the iteration driver.
//!
//! T maps a decreasing f with f(0) = 1 to the normalized right integral of
//! its pseudo-inverse. Node values of I and T are exact for the stored
//! piecewise-linear model; discretization error enters only through the
//! resampling performed by [`iterate`], which keeps a clean O(N^-2) error
//! model for Richardson extrapolation.

use crate::error::{Error, Result};
use crate::grid::{GridFunction, KahanSum, Tolerances};

/// One row of an iteration trace.
#[derive(Debug, Clone, Copy)]
pub struct TraceStep {
    pub n: usize,
    /// Area of the n-th stored iterate.
    pub kappa: f64,
    /// Stride of the n-th stored iterate.
    pub stride: f64,
    /// Sup-distance between consecutive stored iterates (0 for n = 0).
    pub step_dinf: f64,
}

/// Per-step record of an operator iteration.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    grid: usize,
    canonical_seed: bool,
    steps: Vec<TraceStep>,
}

impl IterationTrace {
    pub(crate) fn new(grid: usize, canonical_seed: bool) -> Self {
        IterationTrace {
            grid,
            canonical_seed,
            steps: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, n: usize, kappa: f64, stride: f64, step_dinf: f64) {
        debug_assert!(kappa > 0.0, "trace areas must stay positive");
        debug_assert_eq!(n, self.steps.len(), "steps must be consecutive from 0");
        self.steps.push(TraceStep {
            n,
            kappa,
            stride,
            step_dinf,
        });
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// True when the iteration started from the constant-1 seed; the
    /// two-sided area bracket is only valid for that trace.
    pub fn from_canonical_seed(&self) -> bool {
        self.canonical_seed
    }

    pub fn kappas(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.kappa).collect()
    }

    /// CSV serialization: header `n,kappa,stride,step_dinf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,kappa,stride,step_dinf\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                s.n, s.kappa, s.stride, s.step_dinf
            ));
        }
        out
    }
}

/// Normalized tail integral: `x -> (integral of g over [x,1]) / area(g)`.
///
/// Node values are exact right-cumulative trapezoid integrals on the knots of
/// `g`; the result starts at exactly 1 and ends at exactly 0.
pub fn op_i(g: &GridFunction) -> Result<GridFunction> {
    let knots = g.knots();
    let values = g.values();
    let n = knots.len();
    let mut tail = vec![0.0f64; n];
    let mut sum = KahanSum::new();
    for i in (0..n - 1).rev() {
        sum.add((knots[i + 1] - knots[i]) * (values[i] + values[i + 1]) * 0.5);
        tail[i] = sum.value();
    }
    let total = tail[0];
    if !(total > 0.0) {
        return Err(Error::DegenerateArea);
    }
    let mut out = Vec::with_capacity(n);
    for t in &tail {
        out.push((t / total).clamp(0.0, 1.0));
    }
    out[0] = 1.0;
    out[n - 1] = 0.0;
    GridFunction::new(knots.to_vec(), out)
}

/// Normalized slope profile: `x -> f'(x) / f'(0)`, clamped into `[0,1]`.
///
/// Slopes are centered differences at interior knots, one-sided at the two
/// edges. Inverse of [`op_i`] on convex inputs up to O(1/N).
pub fn op_d(f: &GridFunction) -> Result<GridFunction> {
    let report = f.classify(&Tolerances::default());
    if !report.is_convex {
        return Err(Error::ClassError {
            class: "convex",
            reason: "slope profile needs non-decreasing segment slopes".into(),
        });
    }
    let knots = f.knots();
    let values = f.values();
    let n = knots.len();
    let s0 = (values[1] - values[0]) / (knots[1] - knots[0]);
    if !(s0 < 0.0) || !(report.stride > 0.0) {
        return Err(Error::DegenerateSlope);
    }
    let mut out = Vec::with_capacity(n);
    out.push(1.0);
    for i in 1..n - 1 {
        let s = (values[i + 1] - values[i - 1]) / (knots[i + 1] - knots[i - 1]);
        out.push((s / s0).clamp(0.0, 1.0));
    }
    let sn = (values[n - 1] - values[n - 2]) / (knots[n - 1] - knots[n - 2]);
    out.push((sn / s0).clamp(0.0, 1.0));
    GridFunction::new(knots.to_vec(), out)
}

/// One application of the operator T: reflect, then integrate-and-normalize.
///
/// The output knots are the image knots (the value multiset of `f` plus the
/// endpoints); node values there are exact for the stored model.
pub fn op_t(f: &GridFunction) -> Result<GridFunction> {
    op_i(&f.pseudo_inverse()?)
}

/// Applies T `n_steps` times, resampling onto the canonical uniform grid
/// after each application. The trace records area, stride and the sup-metric
/// step change of every stored iterate.
pub fn iterate(
    f0: &GridFunction,
    n_steps: usize,
    tol: &Tolerances,
) -> Result<(GridFunction, IterationTrace)> {
    let (mut curves, trace) = iterate_collect(f0, n_steps, tol)?;
    Ok((curves.pop().expect("at least the seed"), trace))
}

/// As [`iterate`], but returns every stored iterate, seed included.
pub fn iterate_collect(
    f0: &GridFunction,
    n_steps: usize,
    tol: &Tolerances,
) -> Result<(Vec<GridFunction>, IterationTrace)> {
    tol.validate()?;
    if n_steps > tol.max_iter {
        return Err(Error::InvalidArgument(format!(
            "{n_steps} steps exceed the iteration cap {}",
            tol.max_iter
        )));
    }
    let canonical = f0.is_constant_one(tol.eps_mono);
    let mut curves = vec![f0.resample_uniform(tol.n_grid)?];
    let mut trace = IterationTrace::new(tol.n_grid, canonical);
    trace.push(0, curves[0].area(), curves[0].stride(), 0.0);
    for k in 1..=n_steps {
        let current = curves.last().unwrap();
        let next = op_t(current)?.resample_uniform(tol.n_grid)?;
        let step = next.d_inf(current);
        trace.push(k, next.area(), next.stride(), step);
        curves.push(next);
    }
    Ok((curves, trace))
}

/// Eliminates the O(N^-2) term from two measurements of the same scalar at
/// grid sizes N and 2N.
pub fn richardson(value_n: f64, value_2n: f64) -> f64 {
    (4.0 * value_2n - value_n) / 3.0
}

/// First zero of `f` to grid resolution: the segment carrying the first
/// value at or below `eps` is extended linearly to level zero, clipped to
/// its right knot. Returns 1 when no value drops to `eps`.
pub fn first_zero(f: &GridFunction, eps: f64) -> f64 {
    let knots = f.knots();
    let values = f.values();
    for i in 0..knots.len() {
        if values[i] <= eps {
            if i == 0 {
                return 0.0;
            }
            let (vl, vr) = (values[i - 1], values[i]);
            if vl <= vr {
                return knots[i];
            }
            let x = knots[i - 1] + vl * (knots[i] - knots[i - 1]) / (vl - vr);
            return x.min(knots[i]);
        }
    }
    1.0
}
