//! Grid-backed decreasing functions on [0,1]: evaluation, pseudo-inverse,
//! area, stride, edge slopes, metrics and class predicates.
//!
//! Everything in this crate lives on a [`GridFunction`]: knot/value pairs with
//! piecewise-linear interpolation between knots. The pseudo-inverse of a
//! piecewise-linear monotone function is again piecewise linear (an exact
//! graph reflection), so discretization error enters only when an operator
//! image is resampled onto a new grid.

use crate::error::{Error, Result};

/// Monotonicity slack used by the constructor when no explicit tolerance
/// record is in play. Rises below this are flattened by isotonic rounding,
/// larger rises are rejected.
pub const DEFAULT_EPS_MONO: f64 = 1e-9;

/// Numeric thresholds shared by the operators, the crossing scans and the
/// solver.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Zero band for sign-switch detection: samples with |delta| below this
    /// are sign-neutral.
    pub eps_sign: f64,
    /// Monotonicity slack for construction and class predicates.
    pub eps_mono: f64,
    /// Convexity slack on consecutive segment slopes.
    pub eps_conv: f64,
    /// Fixed-point stopping threshold in sup-metric units.
    pub tol_fix: f64,
    /// Canonical grid size (number of segments of the uniform grid).
    pub n_grid: usize,
    /// (a, b) scale pairs scanned by the crossing-number search.
    pub scale_grid: Vec<(f64, f64)>,
    /// Iteration cap for the solver.
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_sign: 1e-7,
            eps_mono: DEFAULT_EPS_MONO,
            eps_conv: 1e-9,
            tol_fix: 1e-12,
            n_grid: 4096,
            scale_grid: default_scale_grid(),
            max_iter: 200,
        }
    }
}

impl Tolerances {
    /// Default tolerances on an `n`-segment canonical grid.
    pub fn with_grid(n: usize) -> Self {
        Tolerances {
            n_grid: n,
            ..Tolerances::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("eps_sign", self.eps_sign),
            ("eps_mono", self.eps_mono),
            ("eps_conv", self.eps_conv),
            ("tol_fix", self.tol_fix),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidTolerances(format!(
                    "{name} must be strictly positive, got {v}"
                )));
            }
        }
        if self.n_grid < 8 {
            return Err(Error::InvalidTolerances(format!(
                "n_grid must be at least 8, got {}",
                self.n_grid
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidTolerances("max_iter must be at least 1".into()));
        }
        if self.scale_grid.is_empty() {
            return Err(Error::InvalidTolerances("scale_grid must not be empty".into()));
        }
        for &(a, b) in &self.scale_grid {
            if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidTolerances(format!(
                    "scale pair ({a}, {b}) must be finite and positive"
                )));
            }
        }
        Ok(())
    }
}

/// The default 41x41 log-uniform scale grid over [1/4, 4]^2.
///
/// The axis is inversion-symmetric by construction: entry `k` and entry
/// `40 - k` are exact floating-point reciprocals.
pub fn default_scale_grid() -> Vec<(f64, f64)> {
    let axis = log_symmetric_axis();
    let mut grid = Vec::with_capacity(axis.len() * axis.len());
    for &a in &axis {
        for &b in &axis {
            grid.push((a, b));
        }
    }
    grid
}

/// 41-point log-uniform axis over [1/4, 4], symmetric under x -> 1/x.
pub fn log_symmetric_axis() -> Vec<f64> {
    let half = 20usize;
    let mut upper = Vec::with_capacity(half);
    for k in 1..=half {
        upper.push(4f64.powf(k as f64 / half as f64));
    }
    let mut axis = Vec::with_capacity(2 * half + 1);
    for k in (1..=half).rev() {
        axis.push(1.0 / upper[k - 1]);
    }
    axis.push(1.0);
    axis.extend_from_slice(&upper);
    axis
}

/// Uniform knot vector 0, 1/n, ..., 1 with `n` segments.
pub fn uniform_knots(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Class-membership report together with the measured scalars.
#[derive(Debug, Clone, Copy)]
pub struct ClassReport {
    /// Decreasing with f(0) = 1 and positive area.
    pub in_e: bool,
    /// Additionally continuous with f(1) = 0.
    pub in_c: bool,
    /// Additionally strictly decreasing (no plateaus).
    pub in_d: bool,
    /// Segment slopes non-decreasing within the convexity slack.
    pub is_convex: bool,
    /// Convex member of C with area and stride at least 1/5.
    pub in_k: bool,
    pub area: f64,
    pub stride: f64,
    pub slope0: f64,
    pub slope1: f64,
}

/// A monotone decreasing function on `[0,1]` stored as knot/value pairs with
/// piecewise-linear interpolation.
///
/// Invariants: knots strictly ascending from exactly 0 to exactly 1, values
/// non-increasing and clamped to `[0,1]`, at least two knots.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Builds a grid function, clamping values into `[0,1]` and flattening
    /// monotonicity violations below [`DEFAULT_EPS_MONO`] by a running
    /// minimum. Larger violations are rejected.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_slack(knots, values, DEFAULT_EPS_MONO)
    }

    /// As [`GridFunction::new`] with an explicit monotonicity slack.
    pub fn with_slack(knots: Vec<f64>, mut values: Vec<f64>, eps_mono: f64) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvalidKnots(format!(
                "{} knots vs {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.len() < 2 {
            return Err(Error::InvalidKnots("need at least two knots".into()));
        }
        for (i, &x) in knots.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NotFinite { index: i });
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NotFinite { index: i });
            }
        }
        if knots[0] != 0.0 {
            return Err(Error::InvalidKnots(format!("first knot must be 0, got {}", knots[0])));
        }
        if *knots.last().unwrap() != 1.0 {
            return Err(Error::InvalidKnots(format!(
                "last knot must be 1, got {}",
                knots.last().unwrap()
            )));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidKnots("knots must be strictly ascending".into()));
        }
        for v in values.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
        let mut running = values[0];
        for (i, v) in values.iter_mut().enumerate().skip(1) {
            if *v > running {
                let rise = *v - running;
                if rise > eps_mono {
                    return Err(Error::NotMonotone { index: i, rise });
                }
                *v = running;
            }
            running = *v;
        }
        Ok(GridFunction { knots, values })
    }

    /// Samples `f` on the uniform `n`-segment grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let knots = uniform_knots(n);
        let values = knots.iter().map(|&x| f(x)).collect();
        Self::new(knots, values)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of segments (one less than the number of knots).
    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    /// Piecewise-linear interpolation at `x`, exact at knots.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain { x });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation with the argument clamped into [0,1]; used internally where
    /// rescaled sample points may fall a rounding error outside the domain.
    pub(crate) fn eval_clamped(&self, x: f64) -> f64 {
        self.eval_unchecked(x.clamp(0.0, 1.0))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        // partition_point returns the first knot > x; the segment to its left
        // contains x. Exactness at knots comes from t == 0 there.
        let j = self.knots.partition_point(|&k| k <= x);
        if j == self.knots.len() {
            return *self.values.last().unwrap();
        }
        let i = j - 1;
        if x == self.knots[i] {
            return self.values[i];
        }
        lerp(
            self.knots[i],
            self.knots[i + 1],
            self.values[i],
            self.values[i + 1],
            x,
        )
    }

    /// Evaluates at an ascending slice of points with a single forward walk.
    pub(crate) fn eval_sorted(&self, xs: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(xs.len());
        let mut seg = 0usize;
        let last = self.knots.len() - 1;
        for &x in xs {
            let x = x.clamp(0.0, 1.0);
            while seg + 1 < last && self.knots[seg + 1] <= x {
                seg += 1;
            }
            if x == self.knots[seg] {
                out.push(self.values[seg]);
            } else if x >= self.knots[seg + 1] {
                out.push(self.values[seg + 1]);
            } else {
                out.push(lerp(
                    self.knots[seg],
                    self.knots[seg + 1],
                    self.values[seg],
                    self.values[seg + 1],
                    x,
                ));
            }
        }
        out
    }

    /// Exact integral of the piecewise-linear interpolant over `[0,1]`.
    pub fn area(&self) -> f64 {
        let mut sum = KahanSum::new();
        for i in 0..self.segments() {
            sum.add((self.knots[i + 1] - self.knots[i]) * (self.values[i] + self.values[i + 1]) * 0.5);
        }
        sum.value()
    }

    /// Exact integral of the piecewise-linear interpolant over [0, t].
    pub fn integral_to(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfDomain { x: t });
        }
        let mut sum = KahanSum::new();
        for i in 0..self.segments() {
            let (xl, xr) = (self.knots[i], self.knots[i + 1]);
            if xl >= t {
                break;
            }
            if xr <= t {
                sum.add((xr - xl) * (self.values[i] + self.values[i + 1]) * 0.5);
            } else {
                let vt = lerp(xl, xr, self.values[i], self.values[i + 1], t);
                sum.add((t - xl) * (self.values[i] + vt) * 0.5);
            }
        }
        Ok(sum.value())
    }

    /// Graph reflection `sup { x : f(x) >= y }`. Requires a member of E
    /// (decreasing, f(0) = 1, positive area); the reflected function is again
    /// in E and has exactly the same area for the stored model.
    ///
    /// A plateau of `f` at level y becomes a jump of the reflection: the knot
    /// at y carries the right plateau endpoint (the sup), and the graph
    /// re-enters at the left endpoint one ulp above y, so the area under the
    /// reflection is preserved up to a sub-ulp sliver.
    pub fn pseudo_inverse(&self) -> Result<GridFunction> {
        if (self.values[0] - 1.0).abs() > DEFAULT_EPS_MONO {
            return Err(Error::ClassError {
                class: "E",
                reason: format!("f(0) = {} but must be 1", self.values[0]),
            });
        }
        if !(self.area() > 0.0) {
            return Err(Error::ClassError {
                class: "E",
                reason: "area must be positive".into(),
            });
        }
        let n = self.knots.len();
        // Reflected pairs (y, x) in ascending y; the top level is snapped to
        // exactly 1 so the reflected domain ends at 1.
        let mut raw: Vec<(f64, f64)> = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let y = if i == 0 { 1.0 } else { self.values[i] };
            raw.push((y, self.knots[i]));
        }
        let mut ys: Vec<f64> = Vec::with_capacity(n + 2);
        let mut xs: Vec<f64> = Vec::with_capacity(n + 2);
        if raw[0].0 > 0.0 {
            // f(1) > 0: the reflection is 1 on [0, f(1)).
            ys.push(0.0);
            xs.push(1.0);
        }
        let mut i = 0usize;
        while i < raw.len() {
            let (y, x_sup) = raw[i];
            let mut j = i + 1;
            while j < raw.len() && raw[j].0 == y {
                j += 1;
            }
            ys.push(y);
            xs.push(x_sup);
            if j > i + 1 && y < 1.0 {
                // interior plateau: re-enter at the left endpoint just above
                // the level, unless the next distinct level is already there
                let y_up = next_up(y);
                if j >= raw.len() || raw[j].0 > y_up {
                    ys.push(y_up);
                    xs.push(raw[j - 1].1);
                }
            }
            i = j;
        }
        GridFunction::new(ys, xs)
    }

    /// sup { a >= 0 : a - x <= a f(x) }, capped at 1. Attained at a knot for
    /// the piecewise-linear model; equals -1/f'(0+) on convex inputs.
    /// f(0) within the monotonicity slack of 1 counts as exactly 1, so the
    /// origin constrains only genuinely sub-1 starting values.
    pub fn stride(&self) -> f64 {
        if self.values[0] < 1.0 - DEFAULT_EPS_MONO {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for (&x, &v) in self.knots.iter().zip(&self.values).skip(1) {
            // drops below 1e-12 sit at the quantization floor of values
            // near 1; a single rounding ulp there would distort the
            // quotient by more than 1e-4
            if 1.0 - v >= 1e-12 {
                let q = x / (1.0 - v);
                if q < best {
                    best = q;
                }
            }
        }
        if best.is_finite() {
            best.min(1.0)
        } else {
            1.0
        }
    }

    /// (f'(0), f'(1)) in the variational sense: slope0 = -1/stride
    /// (negative infinity when the stride vanishes) and slope1 the steepest
    /// line through (1, 0) staying below the graph.
    pub fn edge_slopes(&self) -> (f64, f64) {
        let s = self.stride();
        let slope0 = if s > 0.0 { -1.0 / s } else { f64::NEG_INFINITY };
        let mut best = f64::INFINITY;
        for (&x, &v) in self.knots.iter().zip(&self.values) {
            if x < 1.0 {
                let q = v / (1.0 - x);
                if q < best {
                    best = q;
                }
            }
        }
        (slope0, -best)
    }

    /// Sup-metric distance, exact for piecewise-linear operands (the maximum
    /// of a piecewise-linear difference sits on the merged knot set).
    pub fn d_inf(&self, other: &GridFunction) -> f64 {
        let xs = merged_knots(self, other);
        let fa = self.eval_sorted(&xs);
        let fb = other.eval_sorted(&xs);
        let mut best = 0.0f64;
        for i in 0..xs.len() {
            let d = (fa[i] - fb[i]).abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Integral of |f - g|, with segment-internal sign crossings split off
    /// before integration so the result is exact for the stored model.
    pub fn d_1(&self, other: &GridFunction) -> f64 {
        let xs = merged_knots(self, other);
        let fa = self.eval_sorted(&xs);
        let fb = other.eval_sorted(&xs);
        let mut sum = KahanSum::new();
        for i in 0..xs.len() - 1 {
            let (dl, dr) = (fa[i] - fb[i], fa[i + 1] - fb[i + 1]);
            let w = xs[i + 1] - xs[i];
            if dl * dr < 0.0 {
                // split at the interior zero of the linear difference
                let t = dl / (dl - dr);
                sum.add(0.5 * w * (dl.abs() * t + dr.abs() * (1.0 - t)));
            } else {
                sum.add(0.5 * w * (dl.abs() + dr.abs()));
            }
        }
        sum.value()
    }

    /// Evaluates every class predicate and the measured scalars.
    pub fn classify(&self, tol: &Tolerances) -> ClassReport {
        let area = self.area();
        let stride = self.stride();
        let (slope0, slope1) = self.edge_slopes();
        let v0 = self.values[0];
        let vn = *self.values.last().unwrap();
        let in_e = (v0 - 1.0).abs() <= tol.eps_mono && area > 0.0;
        let in_c = in_e && vn <= tol.eps_mono;
        let in_d = in_c && self.values.windows(2).all(|w| w[0] > w[1]);
        let mut is_convex = true;
        let mut prev_slope = f64::NEG_INFINITY;
        for i in 0..self.segments() {
            let s = (self.values[i + 1] - self.values[i]) / (self.knots[i + 1] - self.knots[i]);
            if s < prev_slope - tol.eps_conv {
                is_convex = false;
                break;
            }
            prev_slope = prev_slope.max(s);
        }
        let in_k = is_convex
            && in_c
            && area >= 0.2 - tol.eps_mono
            && stride >= 0.2 - tol.eps_mono;
        ClassReport {
            in_e,
            in_c,
            in_d,
            is_convex,
            in_k,
            area,
            stride,
            slope0,
            slope1,
        }
    }

    /// Values of `self` at a new knot vector; idempotent on its own output.
    pub fn resample(&self, knots: &[f64]) -> Result<GridFunction> {
        if knots.len() < 2 {
            return Err(Error::InvalidKnots("need at least two knots".into()));
        }
        if knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
            return Err(Error::InvalidKnots("knots must span [0,1]".into()));
        }
        if knots.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidKnots("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidKnots("knots must be strictly ascending".into()));
        }
        let values = self.eval_sorted(knots);
        GridFunction::new(knots.to_vec(), values)
    }

    /// Resamples onto the uniform `n`-segment grid.
    pub fn resample_uniform(&self, n: usize) -> Result<GridFunction> {
        self.resample(&uniform_knots(n))
    }

    /// True when the function is the constant 1 within `eps`.
    pub fn is_constant_one(&self, eps: f64) -> bool {
        self.values.iter().all(|&v| (v - 1.0).abs() <= eps)
    }

    /// CSV serialization: header `x,value`, one knot per row, 17 significant
    /// digits (full round-trip precision).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.knots.len() * 48 + 16);
        out.push_str("x,value\n");
        for (x, v) in self.knots.iter().zip(&self.values) {
            out.push_str(&format!("{x:.16e},{v:.16e}\n"));
        }
        out
    }

    /// Parses the CSV format produced by [`GridFunction::to_csv`].
    pub fn from_csv(text: &str) -> Result<GridFunction> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == "x,value" => {}
            other => {
                return Err(Error::Csv(format!(
                    "expected header 'x,value', got {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut knots = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (xs, vs) = line
                .split_once(',')
                .ok_or_else(|| Error::Csv(format!("line {}: missing comma", lineno + 2)))?;
            let x: f64 = xs
                .trim()
                .parse()
                .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))?;
            let v: f64 = vs
                .trim()
                .parse()
                .map_err(|e| Error::Csv(format!("line {}: {e}", lineno + 2)))?;
            knots.push(x);
            values.push(v);
        }
        GridFunction::new(knots, values)
    }
}

#[inline]
fn lerp(xl: f64, xr: f64, vl: f64, vr: f64, x: f64) -> f64 {
    let t = (x - xl) / (xr - xl);
    vl + (vr - vl) * t
}

#[inline]
fn next_up(x: f64) -> f64 {
    f64::next_up(x)
}

/// Union of the two knot sets, ascending, deduplicated.
pub(crate) fn merged_knots(a: &GridFunction, b: &GridFunction) -> Vec<f64> {
    let (ka, kb) = (a.knots(), b.knots());
    let mut out = Vec::with_capacity(ka.len() + kb.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < ka.len() || j < kb.len() {
        let next = match (ka.get(i), kb.get(j)) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    i += 1;
                    if x == y {
                        j += 1;
                    }
                    x
                } else {
                    j += 1;
                    y
                }
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => break,
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

/// Neumaier-compensated summation; keeps long trapezoid sums near machine
/// accuracy so identities like area(f) = area(f*) hold to 1e-12 and better.
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        KahanSum { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h1(n: usize) -> GridFunction {
        GridFunction::from_fn(n, |x| 1.0 - x).unwrap()
    }

    fn h2(n: usize) -> GridFunction {
        GridFunction::from_fn(n, |x| (1.0 - x) * (1.0 - x)).unwrap()
    }

    fn h3(n: usize) -> GridFunction {
        GridFunction::from_fn(n, |x| 1.0 - 3.0 * x + 2.0 * x.powf(1.5)).unwrap()
    }

    fn ones(n: usize) -> GridFunction {
        GridFunction::from_fn(n, |_| 1.0).unwrap()
    }

    #[test]
    fn construction_validates_knots() {
        assert!(GridFunction::new(vec![0.0, 0.5], vec![1.0, 0.0]).is_err()); // last != 1
        assert!(GridFunction::new(vec![0.1, 1.0], vec![1.0, 0.0]).is_err()); // first != 0
        assert!(GridFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 0.8, 0.5, 0.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, f64::NAN, 1.0], vec![1.0, 0.5, 0.0]).is_err());
    }

    #[test]
    fn construction_isotonic_rounding() {
        // tiny rise is flattened
        let f = GridFunction::new(vec![0.0, 0.5, 1.0], vec![0.5, 0.5 + 1e-12, 0.0]).unwrap();
        assert_eq!(f.values(), &[0.5, 0.5, 0.0]);
        // large rise is an error
        let e = GridFunction::new(vec![0.0, 0.5, 1.0], vec![0.5, 0.6, 0.0]);
        assert!(matches!(e, Err(Error::NotMonotone { index: 1, .. })));
        // values clamped into [0,1]
        let f = GridFunction::new(vec![0.0, 1.0], vec![1.5, -0.25]).unwrap();
        assert_eq!(f.values(), &[1.0, 0.0]);
    }

    #[test]
    fn eval_examples() {
        let f = h1(4096);
        assert_eq!(f.eval(0.25).unwrap(), 0.75);
        // exact at every knot
        for i in (0..f.knots().len()).step_by(977) {
            assert_eq!(f.eval(f.knots()[i]).unwrap(), f.values()[i]);
        }
        let g = h2(4096);
        assert!((g.eval(0.5).unwrap() - 0.25).abs() <= 1.0 / (4096.0 * 4096.0));
        // off-knot point: piecewise-linear error is O(N^-2)
        let x = 0.3 + 0.5 / 4096.0;
        assert!((g.eval(x).unwrap() - (1.0 - x) * (1.0 - x)).abs() <= 1.0 / (4096.0 * 4096.0));
        assert!(matches!(g.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(g.eval(-0.1), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn pseudo_inverse_closed_forms() {
        // reflection of (1-x)^2 is 1 - sqrt(y); compare on a handful of points
        let n = 4096;
        let g = h2(n);
        let gi = g.pseudo_inverse().unwrap();
        for &y in &[0.001f64, 0.1, 0.3, 0.5, 0.77, 0.999] {
            let expect = 1.0 - y.sqrt();
            // worst-case local knot error is ~1/(4N) on the last segment
            assert!(
                (gi.eval(y).unwrap() - expect).abs() <= 1e-4,
                "y={y}"
            );
        }
        // constant 1 reflects to constant 1
        let one = ones(16);
        let oi = one.pseudo_inverse().unwrap();
        assert!(oi.is_constant_one(0.0));
        assert_eq!(oi.knots(), &[0.0, 1.0]);
    }

    #[test]
    fn pseudo_inverse_plateau_sup_rule() {
        // plateau at level 0.5 over [0.25, 0.75]: the reflection jumps to the
        // right endpoint
        let f = GridFunction::new(vec![0.0, 0.25, 0.75, 1.0], vec![1.0, 0.5, 0.5, 0.0]).unwrap();
        let fi = f.pseudo_inverse().unwrap();
        assert_eq!(fi.eval(0.5).unwrap(), 0.75);
        // just above the level the reflection re-enters at the left endpoint
        assert!((fi.eval(0.5 + 1e-12).unwrap() - 0.25).abs() < 1e-9);
        assert!((fi.eval(0.75).unwrap() - 0.125).abs() < 1e-15);
        // the jump riser keeps the reflected area equal to the original
        assert!((fi.area() - f.area()).abs() <= 1e-12);
    }

    #[test]
    fn pseudo_inverse_involution() {
        let f = h2(257);
        let ff = f.pseudo_inverse().unwrap().pseudo_inverse().unwrap();
        assert_eq!(f, ff); // knot-for-knot, no arithmetic in the reflection
    }

    #[test]
    fn pseudo_inverse_requires_e() {
        let f = GridFunction::new(vec![0.0, 1.0], vec![0.8, 0.0]).unwrap();
        assert!(matches!(f.pseudo_inverse(), Err(Error::ClassError { class: "E", .. })));
    }

    #[test]
    fn area_examples() {
        assert_eq!(h1(4096).area(), 0.5);
        assert_eq!(ones(8).area(), 1.0);
        assert!((h3(4096).area() - 0.3).abs() <= 1e-6);
        // reflection preserves area exactly for the stored model
        let g = h2(4096);
        assert!((g.area() - g.pseudo_inverse().unwrap().area()).abs() <= 1e-12);
    }

    #[test]
    fn stride_examples() {
        assert_eq!(h1(64).stride(), 1.0);
        let n = 4096usize;
        let s = h2(n).stride();
        assert!((s - 0.5).abs() <= 1.0 / n as f64);
        assert_eq!(ones(8).stride(), 1.0);
        // f(0) < 1 forces stride 0 via the knot at x = 0
        let f = GridFunction::new(vec![0.0, 1.0], vec![0.9, 0.0]).unwrap();
        assert_eq!(f.stride(), 0.0);
    }

    #[test]
    fn edge_slope_examples() {
        let (s0, s1) = h1(64).edge_slopes();
        assert_eq!(s0, -1.0);
        assert_eq!(s1, -1.0);
        let n = 4096usize;
        let (s0, s1) = h2(n).edge_slopes();
        assert!((s0 + 2.0).abs() <= 2.0 / n as f64);
        assert!(s1.abs() <= 1.5 / n as f64);
        let f = GridFunction::new(vec![0.0, 1.0], vec![0.9, 0.0]).unwrap();
        assert_eq!(f.edge_slopes().0, f64::NEG_INFINITY);
    }

    #[test]
    fn metric_examples() {
        let f = h1(4096);
        let g = h2(4096);
        assert_eq!(f.d_inf(&f), 0.0);
        assert_eq!(f.d_1(&f), 0.0);
        // max of x - x^2 is 1/4 at x = 1/2 (a knot of both)
        assert!((f.d_inf(&g) - 0.25).abs() <= 1e-9);
        // integral of x - x^2 is 1/6
        assert!((f.d_1(&g) - 1.0 / 6.0).abs() <= 1e-6);
        // 1-distance never exceeds the sup-distance
        let h = h3(4096);
        assert!(g.d_1(&h) <= g.d_inf(&h));
        // d_1 is invariant under reflection of both operands
        let (gi, hi) = (g.pseudo_inverse().unwrap(), h.pseudo_inverse().unwrap());
        assert!((g.d_1(&h) - gi.d_1(&hi)).abs() <= 1e-9);
    }

    #[test]
    fn d1_splits_crossing_segments() {
        // f - g changes sign inside a shared segment: |f-g| integrates to two
        // triangles
        let f = GridFunction::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let g = GridFunction::new(vec![0.0, 1.0], vec![0.75, 0.25]).unwrap();
        // diff = 0.25 - 0.5x, zero at 0.5: two triangles of area 0.0625 each
        assert!((f.d_1(&g) - 0.125).abs() <= 1e-15);
    }

    #[test]
    fn classify_examples() {
        let tol = Tolerances::default();
        let r = h1(256).classify(&tol);
        assert!(r.in_e && r.in_c && r.in_d && r.is_convex && r.in_k);

        let r = ones(8).classify(&tol);
        assert!(r.in_e && !r.in_c);

        let r = h2(4096).classify(&tol);
        assert!(r.in_k);
        assert!((r.area - 1.0 / 3.0).abs() <= 1e-6);
        assert!((r.stride - 0.5).abs() <= 1e-3);

        // plateau: continuous but not strictly decreasing, and not convex
        let step =
            GridFunction::new(vec![0.0, 0.5, 0.5 + 1e-6, 1.0], vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let r = step.classify(&tol);
        assert!(r.in_e && r.in_c && !r.in_d && !r.is_convex && !r.in_k);
    }

    #[test]
    fn inverse_integral_identity() {
        // integral of the reflection over [f(t), 1] equals the area between
        // the curve and the level f(t) on [0, t]
        for g in [h2(1024), h3(1024)] {
            let gi = g.pseudo_inverse().unwrap();
            for &t in &[0.1, 0.25, 0.5, 0.9] {
                let gt = g.eval(t).unwrap();
                let lhs = gi.area() - gi.integral_to(gt).unwrap();
                let rhs = g.integral_to(t).unwrap() - t * gt;
                assert!((lhs - rhs).abs() <= 1e-8, "t={t}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn resample_examples() {
        let f = h2(512);
        let same = f.resample(f.knots()).unwrap();
        assert_eq!(f, same);
        let r = h1(64).resample(&uniform_knots(2)).unwrap();
        assert_eq!(r.values(), &[1.0, 0.5, 0.0]);
        let fine = h2(8192);
        let coarse = fine.resample_uniform(4096).unwrap();
        assert!((coarse.area() - 1.0 / 3.0).abs() <= 1e-6);
        // idempotent
        let again = coarse.resample_uniform(4096).unwrap();
        assert_eq!(coarse, again);
        assert!(f.resample(&[0.0, 0.5]).is_err());
        assert!(f.resample(&[0.0, 0.6, 0.4, 1.0]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let f = h3(97);
        let g = GridFunction::from_csv(&f.to_csv()).unwrap();
        assert_eq!(f, g);
        assert!(GridFunction::from_csv("nope\n1,2\n").is_err());
        assert!(GridFunction::from_csv("x,value\n0.0;1.0\n").is_err());
    }

    #[test]
    fn scale_grid_is_inversion_symmetric() {
        let axis = log_symmetric_axis();
        assert_eq!(axis.len(), 41);
        assert_eq!(axis[20], 1.0);
        assert_eq!(axis[0], 0.25);
        assert_eq!(axis[40], 4.0);
        for k in 0..=20 {
            // the lower half is built by dividing the upper half
            assert_eq!(axis[k], 1.0 / axis[axis.len() - 1 - k]);
            assert!((axis[k] * axis[axis.len() - 1 - k] - 1.0).abs() < 1e-15);
        }
        assert_eq!(default_scale_grid().len(), 41 * 41);
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerances::default().validate().is_ok());
        let t = Tolerances {
            eps_sign: 0.0,
            ..Tolerances::default()
        };
        assert!(t.validate().is_err());
        let t = Tolerances {
            n_grid: 4,
            ..Tolerances::default()
        };
        assert!(t.validate().is_err());
        let t = Tolerances {
            scale_grid: Vec::new(),
            ..Tolerances::default()
        };
        assert!(t.validate().is_err());
    }
}
