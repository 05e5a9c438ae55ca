//! Sign-switch counting for scaled differences f(ax) - b g(x), crossing
//! number lower bounds over (a,b) scale grids, and domination verdicts.
//!
//! The crossing number is a supremum over all positive scale pairs; no finite
//! procedure computes it exactly. Scans over a finite grid therefore yield
//! certified lower bounds and three-valued domination verdicts: a refutation
//! is sound, "consistent" is evidence.

use crate::error::{Error, Result};
use crate::grid::{merged_knots, GridFunction, Tolerances};

/// Samples of delta(x) = f(a x) - b g(x) on the merged, rescaled knot grid
/// clipped to the common domain [0, min(1, 1/a)].
#[derive(Debug, Clone)]
pub struct ScaledDifference {
    pub a: f64,
    pub b: f64,
    /// Right end of the common domain, min(1, 1/a).
    pub m: f64,
    /// Sample points: every kink of the difference is among them.
    pub xs: Vec<f64>,
    pub deltas: Vec<f64>,
}

/// Samples f(a x) - b g(x) on the union of g's knots and f's knots divided
/// by a, so the piecewise-linear difference is linear between samples.
pub fn scaled_difference(
    f: &GridFunction,
    a: f64,
    g: &GridFunction,
    b: f64,
) -> Result<ScaledDifference> {
    for s in [a, b] {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidScale(s));
        }
    }
    let m = 1.0f64.min(1.0 / a);
    let xs = merged_scaled_knots(f, a, g, m);
    let deltas = xs
        .iter()
        .map(|&x| f.eval_clamped(a * x) - b * g.eval_clamped(x))
        .collect();
    Ok(ScaledDifference { a, b, m, xs, deltas })
}

fn merged_scaled_knots(f: &GridFunction, a: f64, g: &GridFunction, m: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = Vec::with_capacity(f.knots().len() + g.knots().len() + 1);
    for &x in g.knots() {
        if x < m {
            pts.push(x);
        }
    }
    for &x in f.knots() {
        let y = x / a;
        if y < m {
            pts.push(y);
        }
    }
    pts.push(m);
    pts.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup();
    pts
}

/// Sign switches of a sampled difference: count, realizing intervals and the
/// zero band used.
#[derive(Debug, Clone)]
pub struct SwitchReport {
    pub count: usize,
    /// Closed intervals, disjoint and ascending, strictly inside the open
    /// domain. Transversal crossings between adjacent samples appear as
    /// degenerate intervals at the interpolated root.
    pub intervals: Vec<(f64, f64)>,
    pub eps_sign: f64,
}

/// Scans the samples for sign switches. Values within `eps_sign` of zero are
/// neutral; a switch is a maximal neutral run (possibly empty) whose nearest
/// off-band neighbours on both sides carry opposite signs. Runs touching the
/// domain boundary never count.
pub fn sign_switches(delta: &ScaledDifference, eps_sign: f64) -> SwitchReport {
    let xs = &delta.xs;
    let ds = &delta.deltas;
    let mut intervals = Vec::new();
    let mut last_sign = 0i8;
    let mut zero_start: Option<usize> = None;
    for k in 0..ds.len() {
        let s: i8 = if ds[k] > eps_sign {
            1
        } else if ds[k] < -eps_sign {
            -1
        } else {
            0
        };
        if s == 0 {
            if zero_start.is_none() {
                zero_start = Some(k);
            }
            continue;
        }
        if let Some(z) = zero_start.take() {
            if last_sign != 0 && s == -last_sign {
                intervals.push((xs[z], xs[k - 1]));
            }
        } else if last_sign != 0 && s == -last_sign {
            let (dl, dr) = (ds[k - 1], ds[k]);
            let t = dl / (dl - dr);
            let root = xs[k - 1] + t * (xs[k] - xs[k - 1]);
            intervals.push((root, root));
        }
        last_sign = s;
    }
    SwitchReport {
        count: intervals.len(),
        intervals,
        eps_sign,
    }
}

/// Switch count of one sampled scale pair.
#[derive(Debug, Clone, Copy)]
pub struct ScanEntry {
    pub a: f64,
    pub b: f64,
    pub count: usize,
    /// Both endpoint samples lie outside the neutral band; the parity
    /// arguments about endpoint signs apply only to such pairs.
    pub endpoints_signed: bool,
}

/// Switch counts over a whole scale grid.
#[derive(Debug, Clone)]
pub struct ScaleScan {
    pub entries: Vec<ScanEntry>,
    pub max_count: usize,
    /// First grid pair attaining the maximum.
    pub argmax: (f64, f64),
}

impl ScaleScan {
    /// Line-oriented audit format: header plus one `a,b,switches` row per
    /// sampled pair.
    pub fn audit_csv(&self) -> String {
        let mut out = String::from("a,b,switches\n");
        for e in &self.entries {
            out.push_str(&format!("{:.16e},{:.16e},{}\n", e.a, e.b, e.count));
        }
        out
    }
}

/// Counts switches for every (a,b) in `tol.scale_grid`. Entries keep the
/// grid order; work fans out over distinct `a` values, capped by the
/// STRIBOLA_THREADS environment variable (0 means sequential).
pub fn scan_scale_grid(f: &GridFunction, g: &GridFunction, tol: &Tolerances) -> Result<ScaleScan> {
    tol.validate()?;
    // group pairs by horizontal scale so the merged sample grid and both
    // sample vectors are built once per distinct a
    let mut groups: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    for (idx, &(a, b)) in tol.scale_grid.iter().enumerate() {
        match groups.last_mut() {
            Some((ga, bs)) if *ga == a => bs.push((idx, b)),
            _ => match groups.iter_mut().find(|(ga, _)| *ga == a) {
                Some((_, bs)) => bs.push((idx, b)),
                None => groups.push((a, vec![(idx, b)])),
            },
        }
    }
    let eps = tol.eps_sign;
    let threads = effective_threads(groups.len());
    let mut slots: Vec<Option<ScanEntry>> = vec![None; tol.scale_grid.len()];
    if threads <= 1 {
        for (a, bs) in &groups {
            for (idx, entry) in scan_one_group(f, g, *a, bs, eps) {
                slots[idx] = Some(entry);
            }
        }
    } else {
        let chunk = groups.len().div_ceil(threads);
        let results: Vec<Vec<(usize, ScanEntry)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = groups
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        for (a, bs) in part {
                            out.extend(scan_one_group(f, g, *a, bs, eps));
                        }
                        out
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for part in results {
            for (idx, entry) in part {
                slots[idx] = Some(entry);
            }
        }
    }
    let entries: Vec<ScanEntry> = slots.into_iter().map(|e| e.unwrap()).collect();
    let mut max_count = 0usize;
    let mut argmax = (entries[0].a, entries[0].b);
    for e in &entries {
        if e.count > max_count {
            max_count = e.count;
            argmax = (e.a, e.b);
        }
    }
    Ok(ScaleScan {
        entries,
        max_count,
        argmax,
    })
}

fn scan_one_group(
    f: &GridFunction,
    g: &GridFunction,
    a: f64,
    bs: &[(usize, f64)],
    eps: f64,
) -> Vec<(usize, ScanEntry)> {
    let m = 1.0f64.min(1.0 / a);
    let xs = merged_scaled_knots(f, a, g, m);
    let axs: Vec<f64> = xs.iter().map(|&x| (a * x).clamp(0.0, 1.0)).collect();
    let fs = f.eval_sorted(&axs);
    let gs = g.eval_sorted(&xs);
    bs.iter()
        .map(|&(idx, b)| {
            let (count, endpoints_signed) = count_switches_inline(&fs, &gs, b, eps);
            (
                idx,
                ScanEntry {
                    a,
                    b,
                    count,
                    endpoints_signed,
                },
            )
        })
        .collect()
}

fn count_switches_inline(fs: &[f64], gs: &[f64], b: f64, eps: f64) -> (usize, bool) {
    let n = fs.len();
    let mut count = 0usize;
    let mut last_sign = 0i8;
    let mut first_signed = false;
    let mut last_signed = false;
    for k in 0..n {
        let d = fs[k] - b * gs[k];
        let s: i8 = if d > eps {
            1
        } else if d < -eps {
            -1
        } else {
            0
        };
        if k == 0 {
            first_signed = s != 0;
        }
        if k == n - 1 {
            last_signed = s != 0;
        }
        if s == 0 {
            continue;
        }
        if last_sign != 0 && s == -last_sign {
            count += 1;
        }
        last_sign = s;
    }
    (count, first_signed && last_signed)
}

fn effective_threads(work_items: usize) -> usize {
    let avail = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let t = match std::env::var("STRIBOLA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(0) => 1,
        Some(cap) => cap.min(avail),
        None => avail,
    };
    t.clamp(1, work_items.max(1))
}

/// Certified lower bound for the crossing number: the maximal switch count
/// over the sampled scale grid, with the first pair attaining it. Never an
/// upper bound.
pub fn crossing_number_lb(
    f: &GridFunction,
    g: &GridFunction,
    tol: &Tolerances,
) -> Result<(usize, (f64, f64))> {
    require_class_d(f, tol)?;
    require_class_d(g, tol)?;
    let scan = scan_scale_grid(f, g, tol)?;
    Ok((scan.max_count, scan.argmax))
}

fn require_class_d(f: &GridFunction, tol: &Tolerances) -> Result<()> {
    if !f.classify(tol).in_d {
        return Err(Error::ClassError {
            class: "D",
            reason: "operand must be continuous and strictly decreasing".into(),
        });
    }
    Ok(())
}

/// Witness for a refuted domination claim.
#[derive(Debug, Clone, Copy)]
pub enum Refutation {
    /// g exceeds f by more than the sign band at a merged knot.
    OrderViolation { x: f64, excess: f64 },
    /// Some scale pair produced at least three switches.
    TooManySwitches { a: f64, b: f64, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// g <= f holds and some sampled pair attains exactly two switches.
    Consistent,
    /// The claim is impossible: order fails or three switches were found.
    Refuted,
    /// g <= f holds but no sampled pair reaches two switches.
    Inconclusive,
}

/// Outcome of a domination test, with the refutation witness when one exists.
#[derive(Debug, Clone)]
pub struct DominationVerdict {
    pub verdict: Verdict,
    pub max_switches: usize,
    pub refutation: Option<Refutation>,
}

impl DominationVerdict {
    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

/// Tests the claim "f dominates g": g <= f everywhere and the crossing
/// number of the pair is exactly two.
pub fn dominates(
    f: &GridFunction,
    g: &GridFunction,
    tol: &Tolerances,
) -> Result<DominationVerdict> {
    require_class_d(f, tol)?;
    require_class_d(g, tol)?;
    // order check on the merged knot set
    let xs = merged_knots(f, g);
    let fv = f.eval_sorted(&xs);
    let gv = g.eval_sorted(&xs);
    let mut worst: Option<(f64, f64)> = None;
    for i in 0..xs.len() {
        let excess = gv[i] - fv[i];
        if excess > tol.eps_sign && worst.is_none_or(|(_, w)| excess > w) {
            worst = Some((xs[i], excess));
        }
    }
    let scan = scan_scale_grid(f, g, tol)?;
    if let Some((x, excess)) = worst {
        return Ok(DominationVerdict {
            verdict: Verdict::Refuted,
            max_switches: scan.max_count,
            refutation: Some(Refutation::OrderViolation { x, excess }),
        });
    }
    if scan.max_count >= 3 {
        let (a, b) = scan.argmax;
        return Ok(DominationVerdict {
            verdict: Verdict::Refuted,
            max_switches: scan.max_count,
            refutation: Some(Refutation::TooManySwitches {
                a,
                b,
                count: scan.max_count,
            }),
        });
    }
    Ok(DominationVerdict {
        verdict: if scan.max_count == 2 {
            Verdict::Consistent
        } else {
            Verdict::Inconclusive
        },
        max_switches: scan.max_count,
        refutation: None,
    })
}
