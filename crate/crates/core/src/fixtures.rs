//! Fixed seed functions and fixture families for the verification suites.
//!
//! Everything here is deterministic: the seeds are named closed forms and the
//! "random" convex fixtures come from a seeded xorshift generator, so suite
//! runs are reproducible byte for byte.

use crate::grid::GridFunction;

/// Named starting functions for the solver and the convergence suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedKind {
    /// Constant 1, the canonical seed.
    One,
    /// The line 1 - x.
    Linear,
    /// 1 on [0, 1/2), 0 from 1/2 on (a one-segment drop in the grid model).
    Step,
    /// (1 - x)^4, convex with small area and stride.
    Quartic,
    /// (1 + cos(pi x)) / 2, concave then convex.
    SigmoidLike,
}

impl SeedKind {
    pub const ALL: [SeedKind; 5] = [
        SeedKind::One,
        SeedKind::Linear,
        SeedKind::Step,
        SeedKind::Quartic,
        SeedKind::SigmoidLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeedKind::One => "one",
            SeedKind::Linear => "linear",
            SeedKind::Step => "step",
            SeedKind::Quartic => "quartic",
            SeedKind::SigmoidLike => "sigmoid-like",
        }
    }

    pub fn parse(s: &str) -> Option<SeedKind> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Samples the named seed on the uniform `n`-segment grid.
pub fn seed(kind: SeedKind, n: usize) -> GridFunction {
    let f: fn(f64) -> f64 = match kind {
        SeedKind::One => |_| 1.0,
        SeedKind::Linear => |x| 1.0 - x,
        SeedKind::Step => |x| if x < 0.5 { 1.0 } else { 0.0 },
        SeedKind::Quartic => |x| (1.0 - x).powi(4),
        SeedKind::SigmoidLike => |x| 0.5 * (1.0 + (std::f64::consts::PI * x).cos()),
    };
    GridFunction::from_fn(n, f).expect("seed functions are valid grid functions")
}

/// Convex, continuous, decreasing fixtures with f(0) = 1 and f(1) = 0,
/// sampled on the uniform `n`-segment grid. At least 20 distinct shapes,
/// from nearly linear to strongly curved, including edge-steep and
/// piecewise-linear members.
pub fn convex_c_fixtures(n: usize) -> Vec<(String, GridFunction)> {
    let mut out: Vec<(String, GridFunction)> = Vec::new();
    let mut push = |name: String, f: &dyn Fn(f64) -> f64| {
        let g = GridFunction::from_fn(n, f).expect("fixture must be a valid grid function");
        out.push((name, g));
    };
    for p in [1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0] {
        push(format!("power_{p}"), &|x: f64| (1.0 - x).powf(p));
    }
    for q in [0.5, 0.7, 0.9] {
        push(format!("root_{q}"), &|x: f64| 1.0 - x.powf(q));
    }
    push("circle".into(), &|x: f64| {
        1.0 - (1.0 - (1.0 - x) * (1.0 - x)).max(0.0).sqrt()
    });
    for c in [1.0, 2.0, 4.0] {
        push(format!("exp_{c}"), &|x: f64| {
            ((-c * x).exp() - (-c).exp()) / (1.0 - (-c).exp())
        });
    }
    for c in [1.0, 4.0] {
        push(format!("hyperbola_{c}"), &|x: f64| {
            let tail = 1.0 / (1.0 + c);
            (1.0 / (1.0 + c * x) - tail) / (1.0 - tail)
        });
    }
    for c in [1.2, 1.5, 1.8] {
        push(format!("parabola_{c}"), &|x: f64| {
            1.0 - c * x + (c - 1.0) * x * x
        });
    }
    push("kink_steep".into(), &|x: f64| (1.0 - 2.0 * x).max((1.0 - x) / 2.0));
    push("kink_steeper".into(), &|x: f64| {
        (1.0 - 2.5 * x).max((1.0 - x) / 3.0)
    });
    push("hinge_mix_near".into(), &|x: f64| {
        0.5 * (1.0 - x / 0.5).max(0.0) + 0.5 * (1.0 - x)
    });
    push("hinge_mix_far".into(), &|x: f64| {
        0.3 * (1.0 - x / 0.75).max(0.0) + 0.7 * (1.0 - x)
    });
    out
}

/// Decreasing fixtures with f(0) = 1 used by the absorption check: the five
/// seeds plus non-convex and plateau profiles.
pub fn e_fixtures(n: usize) -> Vec<(String, GridFunction)> {
    let mut out: Vec<(String, GridFunction)> = SeedKind::ALL
        .into_iter()
        .map(|k| (k.name().to_string(), seed(k, n)))
        .collect();
    let plateau = GridFunction::from_fn(n, |x| {
        if x < 0.25 {
            1.0 - 2.0 * x
        } else if x < 0.6 {
            0.5
        } else {
            0.5 * (1.0 - x) / 0.4
        }
    })
    .expect("plateau fixture");
    out.push(("plateau".into(), plateau));
    let steep = GridFunction::from_fn(n, |x| 1.0 - x.powf(0.6)).expect("steep fixture");
    out.push(("root_0.6".into(), steep));
    out
}

/// Small deterministic generator for the randomized fixture checks.
#[derive(Debug, Clone)]
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Random convex member of the complete T-invariant set (area and stride
/// both at least 1/5): either a mixture of hinge functions with kinks in
/// [1/2, 1] or a power curve (1-x)^p with p in [1, 4].
pub fn random_k_fixture(rng: &mut XorShift, n: usize) -> GridFunction {
    if rng.next_f64() < 0.5 {
        let parts = 2 + (rng.next_u64() % 3) as usize;
        let mut ts = Vec::with_capacity(parts);
        let mut ws = Vec::with_capacity(parts);
        let mut total = 0.0;
        for _ in 0..parts {
            ts.push(0.5 + 0.5 * rng.next_f64());
            let w = 0.1 + rng.next_f64();
            ws.push(w);
            total += w;
        }
        for w in ws.iter_mut() {
            *w /= total;
        }
        GridFunction::from_fn(n, |x| {
            ts.iter()
                .zip(&ws)
                .map(|(&t, &w)| w * (1.0 - x / t).max(0.0))
                .sum()
        })
        .expect("hinge mixture")
    } else {
        let p = 1.0 + 3.0 * rng.next_f64();
        GridFunction::from_fn(n, |x| (1.0 - x).powf(p)).expect("power curve")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Tolerances;

    #[test]
    fn seeds_are_in_e() {
        let tol = Tolerances::default();
        for kind in SeedKind::ALL {
            let f = seed(kind, 256);
            let r = f.classify(&tol);
            assert!(r.in_e, "{} must be decreasing with f(0)=1", kind.name());
        }
        assert_eq!(SeedKind::parse("sigmoid-like"), Some(SeedKind::SigmoidLike));
        assert_eq!(SeedKind::parse("unknown"), None);
    }

    #[test]
    fn convex_fixtures_are_convex_c() {
        let tol = Tolerances::default();
        let fixtures = convex_c_fixtures(1024);
        assert!(fixtures.len() >= 20);
        for (name, f) in fixtures {
            let r = f.classify(&tol);
            assert!(r.in_c, "{name} must be in C");
            assert!(r.is_convex, "{name} must be convex");
        }
    }

    #[test]
    fn random_k_fixtures_are_in_k() {
        let tol = Tolerances::default();
        let mut rng = XorShift::new(0x5EED);
        for i in 0..50 {
            let f = random_k_fixture(&mut rng, 512);
            let r = f.classify(&tol);
            assert!(
                r.in_k,
                "sample {i} must land in K (area {}, stride {})",
                r.area, r.stride
            );
        }
    }

    #[test]
    fn sigmoid_is_not_convex() {
        let tol = Tolerances::default();
        let f = seed(SeedKind::SigmoidLike, 512);
        assert!(!f.classify(&tol).is_convex);
    }
}
