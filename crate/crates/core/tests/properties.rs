//! Property tests over randomly generated monotone grid functions.

use proptest::prelude::*;
use stribola::crossing;
use stribola::{ops, GridFunction, Tolerances};

prop_compose! {
    /// Random decreasing grid function; `top` forces f(0) = 1 so the result
    /// lands in the solver's admissible class whenever its area is positive.
    fn arb_grid(top: bool)(
        interior in prop::collection::vec(0.0001f64..0.9999, 0..30),
        raw_vals in prop::collection::vec(0.0f64..=1.0, 32),
    ) -> GridFunction {
        let mut interior = interior;
        interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
        interior.dedup();
        let mut knots = vec![0.0];
        knots.extend(interior);
        knots.push(1.0);
        let m = knots.len();
        let mut vals: Vec<f64> = raw_vals.into_iter().take(m).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if top {
            vals[0] = 1.0;
        }
        GridFunction::new(knots, vals).expect("strategy builds valid grids")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn csv_round_trips_exactly(f in arb_grid(false)) {
        let back = GridFunction::from_csv(&f.to_csv()).unwrap();
        prop_assert_eq!(f, back);
    }

    #[test]
    fn evaluation_is_monotone(f in arb_grid(false)) {
        let mut prev = f64::INFINITY;
        for k in 0..=257 {
            let v = f.eval(k as f64 / 257.0).unwrap();
            prop_assert!(v <= prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn one_metric_never_exceeds_sup_metric(f in arb_grid(false), g in arb_grid(false)) {
        prop_assert!(f.d_1(&g) <= f.d_inf(&g) + 1e-15);
    }

    #[test]
    fn uniform_resampling_is_idempotent(f in arb_grid(false)) {
        let once = f.resample_uniform(64).unwrap();
        let twice = once.resample_uniform(64).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn reflection_preserves_area(f in arb_grid(true)) {
        prop_assume!(f.area() > 1e-6);
        let fi = f.pseudo_inverse().unwrap();
        prop_assert!((fi.area() - f.area()).abs() <= 1e-12);
        // and the reflection is again admissible
        prop_assert!(fi.classify(&Tolerances::default()).in_e);
    }

    #[test]
    fn reflection_preserves_order(f in arb_grid(true)) {
        prop_assume!(f.area() > 1e-6);
        // raise every value: the square root dominates the original on [0,1]
        let raised = GridFunction::new(
            f.knots().to_vec(),
            f.values().iter().map(|v| v.sqrt()).collect(),
        ).unwrap();
        let fi = f.pseudo_inverse().unwrap();
        let ri = raised.pseudo_inverse().unwrap();
        for (&y, &v) in fi.knots().iter().zip(fi.values()) {
            prop_assert!(v <= ri.eval(y).unwrap() + 1e-12);
        }
    }

    #[test]
    fn measured_scalars_stay_in_range(f in arb_grid(false)) {
        let s = f.stride();
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((0.0..=1.0).contains(&f.area()));
        let (slope0, slope1) = f.edge_slopes();
        prop_assert!(slope0 <= -1.0 + 1e-12 || slope0 == f64::NEG_INFINITY);
        prop_assert!(slope1 <= 1e-15);
    }

    #[test]
    fn tail_integral_image_is_convex_and_anchored(f in arb_grid(false)) {
        prop_assume!(f.area() > 1e-6);
        let image = ops::op_i(&f).unwrap();
        prop_assert_eq!(image.values()[0], 1.0);
        prop_assert_eq!(*image.values().last().unwrap(), 0.0);
        prop_assert!(image.classify(&Tolerances::default()).is_convex);
    }

    #[test]
    fn step_image_is_sandwiched(f in arb_grid(true)) {
        prop_assume!(f.area() > 1e-6);
        let tf = ops::op_t(&f).unwrap();
        let area = f.area();
        for (&x, &v) in tf.knots().iter().zip(tf.values()) {
            prop_assert!(v <= 1.0 - x + 1e-12);
            prop_assert!(v >= 1.0 - x / area - 1e-12);
        }
    }

    #[test]
    fn self_difference_never_switches(f in arb_grid(true)) {
        prop_assume!(f.area() > 1e-6);
        let d = crossing::scaled_difference(&f, 1.0, &f, 1.0).unwrap();
        prop_assert_eq!(crossing::sign_switches(&d, 1e-7).count, 0);
    }
}
