//! Randomized invariants.

use proptest::prelude::*;
use voterlab_core::classes::{class_report, class_sizes};
use voterlab_core::interface::{side_partition, trace_interface, validate_path};
use voterlab_core::stats::{hat_exponent, ols_loglog, tilde_exponent};
use voterlab_core::{build_box, init_system, sample, Configuration, ModelParams, Site};

fn params() -> impl Strategy<Value = ModelParams> {
    prop_oneof![
        Just(ModelParams::VOTER),
        Just(ModelParams::COW),
        Just(ModelParams::HARMONIC),
        Just(ModelParams::PERCOLATION),
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(p, q)| ModelParams::new(p, q).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_unit_length(l in 3usize..40, i in 0usize..40, j in 0usize..40) {
        let g = build_box(l).unwrap();
        let s = Site::new(i % l, j % l);
        let nbrs = g.neighbors(s).unwrap();
        if g.is_interior(s) {
            prop_assert_eq!(nbrs.len(), 6);
        }
        for t in nbrs {
            prop_assert!(g.neighbors(t).unwrap().contains(&s));
            prop_assert!((s.embed().distance(t.embed()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn walker_system_invariants(l in 3usize..12, seed in any::<u64>(), params in params()) {
        let mut sys = init_system(build_box(l).unwrap(), params, seed);
        let mut active = sys.num_active();
        while sys.num_active() > 0 {
            sys.step().unwrap();
            prop_assert!(sys.num_active() <= active);
            active = sys.num_active();
            prop_assert!(sys.occupancy_consistent());
            if params.q == 0.0 {
                let walkers = sys.walkers();
                prop_assert!(walkers.iter().all(|w| w.hatted));
                let mut pos: Vec<Site> = walkers.iter().map(|w| w.position).collect();
                pos.sort();
                pos.dedup();
                prop_assert_eq!(pos.len(), walkers.len());
            }
        }
    }

    #[test]
    fn sample_partition_is_consistent(l in 3usize..20, seed in any::<u64>(), params in params()) {
        let g = build_box(l).unwrap();
        let out = sample(g, params, seed).unwrap();
        prop_assert_eq!(class_sizes(&out).total(), g.num_interior());
        for s in g.interior_sites() {
            let c = out.class_of(s).unwrap();
            // Members of a class share one vote.
            prop_assert_eq!(out.vote(s), out.vote(out.class_site(c)));
        }
        let path = trace_interface(out.configuration()).unwrap();
        validate_path(out.configuration(), &path).unwrap();
        let sides = side_partition(out.configuration(), &path).unwrap();
        let r = class_report(&out, &sides, 3).unwrap();
        prop_assert!(r.class_origin_size <= r.class_max_size);
        prop_assert!(r.conn_origin_size <= r.class_origin_size);
        prop_assert!(r.conn_max_size <= r.class_max_size);
        prop_assert!(path.len() + 2 >= l);
    }

    #[test]
    fn any_configuration_has_a_valid_interface(l in 3usize..24, bits in prop::collection::vec(any::<bool>(), 22 * 22)) {
        let g = build_box(l).unwrap();
        let cfg = Configuration::from_fn(g, |s| bits[(s.j - 1) * 22 + (s.i - 1)] as u8);
        let path = trace_interface(&cfg).unwrap();
        validate_path(&cfg, &path).unwrap();
        let sides = side_partition(&cfg, &path).unwrap();
        prop_assert!(sides.left_count() > 0);
    }

    #[test]
    fn exact_power_laws(beta in 0.1f64..3.0, c in 0.01f64..100.0, l0 in 3usize..50) {
        let ls = [l0, 2 * l0, 4 * l0, 8 * l0];
        let vals: Vec<f64> = ls.iter().map(|&l| c * (l as f64).powf(beta)).collect();
        for (&l, &v) in ls.iter().zip(&vals) {
            let t = tilde_exponent(v, l).unwrap();
            prop_assert!((t - (beta + c.ln() / (l as f64).ln())).abs() < 1e-12);
        }
        for k in 0..3 {
            prop_assert!((hat_exponent(vals[k], vals[k + 1]).unwrap() - beta).abs() < 1e-12);
        }
        let pts: Vec<(f64, f64)> = ls.iter().map(|&l| l as f64).zip(vals.iter().copied()).collect();
        let fit = ols_loglog(&pts).unwrap();
        prop_assert!((fit.slope - beta).abs() < 1e-12);
        prop_assert_eq!(fit.slope_se, 0.0);
    }

    #[test]
    fn hat_and_slope_are_scale_free(vals in prop::collection::vec(1.0f64..1e6, 4), c in 0.01f64..100.0) {
        let ls = [8.0, 16.0, 32.0, 64.0];
        let a: Vec<(f64, f64)> = ls.iter().copied().zip(vals.iter().copied()).collect();
        let b: Vec<(f64, f64)> = a.iter().map(|&(l, v)| (l, c * v)).collect();
        prop_assert!((ols_loglog(&a).unwrap().slope - ols_loglog(&b).unwrap().slope).abs() < 1e-9);
        prop_assert!((hat_exponent(vals[0], vals[1]).unwrap() - hat_exponent(c * vals[0], c * vals[1]).unwrap()).abs() < 1e-12);
        let shift = tilde_exponent(c * vals[0], 8).unwrap() - tilde_exponent(vals[0], 8).unwrap();
        prop_assert!((shift - c.ln() / 8f64.ln()).abs() < 1e-12);
    }
}
