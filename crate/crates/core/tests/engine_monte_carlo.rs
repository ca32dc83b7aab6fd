//! Sampler frequencies against exact values.

use std::sync::Arc;

use voterlab_core::classes::class_sizes;
use voterlab_core::oracle::{harmonic_measure, pair_coalescence_prob};
use voterlab_core::{
    build_box, sample, sample_with, HatlessWalks, ModelParams, SamplerOptions, Site,
};

// Five standard errors of a Bernoulli mean.
fn tol(p: f64, n: usize) -> f64 {
    5.0 * (p * (1.0 - p) / n as f64).sqrt() + 1e-9
}

#[test]
fn marginals_follow_harmonic_measure() {
    let g = build_box(7).unwrap();
    let h = harmonic_measure(&g).unwrap();
    let n = 20_000;
    for params in [ModelParams::VOTER, ModelParams::HARMONIC] {
        let mut ones = vec![0usize; g.num_sites()];
        for seed in 0..n as u64 {
            let out = sample(g, params, seed).unwrap();
            for s in g.interior_sites() {
                ones[g.index(s)] += out.vote(s) as usize;
            }
        }
        for s in g.interior_sites() {
            let freq = ones[g.index(s)] as f64 / n as f64;
            assert!(
                (freq - h.at(s)).abs() < tol(h.at(s), n),
                "{params:?} {s}: {freq} vs {}",
                h.at(s)
            );
        }
    }
}

#[test]
fn noisy_boundary_marginals_are_one_half() {
    let g = build_box(6).unwrap();
    let n = 20_000;
    for params in [ModelParams::COW, ModelParams::PERCOLATION] {
        let mut ones = 0usize;
        for seed in 0..n as u64 {
            ones += sample(g, params, seed).unwrap().vote(Site::new(1, 3)) as usize;
        }
        let freq = ones as f64 / n as f64;
        assert!((freq - 0.5).abs() < tol(0.5, n), "{params:?}: {freq}");
    }
}

#[test]
fn shared_class_frequency_matches_pair_chain() {
    let g = build_box(5).unwrap();
    let n = 40_000;
    let pairs = [
        (Site::new(2, 2), Site::new(2, 3)),
        (Site::new(1, 1), Site::new(3, 3)),
        (Site::new(1, 3), Site::new(3, 1)),
    ];
    let mut hits = [0usize; 3];
    for seed in 0..n as u64 {
        let out = sample(g, ModelParams::VOTER, seed).unwrap();
        for (k, (x, y)) in pairs.iter().enumerate() {
            hits[k] += (out.class_of(*x) == out.class_of(*y)) as usize;
        }
    }
    for (k, (x, y)) in pairs.iter().enumerate() {
        let exact = pair_coalescence_prob(&g, *x, *y).unwrap();
        let freq = hits[k] as f64 / n as f64;
        assert!(
            (freq - exact).abs() < tol(exact, n),
            "{x} {y}: {freq} vs {exact}"
        );
    }
}

#[test]
fn resolved_and_walked_hatless_votes_agree() {
    let g = build_box(6).unwrap();
    let field = Arc::new(harmonic_measure(&g).unwrap());
    let n = 20_000;
    let params = ModelParams::new(0.3, 0.6).unwrap();
    let site = Site::new(2, 3);
    let mut ones = [0usize; 2];
    let mut sizes = [0usize; 2];
    for seed in 0..n as u64 {
        let walked = sample(g, params, seed).unwrap();
        let options = SamplerOptions {
            hatless: HatlessWalks::Resolve(field.clone()),
            ..SamplerOptions::default()
        };
        let resolved = sample_with(g, params, seed, options).unwrap();
        for (k, out) in [walked, resolved].iter().enumerate() {
            ones[k] += out.vote(site) as usize;
            sizes[k] += class_sizes(out)
                .size_of(out.class_of(site).unwrap())
                .unwrap();
        }
    }
    let f = |c: usize| c as f64 / n as f64;
    assert!(
        (f(ones[0]) - f(ones[1])).abs() < 2.0 * tol(0.5, n),
        "{ones:?}"
    );
    // Class sizes are small integers; compare means loosely.
    assert!((f(sizes[0]) - f(sizes[1])).abs() < 0.05, "{sizes:?}");
}

#[test]
fn same_seed_same_sample() {
    let g = build_box(20).unwrap();
    for params in [
        ModelParams::VOTER,
        ModelParams::COW,
        ModelParams::HARMONIC,
        ModelParams::PERCOLATION,
    ] {
        let a = sample(g, params, 99).unwrap();
        let b = sample(g, params, 99).unwrap();
        assert_eq!(a.configuration(), b.configuration());
        assert_eq!(a.class_array(), b.class_array());
        assert_eq!(a.events(), b.events());
    }
}
