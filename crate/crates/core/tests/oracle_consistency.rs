//! The exact oracles agree with each other.

use voterlab_core::oracle::{
    exact_stationary, expected_class_size_exact, harmonic_measure, joint_vote_cov_exact,
    pair_coalescence_prob, PairChain,
};
use voterlab_core::{build_box, Site};

#[test]
fn stationary_marginals_are_harmonic() {
    for l in 3..=5 {
        let g = build_box(l).unwrap();
        let law = exact_stationary(&g).unwrap();
        let h = harmonic_measure(&g).unwrap();
        for s in g.interior_sites() {
            let m = law.marginal(s).unwrap();
            assert!((m - h.at(s)).abs() < 1e-8, "L={l} {s}: {m} vs {}", h.at(s));
        }
    }
}

#[test]
fn stationary_covariance_matches_pair_chain() {
    for l in [4, 5] {
        let g = build_box(l).unwrap();
        let law = exact_stationary(&g).unwrap();
        let chain = PairChain::solve(&g).unwrap();
        let sites: Vec<_> = g.interior_sites().collect();
        for &x in &sites {
            for &y in &sites {
                let a = law.covariance(x, y).unwrap();
                let b = chain.vote_covariance(x, y).unwrap();
                assert!((a - b).abs() < 1e-8, "L={l} {x} {y}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn covariance_is_positive_at_l5() {
    let g = build_box(5).unwrap();
    let sites: Vec<_> = g.interior_sites().collect();
    for &x in &sites {
        for &y in &sites {
            assert!(joint_vote_cov_exact(&g, x, y).unwrap() > 0.0);
        }
    }
}

#[test]
fn class_size_is_sum_of_meeting_probabilities() {
    let g = build_box(6).unwrap();
    let o = g.center();
    let direct: f64 = g
        .interior_sites()
        .map(|y| pair_coalescence_prob(&g, o, y).unwrap())
        .sum();
    assert!((expected_class_size_exact(&g, o).unwrap() - direct).abs() < 1e-12);
    assert_eq!(
        expected_class_size_exact(&build_box(3).unwrap(), Site::new(1, 1)).unwrap(),
        1.0
    );
}
