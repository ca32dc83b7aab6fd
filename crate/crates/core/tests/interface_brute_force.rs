//! The traced interface against an independent description: the edges
//! joining the 0-cluster of the west/north arcs to the 1-cluster of the
//! east/south arcs.

use std::collections::{HashSet, VecDeque};

use voterlab_core::interface::{side_partition, trace_interface, validate_path};
use voterlab_core::{build_box, BoxGeometry, Configuration, Site};

fn boundary_cluster(cfg: &Configuration, vote: u8) -> HashSet<Site> {
    let g = *cfg.geometry();
    let mut seen: HashSet<Site> = g
        .sites()
        .filter(|s| g.boundary_vote(*s) == Some(vote))
        .collect();
    let mut queue: VecDeque<Site> = seen.iter().copied().collect();
    while let Some(s) = queue.pop_front() {
        for t in g.neighbors(s).unwrap() {
            if cfg.vote(t) == vote && seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

fn expected_edges(cfg: &Configuration) -> HashSet<(Site, Site)> {
    let g = cfg.geometry();
    let zeros = boundary_cluster(cfg, 0);
    let ones = boundary_cluster(cfg, 1);
    let mut out = HashSet::new();
    for a in &zeros {
        for b in g.neighbors(*a).unwrap() {
            if ones.contains(&b) {
                out.insert((*a, b));
            }
        }
    }
    out
}

fn check_all(g: BoxGeometry) {
    let interior: Vec<Site> = g.interior_sites().collect();
    for mask in 0u32..(1 << interior.len()) {
        let cfg = Configuration::from_fn(g, |s| {
            let k = interior.iter().position(|t| *t == s).unwrap();
            (mask >> k & 1) as u8
        });
        let path = trace_interface(&cfg).unwrap();
        validate_path(&cfg, &path).unwrap();
        let sides = side_partition(&cfg, &path).unwrap();
        let traced: HashSet<(Site, Site)> =
            path.dual_edges.iter().map(|e| (e.left, e.right)).collect();
        assert_eq!(traced.len(), path.len());
        assert_eq!(traced, expected_edges(&cfg), "mask {mask:b}");
        // Every 0-site of the boundary cluster is on the left.
        for s in boundary_cluster(&cfg, 0) {
            assert!(sides.is_left(s));
        }
        for s in boundary_cluster(&cfg, 1) {
            assert!(sides.is_right(s));
        }
    }
}

#[test]
fn every_l4_configuration() {
    check_all(build_box(4).unwrap());
}

#[test]
fn every_l5_configuration() {
    check_all(build_box(5).unwrap());
}

#[test]
fn every_l6_configuration() {
    check_all(build_box(6).unwrap());
}

#[test]
fn uniform_l4_paths_have_eleven_edges() {
    let g = build_box(4).unwrap();
    for v in [0, 1] {
        let cfg = Configuration::from_fn(g, |_| v);
        assert_eq!(trace_interface(&cfg).unwrap().len(), 11);
    }
}
