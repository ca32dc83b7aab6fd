//! Statistics of the coalescing-class partition of a sample.

use std::collections::VecDeque;

use crate::engine::{ClassId, SampleOutcome};
use crate::error::{Error, Result};
use crate::geometry::{PlanarPoint, Site};
use crate::interface::{cuts_class, SidePartition};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    /// `|C_L(o)|` for the centre `o`.
    pub class_origin_size: usize,
    /// `|M_L|`.
    pub class_max_size: usize,
    /// Size of the connected piece of `C_L(o)` containing `o`.
    pub conn_origin_size: usize,
    /// Largest connected piece of any class.
    pub conn_max_size: usize,
    pub largest_class_diameter: f64,
    pub cuts_largest: bool,
    pub top_k: Vec<(ClassId, usize)>,
}

/// Class sizes, indexed by class id.
#[derive(Debug, Clone)]
pub struct ClassSizes {
    by_id: Vec<u32>,
}

impl ClassSizes {
    pub fn size_of(&self, class: ClassId) -> Option<usize> {
        match self.by_id.get(class as usize) {
            Some(&n) if n > 0 => Some(n as usize),
            _ => None,
        }
    }

    /// `(class, size)` pairs in increasing class id.
    pub fn iter(&self) -> impl Iterator<Item = (ClassId, usize)> + '_ {
        self.by_id
            .iter()
            .enumerate()
            .filter(|(_, n)| **n > 0)
            .map(|(c, n)| (c as ClassId, *n as usize))
    }

    pub fn num_classes(&self) -> usize {
        self.iter().count()
    }

    pub fn total(&self) -> usize {
        self.by_id.iter().map(|n| *n as usize).sum()
    }
}

pub fn class_sizes(outcome: &SampleOutcome) -> ClassSizes {
    let mut by_id = vec![0u32; outcome.geometry().num_sites()];
    for &c in outcome.class_array() {
        if c != NONE {
            by_id[c as usize] += 1;
        }
    }
    ClassSizes { by_id }
}

/// Largest class; ties go to the smallest class id.
pub fn largest_class(outcome: &SampleOutcome) -> ClassId {
    largest_of(&class_sizes(outcome))
}

fn largest_of(sizes: &ClassSizes) -> ClassId {
    let mut best = (0usize, NONE);
    for (c, n) in sizes.iter() {
        if n > best.0 {
            best = (n, c);
        }
    }
    best.1
}

/// The `k` largest classes, by decreasing size then increasing id.
pub fn top_k(outcome: &SampleOutcome, k: usize) -> Vec<(ClassId, usize)> {
    top_k_of(&class_sizes(outcome), k)
}

fn top_k_of(sizes: &ClassSizes, k: usize) -> Vec<(ClassId, usize)> {
    let mut all: Vec<_> = sizes.iter().collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

pub fn class_sites(outcome: &SampleOutcome, class: ClassId) -> Result<Vec<Site>> {
    let g = outcome.geometry();
    let sites: Vec<Site> = outcome
        .class_array()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == class)
        .map(|(k, _)| g.site(k))
        .collect();
    if sites.is_empty() {
        return Err(Error::UnknownClass(class as usize));
    }
    Ok(sites)
}

/// Lattice-connected pieces of one class, each listed in row-major order,
/// pieces ordered by their first site.
pub fn connected_components(outcome: &SampleOutcome, class: ClassId) -> Result<Vec<Vec<Site>>> {
    let g = *outcome.geometry();
    let sites = class_sites(outcome, class)?;
    let classes = outcome.class_array();
    let mut seen = vec![false; g.num_sites()];
    let mut pieces = Vec::new();
    for start in sites {
        if seen[g.index(start)] {
            continue;
        }
        seen[g.index(start)] = true;
        let mut piece = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for t in (0..6)
                .filter_map(|d| s.offset(d))
                .filter(|t| g.contains(*t))
            {
                let k = g.index(t);
                if !seen[k] && classes[k] == class {
                    seen[k] = true;
                    piece.push(t);
                    queue.push_back(t);
                }
            }
        }
        piece.sort_by_key(|s| g.index(*s));
        pieces.push(piece);
    }
    Ok(pieces)
}

/// Connected pieces of all classes at once.
#[derive(Debug, Clone)]
pub struct ComponentLabels {
    /// Component label per box index (`u32::MAX` on the boundary).
    pub label: Vec<u32>,
    /// Size of each component, indexed by label.
    pub sizes: Vec<usize>,
}

pub fn component_labels(outcome: &SampleOutcome) -> ComponentLabels {
    let g = *outcome.geometry();
    let classes = outcome.class_array();
    let mut label = vec![NONE; g.num_sites()];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in g.interior_sites() {
        let k0 = g.index(s);
        if label[k0] != NONE {
            continue;
        }
        let id = sizes.len() as u32;
        label[k0] = id;
        stack.push(s);
        let mut count = 0;
        while let Some(x) = stack.pop() {
            count += 1;
            let cx = classes[g.index(x)];
            for d in 0..6 {
                let t = x.offset(d).expect("interior neighbour");
                let k = g.index(t);
                if label[k] == NONE && classes[k] == cx {
                    label[k] = id;
                    stack.push(t);
                }
            }
        }
        sizes.push(count);
    }
    ComponentLabels { label, sizes }
}

/// Largest embedded Euclidean distance between two sites of a class.
pub fn class_diameter(outcome: &SampleOutcome, class: ClassId) -> Result<f64> {
    let sites = class_sites(outcome, class)?;
    Ok(point_set_diameter(
        sites.iter().map(|s| s.embed()).collect(),
    ))
}

fn point_set_diameter(mut pts: Vec<PlanarPoint>) -> f64 {
    let hull = convex_hull(&mut pts);
    let mut best: f64 = 0.0;
    for (a, p) in hull.iter().enumerate() {
        for q in &hull[a + 1..] {
            best = best.max(p.distance(*q));
        }
    }
    best
}

// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(pts: &mut [PlanarPoint]) -> Vec<PlanarPoint> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let cross = |o: PlanarPoint, a: PlanarPoint, b: PlanarPoint| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };
    let mut hull: Vec<PlanarPoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &PlanarPoint>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 1e-12
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Fraction of `diameters` at least `c * side` for each `c`.
pub fn diameter_exceedance(diameters: &[f64], side: usize, cs: &[f64]) -> Vec<f64> {
    cs.iter()
        .map(|c| {
            if diameters.is_empty() {
                return 0.0;
            }
            let hits = diameters.iter().filter(|d| **d >= c * side as f64).count();
            hits as f64 / diameters.len() as f64
        })
        .collect()
}

pub fn class_report(
    outcome: &SampleOutcome,
    sides: &SidePartition,
    k: usize,
) -> Result<ClassReport> {
    let g = *outcome.geometry();
    let sizes = class_sizes(outcome);
    let center = g.center();
    let origin_class = outcome.class_of(center).ok_or(Error::NotInterior(center))?;
    let largest = largest_of(&sizes);
    let largest_sites = class_sites(outcome, largest)?;
    let labels = component_labels(outcome);
    let cuts_largest = cuts_class(sides, largest_sites.iter().copied())?;
    Ok(ClassReport {
        class_origin_size: sizes.size_of(origin_class).unwrap_or(0),
        class_max_size: sizes.size_of(largest).unwrap_or(0),
        conn_origin_size: labels.sizes[labels.label[g.index(center)] as usize],
        conn_max_size: labels.sizes.iter().copied().max().unwrap_or(0),
        largest_class_diameter: point_set_diameter(
            largest_sites.iter().map(|s| s.embed()).collect(),
        ),
        cuts_largest,
        top_k: top_k_of(&sizes, k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{sample, ModelParams};
    use crate::geometry::build_box;
    use crate::interface::{side_partition, trace_interface};

    #[test]
    fn l3_has_one_class() {
        let out = sample(build_box(3).unwrap(), ModelParams::VOTER, 1).unwrap();
        let sizes = class_sizes(&out);
        assert_eq!(sizes.iter().collect::<Vec<_>>(), vec![(4, 1)]);
        assert_eq!(largest_class(&out), 4);
        assert_eq!(class_diameter(&out, 4).unwrap(), 0.0);
        assert_eq!(
            connected_components(&out, 4).unwrap(),
            vec![vec![Site::new(1, 1)]]
        );
    }

    #[test]
    fn hatless_models_give_singletons() {
        let g = build_box(9).unwrap();
        let out = sample(g, ModelParams::HARMONIC, 4).unwrap();
        let sizes = class_sizes(&out);
        assert_eq!(sizes.num_classes(), 49);
        assert!(sizes.iter().all(|(_, n)| n == 1));
        // Tie-break: smallest id, which is site (1,1).
        assert_eq!(out.class_site(largest_class(&out)), Site::new(1, 1));
    }

    #[test]
    fn report_bounds_hold() {
        let g = build_box(24).unwrap();
        for seed in 0..10 {
            let out = sample(g, ModelParams::VOTER, seed).unwrap();
            let path = trace_interface(out.configuration()).unwrap();
            let sides = side_partition(out.configuration(), &path).unwrap();
            let r = class_report(&out, &sides, 5).unwrap();
            assert!(r.class_origin_size <= r.class_max_size);
            assert!(r.class_max_size <= g.num_interior());
            assert!(r.conn_origin_size <= r.class_origin_size);
            assert!(r.conn_max_size <= r.class_max_size);
            assert!(r.largest_class_diameter <= (g.side() - 1) as f64 * 3f64.sqrt());
            assert_eq!(r.top_k[0].1, r.class_max_size);
            assert!(r.top_k.windows(2).all(|w| w[0].1 >= w[1].1));
            assert_eq!(class_sizes(&out).total(), g.num_interior());

            // Brute-force diameter of the largest class.
            let big = largest_class(&out);
            let sites = class_sites(&out, big).unwrap();
            let mut brute: f64 = 0.0;
            for a in &sites {
                for b in &sites {
                    brute = brute.max(a.embed().distance(b.embed()));
                }
            }
            assert!((class_diameter(&out, big).unwrap() - brute).abs() < 1e-9);
        }
    }

    #[test]
    fn adjacent_pair_has_unit_diameter() {
        let pts = vec![Site::new(3, 3).embed(), Site::new(3, 4).embed()];
        assert!((point_set_diameter(pts) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_class_is_an_error() {
        let out = sample(build_box(5).unwrap(), ModelParams::VOTER, 2).unwrap();
        assert_eq!(class_sites(&out, 0), Err(Error::UnknownClass(0)));
        assert!(connected_components(&out, 0).is_err());
    }

    #[test]
    fn exceedance_fractions() {
        let d = [1.0, 5.0, 9.0, 10.0];
        assert_eq!(
            diameter_exceedance(&d, 10, &[0.0, 0.5, 0.95]),
            vec![1.0, 0.75, 0.25]
        );
    }
}
