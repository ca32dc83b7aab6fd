//! Chordal exploration path on the dual hexagonal lattice.
//!
//! Dual vertices are the unit triangles of `B_L`; the path crosses lattice
//! edges joining a 0-site (kept on the left) and a 1-site (kept on the
//! right). It enters through the edge `{(0,0), (1,0)}` at the south-west
//! corner and leaves through `{(L-2,L-1), (L-1,L-1)}` at the north-east
//! corner.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{embed_coords, BoxGeometry, Configuration, PlanarPoint, Site, DIRECTIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Corners `(i,j), (i+1,j), (i,j+1)`.
    Up,
    /// Corners `(i+1,j), (i,j+1), (i+1,j+1)`.
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DualVertex {
    pub i: usize,
    pub j: usize,
    pub orientation: Orientation,
}

impl DualVertex {
    pub fn corners(&self) -> [Site; 3] {
        let (i, j) = (self.i, self.j);
        match self.orientation {
            Orientation::Up => [Site::new(i, j), Site::new(i + 1, j), Site::new(i, j + 1)],
            Orientation::Down => [
                Site::new(i + 1, j),
                Site::new(i, j + 1),
                Site::new(i + 1, j + 1),
            ],
        }
    }

    pub fn centroid(&self) -> PlanarPoint {
        let shift = match self.orientation {
            Orientation::Up => 1.0 / 3.0,
            Orientation::Down => 2.0 / 3.0,
        };
        embed_coords(self.i as f64 + shift, self.j as f64 + shift)
    }

    fn from_corners(corners: [Site; 3]) -> Self {
        let i = corners.iter().map(|s| s.i).min().unwrap();
        let j = corners.iter().map(|s| s.j).min().unwrap();
        let orientation = if corners.contains(&Site::new(i, j)) {
            Orientation::Up
        } else {
            Orientation::Down
        };
        DualVertex { i, j, orientation }
    }
}

/// A lattice edge crossed by the path, named by its endpoint on the left
/// (vote 0) and on the right (vote 1) of the direction of travel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrossedEdge {
    pub left: Site,
    pub right: Site,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfacePath {
    geometry: BoxGeometry,
    pub dual_edges: Vec<CrossedEdge>,
    /// Triangles between consecutive crossed edges; one fewer than edges.
    pub dual_vertices: Vec<DualVertex>,
}

impl InterfacePath {
    pub fn new(
        geometry: BoxGeometry,
        dual_edges: Vec<CrossedEdge>,
        dual_vertices: Vec<DualVertex>,
    ) -> Self {
        InterfacePath {
            geometry,
            dual_edges,
            dual_vertices,
        }
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    /// `|Z_L|`: number of crossed lattice edges.
    pub fn len(&self) -> usize {
        self.dual_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dual_edges.is_empty()
    }

    /// Triangle centroids along the path.
    pub fn polyline(&self) -> Vec<PlanarPoint> {
        self.dual_vertices.iter().map(|v| v.centroid()).collect()
    }
}

fn direction_of(from: Site, to: Site) -> usize {
    let d = (
        to.i as isize - from.i as isize,
        to.j as isize - from.j as isize,
    );
    DIRECTIONS
        .iter()
        .position(|x| *x == d)
        .expect("sites are adjacent")
}

/// Third corner of the triangle lying to the left of the directed edge
/// `a -> b`, if it is inside the box.
fn apex(g: &BoxGeometry, a: Site, b: Site) -> Option<Site> {
    let d = (direction_of(a, b) + 1) % 6;
    a.offset(d).filter(|c| g.contains(*c))
}

pub fn entry_edge(g: &BoxGeometry) -> CrossedEdge {
    let _ = g;
    CrossedEdge {
        left: Site::new(0, 0),
        right: Site::new(1, 0),
    }
}

pub fn exit_edge(g: &BoxGeometry) -> CrossedEdge {
    let l = g.side();
    CrossedEdge {
        left: Site::new(l - 2, l - 1),
        right: Site::new(l - 1, l - 1),
    }
}

/// Traces the exploration path of a configuration.
pub fn trace_interface(cfg: &Configuration) -> Result<InterfacePath> {
    let g = *cfg.geometry();
    if !cfg.boundary_is_standard() {
        let bad = g
            .sites()
            .find(|s| g.boundary_vote(*s).is_some_and(|v| v != cfg.vote(*s)))
            .expect("some boundary site differs");
        return Err(Error::InvalidBoundary(format!(
            "site {bad} has vote {}",
            cfg.vote(bad)
        )));
    }

    let exit = exit_edge(&g);
    let mut edge = entry_edge(&g);
    let mut edges = vec![edge];
    let mut vertices = Vec::new();
    // Every triangle is visited at most once.
    let max_steps = 2 * (g.side() - 1) * (g.side() - 1);
    loop {
        let Some(c) = apex(&g, edge.left, edge.right) else {
            if edge == exit {
                break;
            }
            return Err(Error::Inconsistent(format!(
                "path left the box through {} / {}",
                edge.left, edge.right
            )));
        };
        if vertices.len() >= max_steps {
            return Err(Error::Inconsistent(
                "exploration path does not terminate".into(),
            ));
        }
        vertices.push(DualVertex::from_corners([edge.left, edge.right, c]));
        edge = if cfg.vote(c) == 0 {
            CrossedEdge {
                left: c,
                right: edge.right,
            }
        } else {
            CrossedEdge {
                left: edge.left,
                right: c,
            }
        };
        edges.push(edge);
    }
    Ok(InterfacePath {
        geometry: g,
        dual_edges: edges,
        dual_vertices: vertices,
    })
}

/// Left/right label of every site of `B_L` relative to the path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidePartition {
    geometry: BoxGeometry,
    left: Vec<bool>,
}

impl SidePartition {
    pub fn is_left(&self, s: Site) -> bool {
        self.left[self.geometry.index(s)]
    }

    pub fn is_right(&self, s: Site) -> bool {
        !self.is_left(s)
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn left_count(&self) -> usize {
        self.left.iter().filter(|b| **b).count()
    }
}

/// Splits `B_L` along the crossed edges of `path`. Exactly two components
/// must result; the one holding the south-west corner is the left side.
pub fn side_partition(cfg: &Configuration, path: &InterfacePath) -> Result<SidePartition> {
    let g = *cfg.geometry();
    if path.geometry != g {
        return Err(Error::Domain(
            "path and configuration differ in size".into(),
        ));
    }
    let mut blocked = vec![0u8; g.num_sites()];
    for e in &path.dual_edges {
        blocked[g.index(e.left)] |= 1 << direction_of(e.left, e.right);
        blocked[g.index(e.right)] |= 1 << direction_of(e.right, e.left);
    }

    const UNSEEN: u8 = 0;
    let mut label = vec![UNSEEN; g.num_sites()];
    let fill = |start: Site, tag: u8, label: &mut Vec<u8>| {
        let mut queue = VecDeque::from([start]);
        label[g.index(start)] = tag;
        while let Some(s) = queue.pop_front() {
            let mask = blocked[g.index(s)];
            for d in 0..6 {
                if mask >> d & 1 == 1 {
                    continue;
                }
                if let Some(t) = s.offset(d).filter(|t| g.contains(*t)) {
                    let k = g.index(t);
                    if label[k] == UNSEEN {
                        label[k] = tag;
                        queue.push_back(t);
                    }
                }
            }
        }
    };
    fill(g.sw_corner(), 1, &mut label);
    if label[g.index(g.ne_corner())] != UNSEEN {
        return Err(Error::Inconsistent(
            "path does not separate the two corners".into(),
        ));
    }
    fill(g.ne_corner(), 2, &mut label);
    if let Some(k) = label.iter().position(|l| *l == UNSEEN) {
        return Err(Error::Inconsistent(format!(
            "site {} is in neither side component",
            g.site(k)
        )));
    }
    Ok(SidePartition {
        geometry: g,
        left: label.into_iter().map(|l| l == 1).collect(),
    })
}

/// Largest distance from a path triangle centroid to the segment joining
/// the embedded south-west and north-east corners.
pub fn max_displacement(path: &InterfacePath) -> f64 {
    let g = path.geometry;
    let a = g.sw_corner().embed();
    let b = g.ne_corner().embed();
    path.dual_vertices
        .iter()
        .map(|v| point_segment_distance(v.centroid(), a, b))
        .fold(0.0, f64::max)
}

pub fn point_segment_distance(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    p.distance(PlanarPoint {
        x: a.x + t * dx,
        y: a.y + t * dy,
    })
}

/// Whether a class has sites on both sides of the path.
pub fn cuts_class<I>(sides: &SidePartition, class_sites: I) -> Result<bool>
where
    I: IntoIterator<Item = Site>,
{
    let (mut left, mut right, mut any) = (false, false, false);
    for s in class_sites {
        if !sides.geometry.is_interior(s) {
            return Err(Error::NotInterior(s));
        }
        any = true;
        if sides.is_left(s) {
            left = true;
        } else {
            right = true;
        }
        if left && right {
            return Ok(true);
        }
    }
    if !any {
        return Err(Error::EmptyClass);
    }
    Ok(false)
}

/// Checks every structural invariant of a traced path against its
/// configuration: endpoints, colouring and orientation of each crossed
/// edge, adjacency of consecutive steps, and simplicity.
pub fn validate_path(cfg: &Configuration, path: &InterfacePath) -> Result<()> {
    let g = *cfg.geometry();
    let fail = |msg: String| Err(Error::Inconsistent(msg));
    let (Some(first), Some(last)) = (path.dual_edges.first(), path.dual_edges.last()) else {
        return fail("empty path".into());
    };
    if *first != entry_edge(&g) || *last != exit_edge(&g) {
        return fail("path does not run from the south-west gap to the north-east gap".into());
    }
    if path.dual_vertices.len() + 1 != path.dual_edges.len() {
        return fail("edge and vertex counts disagree".into());
    }
    let l = g.side();
    if path.len() + 2 < l || path.len() > 2 * (l - 1) * (l - 1) {
        return fail(format!("path length {} out of bounds", path.len()));
    }
    let mut seen_edges = HashSet::new();
    let mut seen_vertices = HashSet::new();
    for e in &path.dual_edges {
        if cfg.vote(e.left) != 0 || cfg.vote(e.right) != 1 {
            return fail(format!("edge {} / {} is not 0 | 1", e.left, e.right));
        }
        let key = if g.index(e.left) < g.index(e.right) {
            (e.left, e.right)
        } else {
            (e.right, e.left)
        };
        if !seen_edges.insert(key) {
            return fail(format!("edge {} / {} crossed twice", e.left, e.right));
        }
    }
    for (k, v) in path.dual_vertices.iter().enumerate() {
        if !seen_vertices.insert(*v) {
            return fail(format!("triangle {v:?} visited twice"));
        }
        let corners = v.corners();
        if corners.iter().any(|c| !g.contains(*c)) {
            return fail(format!("triangle {v:?} leaves the box"));
        }
        let (inn, out) = (path.dual_edges[k], path.dual_edges[k + 1]);
        for e in [inn, out] {
            if !corners.contains(&e.left) || !corners.contains(&e.right) {
                return fail(format!(
                    "triangle {v:?} does not contain edge {} / {}",
                    e.left, e.right
                ));
            }
        }
        // Entering: the triangle lies to the left of left -> right.
        // Leaving: it lies to the right of left -> right.
        let orient = |a: Site, b: Site, c: Site| {
            let (pa, pb, pc) = (a.embed(), b.embed(), c.embed());
            (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x)
        };
        let third = |e: CrossedEdge| {
            *corners
                .iter()
                .find(|c| **c != e.left && **c != e.right)
                .unwrap()
        };
        if orient(inn.left, inn.right, third(inn)) <= 0.0
            || orient(out.left, out.right, third(out)) >= 0.0
        {
            return fail(format!("wrong orientation at triangle {v:?}"));
        }
    }
    Ok(())
}
