//! The rhombic box `B_L` of the triangular lattice.
//!
//! Sites are integer pairs `(i, j)` with `0 <= i, j < L`. The six lattice
//! neighbours of `(i, j)` are reached by the offsets in [`DIRECTIONS`], which
//! are listed counter-clockwise in the equilateral embedding
//! `(i, j) -> i * (1, 0) + j * (1/2, sqrt(3)/2)`.
//!
//! Boundary sides are labelled clockwise from the south-west corner:
//!
//! | side | sites                     | vote |
//! |------|---------------------------|------|
//! | 1    | `i = 0`,   `j <= L - 2`   | 0    |
//! | 2    | `j = L-1`, `i <= L - 2`   | 0    |
//! | 3    | `i = L-1`, `j >= 1`       | 1    |
//! | 4    | `j = 0`,   `i >= 1`       | 1    |
//!
//! so the two places where the 0-arc meets the 1-arc are the south-west
//! corner `(0, 0)` and the north-east corner `(L-1, L-1)`.

use crate::error::{Error, Result};

/// Lattice offsets in counter-clockwise order, starting east.
pub const DIRECTIONS: [(isize, isize); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub i: usize,
    pub j: usize,
}

impl Site {
    pub const fn new(i: usize, j: usize) -> Self {
        Site { i, j }
    }

    /// Equilateral embedding; adjacent sites are at distance exactly 1.
    pub fn embed(self) -> PlanarPoint {
        embed_coords(self.i as f64, self.j as f64)
    }

    /// Neighbour in direction `dir` (index into [`DIRECTIONS`]), if it has
    /// nonnegative coordinates.
    pub fn offset(self, dir: usize) -> Option<Site> {
        let (di, dj) = DIRECTIONS[dir];
        let i = self.i.checked_add_signed(di)?;
        let j = self.j.checked_add_signed(dj)?;
        Some(Site { i, j })
    }
}

impl std::fmt::Display for Site {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn distance(self, other: PlanarPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Embeds fractional lattice coordinates (used for triangle centroids).
pub fn embed_coords(i: f64, j: f64) -> PlanarPoint {
    PlanarPoint {
        x: i + 0.5 * j,
        y: SQRT3_2 * j,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    West,
    North,
    East,
    South,
}

impl Side {
    pub fn vote(self) -> u8 {
        match self {
            Side::West | Side::North => 0,
            Side::East | Side::South => 1,
        }
    }

    /// 1-based label as used for `∂1 .. ∂4`.
    pub fn label(self) -> u8 {
        match self {
            Side::West => 1,
            Side::North => 2,
            Side::East => 3,
            Side::South => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteKind {
    Interior,
    Boundary { side: Side, vote: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxGeometry {
    side: usize,
}

impl BoxGeometry {
    pub fn new(side: usize) -> Result<Self> {
        if side < 3 {
            return Err(Error::InvalidSize(side));
        }
        Ok(BoxGeometry { side })
    }

    /// Side length `L` in vertices.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn num_sites(&self) -> usize {
        self.side * self.side
    }

    pub fn num_interior(&self) -> usize {
        (self.side - 2) * (self.side - 2)
    }

    pub fn contains(&self, s: Site) -> bool {
        s.i < self.side && s.j < self.side
    }

    fn check(&self, s: Site) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutsideBox {
                site: s,
                side: self.side,
            })
        }
    }

    /// Row-major index, rows running along `j`.
    #[inline]
    pub fn index(&self, s: Site) -> usize {
        s.j * self.side + s.i
    }

    #[inline]
    pub fn site(&self, index: usize) -> Site {
        Site {
            i: index % self.side,
            j: index / self.side,
        }
    }

    #[inline]
    pub fn is_interior(&self, s: Site) -> bool {
        s.i > 0 && s.j > 0 && s.i + 1 < self.side && s.j + 1 < self.side
    }

    pub fn neighbors(&self, s: Site) -> Result<Vec<Site>> {
        self.check(s)?;
        Ok((0..6)
            .filter_map(|d| s.offset(d))
            .filter(|t| self.contains(*t))
            .collect())
    }

    pub fn kind(&self, s: Site) -> Result<SiteKind> {
        self.check(s)?;
        Ok(self.kind_unchecked(s))
    }

    pub(crate) fn kind_unchecked(&self, s: Site) -> SiteKind {
        let last = self.side - 1;
        let side = if s.i == 0 && s.j < last {
            Side::West
        } else if s.j == last && s.i < last {
            Side::North
        } else if s.i == last && s.j >= 1 {
            Side::East
        } else if s.j == 0 && s.i >= 1 {
            Side::South
        } else {
            return SiteKind::Interior;
        };
        SiteKind::Boundary {
            side,
            vote: side.vote(),
        }
    }

    /// Fixed vote of a boundary site, `None` for interior sites.
    pub fn boundary_vote(&self, s: Site) -> Option<u8> {
        match self.kind_unchecked(s) {
            SiteKind::Interior => None,
            SiteKind::Boundary { vote, .. } => Some(vote),
        }
    }

    pub fn side_sites(&self, side: Side) -> Vec<Site> {
        let last = self.side - 1;
        match side {
            Side::West => (0..last).map(|j| Site::new(0, j)).collect(),
            Side::North => (0..last).map(|i| Site::new(i, last)).collect(),
            Side::East => (1..=last).map(|j| Site::new(last, j)).collect(),
            Side::South => (1..=last).map(|i| Site::new(i, 0)).collect(),
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(|k| self.site(k))
    }

    /// Interior sites in row-major order.
    pub fn interior_sites(&self) -> impl Iterator<Item = Site> + '_ {
        let last = self.side - 1;
        (1..last).flat_map(move |j| (1..last).map(move |i| Site::new(i, j)))
    }

    /// Central site; for even `L` the upper-right of the four closest sites.
    pub fn center(&self) -> Site {
        let c = self.side / 2;
        Site::new(c, c)
    }

    /// 180 degree rotation about the box centre; swaps the 0-arc and the 1-arc.
    pub fn rotate(&self, s: Site) -> Site {
        Site::new(self.side - 1 - s.i, self.side - 1 - s.j)
    }

    pub fn sw_corner(&self) -> Site {
        Site::new(0, 0)
    }

    pub fn ne_corner(&self) -> Site {
        Site::new(self.side - 1, self.side - 1)
    }

    /// Box indices offsets for the six directions, matching [`DIRECTIONS`].
    pub(crate) fn index_offsets(&self) -> [isize; 6] {
        let l = self.side as isize;
        DIRECTIONS.map(|(di, dj)| dj * l + di)
    }
}

/// A full 0/1 assignment on `B_L`, boundary included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    geometry: BoxGeometry,
    votes: Vec<u8>,
}

impl Configuration {
    /// Builds a configuration with the fixed boundary votes and interior
    /// votes taken from `interior`.
    pub fn from_fn<F: FnMut(Site) -> u8>(geometry: BoxGeometry, mut interior: F) -> Self {
        let votes = geometry
            .sites()
            .map(|s| match geometry.boundary_vote(s) {
                Some(v) => v,
                None => interior(s) & 1,
            })
            .collect();
        Configuration { geometry, votes }
    }

    /// Wraps raw votes indexed by [`BoxGeometry::index`]. Boundary values are
    /// taken as given, so malformed boundaries can be represented.
    pub fn from_raw(geometry: BoxGeometry, votes: Vec<u8>) -> Result<Self> {
        if votes.len() != geometry.num_sites() {
            return Err(Error::Domain(format!(
                "expected {} votes, got {}",
                geometry.num_sites(),
                votes.len()
            )));
        }
        if votes.iter().any(|v| *v > 1) {
            return Err(Error::Domain("votes must be 0 or 1".into()));
        }
        Ok(Configuration { geometry, votes })
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    #[inline]
    pub fn vote(&self, s: Site) -> u8 {
        self.votes[self.geometry.index(s)]
    }

    pub fn votes(&self) -> &[u8] {
        &self.votes
    }

    /// Checks that every boundary site carries its fixed vote.
    pub fn boundary_is_standard(&self) -> bool {
        self.geometry.sites().all(|s| {
            self.geometry
                .boundary_vote(s)
                .is_none_or(|v| v == self.vote(s))
        })
    }
}

pub fn build_box(side: usize) -> Result<BoxGeometry> {
    BoxGeometry::new(side)
}
