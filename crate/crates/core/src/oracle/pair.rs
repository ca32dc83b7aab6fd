//! Two-walker absorbing chains under the fair-coin scheduler: at every step
//! one of the two walkers, chosen by a fair coin, makes a uniform
//! nearest-neighbour step. All three quantities below solve the same
//! symmetric system `(I - P) f = b` with different right-hand sides.

use crate::error::{Error, Result};
use crate::geometry::{BoxGeometry, Site};
use crate::linalg::conjugate_gradient;

use super::harmonic::{harmonic_measure, HarmonicField};

/// Residual target for the pair-chain solves; tighter than the field
/// tolerance so derived identities hold to 1e-8.
const PAIR_TOLERANCE: f64 = 1e-12;

/// Tolerance for agreement between the two covariance computations.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Largest interior size accepted by default (L = 16).
pub const DEFAULT_PAIR_CAP: usize = 196;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairChainResult {
    /// Probability that the two walks meet before either leaves the interior.
    pub coalesce_prob: f64,
    /// `P(V(x) = 1, V(y) = 1)` under coalescing dynamics.
    pub joint_11: f64,
    /// `P(S_x exits on the 1-arc, S_y exits on the 0-arc, they meet first)`
    /// for independent walks.
    pub indep_cross_term: f64,
}

/// Solutions of the pair chains for every ordered pair of interior sites.
#[derive(Debug, Clone)]
pub struct PairChain {
    geometry: BoxGeometry,
    field: HarmonicField,
    n: usize,
    coalesce: Vec<f64>,
    joint_11: Vec<f64>,
    cross: Vec<f64>,
}

impl PairChain {
    pub fn solve(g: &BoxGeometry) -> Result<Self> {
        Self::solve_with_cap(g, DEFAULT_PAIR_CAP)
    }

    pub fn solve_with_cap(g: &BoxGeometry, cap: usize) -> Result<Self> {
        let n = g.num_interior();
        if n > cap {
            return Err(Error::SizeCap { size: n, cap });
        }
        let field = harmonic_measure(g)?;
        let m = g.side() - 2;
        let sites: Vec<Site> = g.interior_sites().collect();
        let unknown = |s: Site| (s.j - 1) * m + (s.i - 1);

        // Interior neighbours (as unknown indices) and boundary neighbours
        // (as fixed votes) of every interior site.
        let mut inner: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut outer: Vec<Vec<u8>> = vec![Vec::new(); n];
        for s in &sites {
            for d in 0..6 {
                let t = s.offset(d).expect("interior site has six neighbours");
                match g.boundary_vote(t) {
                    Some(v) => outer[unknown(*s)].push(v),
                    None => inner[unknown(*s)].push(unknown(t)),
                }
            }
        }
        let h: Vec<f64> = sites.iter().map(|s| field.at(*s)).collect();

        let apply = |v: &[f64], out: &mut [f64]| {
            for x in 0..n {
                for y in 0..n {
                    let k = x * n + y;
                    if x == y {
                        out[k] = v[k];
                        continue;
                    }
                    let mut acc = 0.0;
                    for &xp in &inner[x] {
                        if xp != y {
                            acc += v[xp * n + y];
                        }
                    }
                    for &yp in &inner[y] {
                        if yp != x {
                            acc += v[x * n + yp];
                        }
                    }
                    out[k] = v[k] - acc / 12.0;
                }
            }
        };

        let mut b_coalesce = vec![0.0; n * n];
        let mut b_joint = vec![0.0; n * n];
        let mut b_cross = vec![0.0; n * n];
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let k = x * n + y;
                let adjacent = inner[x].contains(&y);
                if adjacent {
                    b_coalesce[k] = 2.0 / 12.0;
                    // Merge on y's site (x moved) or on x's site (y moved).
                    b_joint[k] += (h[y] + h[x]) / 12.0;
                    b_cross[k] += (h[y] * (1.0 - h[y]) + h[x] * (1.0 - h[x])) / 12.0;
                }
                // One walker absorbed: its vote is fixed, the other walks alone.
                let x_out: f64 = outer[x].iter().map(|v| *v as f64).sum();
                let y_out: f64 = outer[y].iter().map(|v| *v as f64).sum();
                b_joint[k] += (x_out * h[y] + y_out * h[x]) / 12.0;
            }
        }

        let max_iter = 50 * n + 1000;
        let coalesce = conjugate_gradient(apply, &b_coalesce, PAIR_TOLERANCE, max_iter)?.x;
        let joint_11 = conjugate_gradient(apply, &b_joint, PAIR_TOLERANCE, max_iter)?.x;
        let cross = conjugate_gradient(apply, &b_cross, PAIR_TOLERANCE, max_iter)?.x;

        Ok(PairChain {
            geometry: *g,
            field,
            n,
            coalesce,
            joint_11,
            cross,
        })
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn field(&self) -> &HarmonicField {
        &self.field
    }

    fn key(&self, x: Site, y: Site) -> Result<usize> {
        for s in [x, y] {
            if !self.geometry.contains(s) {
                return Err(Error::OutsideBox {
                    site: s,
                    side: self.geometry.side(),
                });
            }
            if !self.geometry.is_interior(s) {
                return Err(Error::NotInterior(s));
            }
        }
        let m = self.geometry.side() - 2;
        let u = |s: Site| (s.j - 1) * m + (s.i - 1);
        Ok(u(x) * self.n + u(y))
    }

    pub fn result(&self, x: Site, y: Site) -> Result<PairChainResult> {
        let k = self.key(x, y)?;
        if x == y {
            let h = self.field.at(x);
            return Ok(PairChainResult {
                coalesce_prob: 1.0,
                joint_11: h,
                indep_cross_term: h * (1.0 - h),
            });
        }
        Ok(PairChainResult {
            coalesce_prob: self.coalesce[k],
            joint_11: self.joint_11[k],
            indep_cross_term: self.cross[k],
        })
    }

    pub fn coalescence_prob(&self, x: Site, y: Site) -> Result<f64> {
        Ok(self.result(x, y)?.coalesce_prob)
    }

    /// `E|C_L(x)| = 1 + sum over y != x of P(x and y coalesce)`.
    pub fn expected_class_size(&self, x: Site) -> Result<f64> {
        self.key(x, x)?;
        let mut total = 1.0;
        for y in self.geometry.interior_sites() {
            if y != x {
                total += self.coalescence_prob(x, y)?;
            }
        }
        Ok(total)
    }

    /// Covariance of the stationary votes at `x` and `y`, computed from the
    /// coalescing joint law and from the independent-walk cross term; errors
    /// if they disagree.
    pub fn vote_covariance(&self, x: Site, y: Site) -> Result<f64> {
        let r = self.result(x, y)?;
        let via_joint = r.joint_11 - self.field.at(x) * self.field.at(y);
        let via_cross = r.indep_cross_term;
        if (via_joint - via_cross).abs() > IDENTITY_TOLERANCE {
            return Err(Error::Inconsistent(format!(
                "covariance mismatch at {x}, {y}: joint law gives {via_joint}, cross term gives {via_cross}"
            )));
        }
        Ok(via_cross)
    }
}

pub fn pair_coalescence_prob(g: &BoxGeometry, x: Site, y: Site) -> Result<f64> {
    PairChain::solve(g)?.coalescence_prob(x, y)
}

pub fn expected_class_size_exact(g: &BoxGeometry, x: Site) -> Result<f64> {
    PairChain::solve(g)?.expected_class_size(x)
}

pub fn joint_vote_cov_exact(g: &BoxGeometry, x: Site, y: Site) -> Result<f64> {
    PairChain::solve(g)?.vote_covariance(x, y)
}
