use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{BoxGeometry, Site};
use crate::linalg::conjugate_gradient;

/// Residual target for the discrete Laplace equation.
pub const FIELD_TOLERANCE: f64 = 1e-10;

/// Probability that a simple random walk from each site first leaves the
/// interior through the 1-arc (sides 3 and 4).
///
/// Stored over the whole box; boundary entries hold the fixed votes.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicField {
    geometry: BoxGeometry,
    values: Vec<f64>,
    residual: f64,
}

impl HarmonicField {
    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    #[inline]
    pub fn at(&self, s: Site) -> f64 {
        self.values[self.geometry.index(s)]
    }

    #[inline]
    pub(crate) fn at_index(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Max-norm residual of the harmonic equations after the solve.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Recomputes `max |h(x) - mean of h over the six neighbours|` over the
    /// interior.
    pub fn harmonicity_defect(&self) -> f64 {
        let g = &self.geometry;
        g.interior_sites()
            .map(|s| {
                let mean: f64 = (0..6)
                    .map(|d| self.at(s.offset(d).expect("interior neighbour")))
                    .sum::<f64>()
                    / 6.0;
                (self.at(s) - mean).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Writes `i,j,value` rows for interior sites.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "i,j,h")?;
        for s in self.geometry.interior_sites() {
            writeln!(out, "{},{},{}", s.i, s.j, self.at(s))?;
        }
        Ok(())
    }
}

/// Solves `h(x) = (1/6) sum_{y ~ x} h(y)` on the interior with the fixed
/// boundary votes as Dirichlet data.
pub fn harmonic_measure(g: &BoxGeometry) -> Result<HarmonicField> {
    let l = g.side();
    let m = l - 2;
    // Unknowns are the interior sites in row-major order: u = (j-1)*m + (i-1).
    let unknown = |s: Site| (s.j - 1) * m + (s.i - 1);

    let mut rhs = vec![0.0; m * m];
    for s in g.interior_sites() {
        let ones = (0..6)
            .filter_map(|d| s.offset(d))
            .filter_map(|t| g.boundary_vote(t))
            .filter(|v| *v == 1)
            .count();
        rhs[unknown(s)] = ones as f64 / 6.0;
    }

    let apply = |v: &[f64], out: &mut [f64]| {
        for jj in 0..m {
            for ii in 0..m {
                let u = jj * m + ii;
                let mut acc = 0.0;
                for (di, dj) in crate::geometry::DIRECTIONS {
                    let ni = ii as isize + di;
                    let nj = jj as isize + dj;
                    if ni >= 0 && nj >= 0 && (ni as usize) < m && (nj as usize) < m {
                        acc += v[nj as usize * m + ni as usize];
                    }
                }
                out[u] = v[u] - acc / 6.0;
            }
        }
    };
    let max_iter = 200 * l + 1000;
    let sol = conjugate_gradient(apply, &rhs, FIELD_TOLERANCE, max_iter)?;

    let mut values = vec![0.0; g.num_sites()];
    for s in g.sites() {
        values[g.index(s)] = match g.boundary_vote(s) {
            Some(v) => v as f64,
            None => sol.x[unknown(s)],
        };
    }
    let field = HarmonicField {
        geometry: *g,
        values,
        residual: sol.residual,
    };
    if field
        .values
        .iter()
        .any(|h| !(-1e-12..=1.0 + 1e-12).contains(h))
    {
        return Err(Error::Inconsistent("harmonic field left [0, 1]".into()));
    }
    Ok(field)
}
