use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{BoxGeometry, Site};

/// Largest interior size accepted by default (`2^12` states).
pub const DEFAULT_STATIONARY_CAP: usize = 12;

/// Exact invariant law of the voter chain on the interior.
///
/// Configurations are bitmasks over the interior sites in row-major order:
/// bit `k` is the vote of `sites()[k]`.
#[derive(Debug, Clone)]
pub struct ExactStationary {
    geometry: BoxGeometry,
    sites: Vec<Site>,
    probs: Vec<f64>,
}

impl ExactStationary {
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn prob(&self, mask: usize) -> f64 {
        self.probs[mask]
    }

    fn bit(&self, s: Site) -> Result<usize> {
        self.sites
            .iter()
            .position(|t| *t == s)
            .ok_or(Error::NotInterior(s))
    }

    /// `P(V(s) = 1)`.
    pub fn marginal(&self, s: Site) -> Result<f64> {
        let b = self.bit(s)?;
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask >> b & 1 == 1)
            .map(|(_, p)| p)
            .sum())
    }

    pub fn covariance(&self, x: Site, y: Site) -> Result<f64> {
        let (bx, by) = (self.bit(x)?, self.bit(y)?);
        let joint: f64 = self
            .probs
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask >> bx & 1 == 1 && mask >> by & 1 == 1)
            .map(|(_, p)| p)
            .sum();
        Ok(joint - self.marginal(x)? * self.marginal(y)?)
    }

    /// Max-norm of `pi Q`.
    pub fn balance_residual(&self) -> f64 {
        let rates = flip_rates(&self.geometry, &self.sites);
        let states = self.probs.len();
        let mut flow = vec![0.0; states];
        for mask in 0..states {
            for (k, rate) in rates[mask].iter().enumerate() {
                let to = mask ^ (1 << k);
                flow[mask] -= self.probs[mask] * rate;
                flow[to] += self.probs[mask] * rate;
            }
        }
        flow.iter().fold(0.0, |m, f| m.max(f.abs()))
    }
}

/// `rates[mask][k]`: rate at which site `k` flips in configuration `mask`,
/// i.e. the fraction of its six neighbours holding the opposite vote.
fn flip_rates(g: &BoxGeometry, sites: &[Site]) -> Vec<Vec<f64>> {
    let n = sites.len();
    let bit_of = |s: Site| sites.iter().position(|t| *t == s);
    let neigh: Vec<Vec<(Option<usize>, u8)>> = sites
        .iter()
        .map(|s| {
            (0..6)
                .map(|d| {
                    let t = s.offset(d).expect("interior neighbour");
                    (bit_of(t), g.boundary_vote(t).unwrap_or(0))
                })
                .collect()
        })
        .collect();
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|k| {
                    let own = (mask >> k & 1) as u8;
                    let opposite = neigh[k]
                        .iter()
                        .filter(|(bit, fixed)| {
                            let v = match bit {
                                Some(b) => (mask >> b & 1) as u8,
                                None => *fixed,
                            };
                            v != own
                        })
                        .count();
                    opposite as f64 / 6.0
                })
                .collect()
        })
        .collect()
}

pub fn exact_stationary(g: &BoxGeometry) -> Result<ExactStationary> {
    exact_stationary_with_cap(g, DEFAULT_STATIONARY_CAP)
}

pub fn exact_stationary_with_cap(g: &BoxGeometry, cap: usize) -> Result<ExactStationary> {
    let n = g.num_interior();
    if n > cap {
        return Err(Error::SizeCap { size: n, cap });
    }
    let sites: Vec<Site> = g.interior_sites().collect();
    let rates = flip_rates(g, &sites);
    let states = 1usize << n;

    // Rows of Q^T pi = 0, with the last row replaced by normalisation.
    let mut a = DMatrix::<f64>::zeros(states, states);
    for (mask, row) in rates.iter().enumerate() {
        for (k, rate) in row.iter().enumerate() {
            let to = mask ^ (1 << k);
            a[(to, mask)] += rate;
            a[(mask, mask)] -= rate;
        }
    }
    for col in 0..states {
        a[(states - 1, col)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(states);
    b[states - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Inconsistent("singular stationary system".into()))?;

    let stationary = ExactStationary {
        geometry: *g,
        sites,
        probs: pi.iter().copied().collect(),
    };
    if stationary.probs.iter().any(|p| *p < -1e-12) {
        return Err(Error::Inconsistent(
            "negative stationary probability".into(),
        ));
    }
    Ok(stationary)
}
