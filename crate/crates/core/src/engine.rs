//! Dual sampler: coalescing walks from every interior site, run until each
//! coalescence set has been absorbed at the boundary.
//!
//! Continuous time is never simulated. With independent rate-1 clocks the
//! next walker to move is uniform among the active ones, and only the order
//! of jumps decides coalescence versus absorption.
//!
//! Random draws per event, in order: walker index, hat coin (only for a
//! hatted walker when `0 < q < 1`), direction, boundary-noise coin (only on
//! absorption when `p > 0`), fair vote coin (only if the noise coin fired).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

use crate::error::{Error, Result};
use crate::geometry::{BoxGeometry, Configuration, Site};
use crate::oracle::HarmonicField;
use crate::unionfind::UnionFind;

pub const DEFAULT_EVENT_CAP: u64 = 1_000_000_000_000;

const NONE: u32 = u32::MAX;

const INTERIOR: u8 = 0;
const BOUNDARY_0: u8 = 1;
const BOUNDARY_1: u8 = 2;

/// `p`: boundary-noise probability, `q`: hat-removal probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub p: f64,
    pub q: f64,
}

impl ModelParams {
    pub const VOTER: ModelParams = ModelParams { p: 0.0, q: 0.0 };
    pub const HARMONIC: ModelParams = ModelParams { p: 0.0, q: 1.0 };
    pub const PERCOLATION: ModelParams = ModelParams { p: 1.0, q: 1.0 };
    pub const COW: ModelParams = ModelParams { p: 1.0, q: 0.0 };

    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!(
                "p = {p}, q = {q} must lie in [0, 1]"
            )));
        }
        Ok(ModelParams { p, q })
    }

    /// Name of the corner model, if this is one.
    pub fn corner_name(&self) -> Option<&'static str> {
        match (self.p, self.q) {
            (p, q) if p == 0.0 && q == 0.0 => Some("voter"),
            (p, q) if p == 0.0 && q == 1.0 => Some("harmonic"),
            (p, q) if p == 1.0 && q == 1.0 => Some("percolation"),
            (p, q) if p == 1.0 && q == 0.0 => Some("cow"),
            _ => None,
        }
    }
}

/// What happens to a walker once it has lost its hat.
///
/// A hatless walker never interacts with anyone again, so its coalescence set
/// gets vote 1 with probability `(1 - p) h(x) + p / 2`, where `h` is the
/// harmonic exit field and `x` the walker's position. `Resolve` draws that
/// vote directly instead of walking to the boundary; the law of the votes and
/// the partition is unchanged, but no exit site is recorded.
#[derive(Debug, Clone, Default)]
pub enum HatlessWalks {
    #[default]
    Simulate,
    Resolve(Arc<HarmonicField>),
}

#[derive(Debug, Clone)]
pub struct SamplerOptions {
    pub event_cap: u64,
    pub hatless: HatlessWalks,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            event_cap: DEFAULT_EVENT_CAP,
            hatless: HatlessWalks::Simulate,
        }
    }
}

/// Walkers are identified by the index of the site they started from.
pub type WalkerId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Walker {
    id: WalkerId,
    pos: u32,
    hatted: bool,
    /// Union-find root of the coalescence set this walker carries.
    root: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Moved {
        from: Site,
        to: Site,
    },
    Coalesced {
        into: WalkerId,
        at: Site,
    },
    Absorbed {
        exit: Site,
        vote: u8,
    },
    /// Hatless walker whose vote was drawn from the exit field.
    Resolved {
        at: Site,
        vote: u8,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventRecord {
    pub walker: WalkerId,
    pub hat_removed: bool,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkerView {
    pub id: WalkerId,
    pub position: Site,
    pub hatted: bool,
}

pub struct WalkerSystem {
    geometry: BoxGeometry,
    params: ModelParams,
    seed: u64,
    rng: Pcg64Mcg,
    options: SamplerOptions,
    kind: Vec<u8>,
    offsets: [isize; 6],
    active: Vec<Walker>,
    /// Slot in `active` of the hatted walker on each site.
    hatted_at: Vec<u32>,
    hatless_at: Vec<u32>,
    members: UnionFind,
    /// Per union-find root: assigned vote and exit site.
    class_vote: Vec<u8>,
    class_exit: Vec<u32>,
    events: u64,
}

impl WalkerSystem {
    pub fn new(geometry: BoxGeometry, params: ModelParams, seed: u64) -> Self {
        Self::with_options(geometry, params, seed, SamplerOptions::default())
    }

    pub fn with_options(
        geometry: BoxGeometry,
        params: ModelParams,
        seed: u64,
        options: SamplerOptions,
    ) -> Self {
        let n = geometry.num_sites();
        let kind = geometry
            .sites()
            .map(|s| match geometry.boundary_vote(s) {
                None => INTERIOR,
                Some(0) => BOUNDARY_0,
                Some(_) => BOUNDARY_1,
            })
            .collect();
        let mut hatted_at = vec![NONE; n];
        let active: Vec<Walker> = geometry
            .interior_sites()
            .enumerate()
            .map(|(slot, s)| {
                let idx = geometry.index(s) as u32;
                hatted_at[idx as usize] = slot as u32;
                Walker {
                    id: idx,
                    pos: idx,
                    hatted: true,
                    root: idx,
                }
            })
            .collect();
        WalkerSystem {
            geometry,
            params,
            seed,
            rng: Pcg64Mcg::seed_from_u64(seed),
            options,
            kind,
            offsets: geometry.index_offsets(),
            active,
            hatted_at,
            hatless_at: vec![0; n],
            members: UnionFind::new(n),
            class_vote: vec![u8::MAX; n],
            class_exit: vec![NONE; n],
            events: 0,
        }
    }

    pub fn geometry(&self) -> &BoxGeometry {
        &self.geometry
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn num_active(&self) -> usize {
        self.active.len()
    }

    pub fn walkers(&self) -> Vec<WalkerView> {
        self.active
            .iter()
            .map(|w| WalkerView {
                id: w.id,
                position: self.geometry.site(w.pos as usize),
                hatted: w.hatted,
            })
            .collect()
    }

    /// Origin sites whose vote the walker `id` currently carries.
    pub fn members(&mut self, id: WalkerId) -> Option<Vec<Site>> {
        let root = self.active.iter().find(|w| w.id == id)?.root as usize;
        let g = self.geometry;
        let sites: Vec<Site> = g
            .interior_sites()
            .filter(|s| self.members.find(g.index(*s)) == root)
            .collect();
        Some(sites)
    }

    /// Checks the occupancy bookkeeping against the walker list.
    pub fn occupancy_consistent(&self) -> bool {
        let mut hatted = vec![NONE; self.hatted_at.len()];
        let mut hatless = vec![0u32; self.hatless_at.len()];
        for (slot, w) in self.active.iter().enumerate() {
            if self.kind[w.pos as usize] != INTERIOR {
                return false;
            }
            if w.hatted {
                if hatted[w.pos as usize] != NONE {
                    return false;
                }
                hatted[w.pos as usize] = slot as u32;
            } else {
                hatless[w.pos as usize] += 1;
            }
        }
        hatted == self.hatted_at && hatless == self.hatless_at
    }

    fn remove_slot(&mut self, slot: usize) {
        self.active.swap_remove(slot);
        if let Some(moved) = self.active.get(slot) {
            if moved.hatted {
                self.hatted_at[moved.pos as usize] = slot as u32;
            }
        }
    }

    fn leave(&mut self, w: &Walker) {
        if w.hatted {
            self.hatted_at[w.pos as usize] = NONE;
        } else {
            self.hatless_at[w.pos as usize] -= 1;
        }
    }

    fn assign(&mut self, root: u32, vote: u8, exit: u32) {
        self.class_vote[root as usize] = vote;
        self.class_exit[root as usize] = exit;
    }

    /// Advances the system by one clock ring.
    pub fn step(&mut self) -> Result<EventRecord> {
        let n = self.active.len();
        if n == 0 {
            return Err(Error::NoActiveWalkers);
        }
        if self.events >= self.options.event_cap {
            return Err(Error::Runaway {
                cap: self.options.event_cap,
            });
        }
        self.events += 1;

        let slot = self.rng.gen_range(0..n);
        let mut w = self.active[slot];
        let q = self.params.q;
        let mut hat_removed = false;
        if w.hatted && q > 0.0 && (q >= 1.0 || self.rng.gen_bool(q)) {
            self.hatted_at[w.pos as usize] = NONE;
            self.hatless_at[w.pos as usize] += 1;
            w.hatted = false;
            self.active[slot].hatted = false;
            hat_removed = true;
        }

        if !w.hatted {
            if let HatlessWalks::Resolve(field) = &self.options.hatless {
                let h = field.at_index(w.pos as usize);
                let p = self.params.p;
                let vote = if p > 0.0 && self.rng.gen_bool(p) {
                    self.rng.gen::<bool>() as u8
                } else {
                    self.rng.gen_bool(h.clamp(0.0, 1.0)) as u8
                };
                self.leave(&w);
                self.assign(w.root, vote, NONE);
                self.remove_slot(slot);
                return Ok(EventRecord {
                    walker: w.id,
                    hat_removed,
                    outcome: StepOutcome::Resolved {
                        at: self.geometry.site(w.pos as usize),
                        vote,
                    },
                });
            }
        }

        let dir = self.rng.gen_range(0..6);
        let dest = (w.pos as isize + self.offsets[dir]) as usize;
        let from = w.pos;
        let outcome = match self.kind[dest] {
            INTERIOR => {
                self.leave(&w);
                let occupant = self.hatted_at[dest];
                if w.hatted && occupant != NONE {
                    let o = occupant as usize;
                    let root = self
                        .members
                        .union(w.root as usize, self.active[o].root as usize);
                    self.active[o].root = root as u32;
                    let into = self.active[o].id;
                    self.remove_slot(slot);
                    StepOutcome::Coalesced {
                        into,
                        at: self.geometry.site(dest),
                    }
                } else {
                    w.pos = dest as u32;
                    self.active[slot].pos = dest as u32;
                    if w.hatted {
                        self.hatted_at[dest] = slot as u32;
                    } else {
                        self.hatless_at[dest] += 1;
                    }
                    StepOutcome::Moved {
                        from: self.geometry.site(from as usize),
                        to: self.geometry.site(dest),
                    }
                }
            }
            fixed => {
                let p = self.params.p;
                let vote = if p > 0.0 && self.rng.gen_bool(p) {
                    self.rng.gen::<bool>() as u8
                } else {
                    fixed - 1
                };
                self.leave(&w);
                self.assign(w.root, vote, dest as u32);
                self.remove_slot(slot);
                StepOutcome::Absorbed {
                    exit: self.geometry.site(dest),
                    vote,
                }
            }
        };
        Ok(EventRecord {
            walker: w.id,
            hat_removed,
            outcome,
        })
    }

    /// Steps until every walker is absorbed and assembles the outcome.
    pub fn run_to_absorption(mut self) -> Result<SampleOutcome> {
        while !self.active.is_empty() {
            self.step()?;
        }
        Ok(self.finish())
    }

    fn finish(mut self) -> SampleOutcome {
        let g = self.geometry;
        let n = g.num_sites();
        let mut class_of = vec![NONE; n];
        let mut min_of_root = vec![NONE; n];
        let mut class_exit = vec![NONE; n];
        let mut votes = vec![0u8; n];
        for s in g.sites() {
            let idx = g.index(s);
            match g.boundary_vote(s) {
                Some(v) => votes[idx] = v,
                None => {
                    let root = self.members.find(idx);
                    if min_of_root[root] == NONE {
                        // Sites are visited in increasing index order.
                        min_of_root[root] = idx as u32;
                        class_exit[idx] = self.class_exit[root];
                    }
                    class_of[idx] = min_of_root[root];
                    votes[idx] = self.class_vote[root];
                }
            }
        }
        SampleOutcome {
            params: self.params,
            seed: self.seed,
            events: self.events,
            configuration: Configuration::from_raw(g, votes).expect("votes are binary"),
            class_of,
            class_exit,
        }
    }
}

/// Class identifier: the box index of the class's smallest member site.
pub type ClassId = u32;

/// One sampled stationary configuration with its coalescing classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutcome {
    params: ModelParams,
    seed: u64,
    events: u64,
    configuration: Configuration,
    class_of: Vec<u32>,
    class_exit: Vec<u32>,
}

impl SampleOutcome {
    pub fn geometry(&self) -> &BoxGeometry {
        self.configuration.geometry()
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    /// Full configuration, boundary votes included.
    pub fn configuration(&self) -> &Configuration {
        &self.configuration
    }

    pub fn vote(&self, s: Site) -> u8 {
        self.configuration.vote(s)
    }

    /// Class of an interior site; `None` for boundary sites.
    pub fn class_of(&self, s: Site) -> Option<ClassId> {
        let c = *self.class_of.get(self.geometry().index(s))?;
        (c != NONE).then_some(c)
    }

    /// Raw per-site class array indexed by [`BoxGeometry::index`]; boundary
    /// entries are `u32::MAX`.
    pub fn class_array(&self) -> &[u32] {
        &self.class_of
    }

    /// Boundary site through which the class left the interior. `None` if
    /// the class id is unknown or its vote was resolved without walking.
    pub fn exit_site(&self, class: ClassId) -> Option<Site> {
        let e = *self.class_exit.get(class as usize)?;
        (e != NONE).then(|| self.geometry().site(e as usize))
    }

    /// Class ids in increasing order.
    pub fn class_ids(&self) -> Vec<ClassId> {
        let g = self.geometry();
        g.interior_sites()
            .map(|s| g.index(s) as u32)
            .filter(|idx| self.class_of[*idx as usize] == *idx)
            .collect()
    }

    pub fn class_site(&self, class: ClassId) -> Site {
        self.geometry().site(class as usize)
    }
}

pub fn init_system(g: BoxGeometry, params: ModelParams, seed: u64) -> WalkerSystem {
    WalkerSystem::new(g, params, seed)
}

pub fn sample(g: BoxGeometry, params: ModelParams, seed: u64) -> Result<SampleOutcome> {
    WalkerSystem::new(g, params, seed).run_to_absorption()
}

pub fn sample_with(
    g: BoxGeometry,
    params: ModelParams,
    seed: u64,
    options: SamplerOptions,
) -> Result<SampleOutcome> {
    WalkerSystem::with_options(g, params, seed, options).run_to_absorption()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_box;

    #[test]
    fn init_places_one_hatted_walker_per_site() {
        let sys = init_system(build_box(3).unwrap(), ModelParams::VOTER, 1);
        assert_eq!(sys.num_active(), 1);
        assert_eq!(sys.walkers()[0].position, Site::new(1, 1));

        let mut sys = init_system(build_box(5).unwrap(), ModelParams::VOTER, 1);
        assert_eq!(sys.num_active(), 9);
        assert!(sys.walkers().iter().all(|w| w.hatted));
        for w in sys.walkers() {
            assert_eq!(sys.members(w.id).unwrap(), vec![w.position]);
        }
        assert!(sys.occupancy_consistent());
    }

    #[test]
    fn first_step_in_l3_absorbs() {
        for seed in 0..20 {
            let mut sys = init_system(build_box(3).unwrap(), ModelParams::VOTER, seed);
            let ev = sys.step().unwrap();
            assert!(matches!(ev.outcome, StepOutcome::Absorbed { .. }));
            assert_eq!(sys.step().unwrap_err(), Error::NoActiveWalkers);
        }
    }

    #[test]
    fn hats_come_off_on_first_ring_when_q_is_one() {
        let mut sys = init_system(build_box(12).unwrap(), ModelParams::HARMONIC, 3);
        let mut rung = std::collections::HashSet::new();
        for _ in 0..200 {
            let ev = sys.step().unwrap();
            if rung.insert(ev.walker) {
                assert!(ev.hat_removed);
            } else {
                assert!(!ev.hat_removed);
            }
            assert!(!matches!(ev.outcome, StepOutcome::Coalesced { .. }));
        }
        for w in sys.walkers() {
            assert_eq!(w.hatted, !rung.contains(&w.id));
        }
        assert!(sys.occupancy_consistent());
    }

    #[test]
    fn adjacent_walkers_merge_on_landing() {
        // Step until the first coalescence and check the merged member set.
        let g = build_box(6).unwrap();
        let mut sys = init_system(g, ModelParams::VOTER, 11);
        loop {
            let before: Vec<_> = sys.walkers();
            let ev = sys.step().unwrap();
            if let StepOutcome::Coalesced { into, at } = ev.outcome {
                let mover = before.iter().find(|w| w.id == ev.walker).unwrap();
                let target = before.iter().find(|w| w.id == into).unwrap();
                assert_eq!(target.position, at);
                let dist = mover.position.embed().distance(at.embed());
                assert!((dist - 1.0).abs() < 1e-12);
                assert_eq!(sys.num_active(), before.len() - 1);
                let members = sys.members(into).unwrap();
                assert!(members.contains(&g.site(ev.walker as usize)));
                assert!(members.contains(&g.site(into as usize)));
                break;
            }
        }
        assert!(sys.occupancy_consistent());
    }

    #[test]
    fn event_cap_reports_runaway() {
        let g = build_box(20).unwrap();
        let opts = SamplerOptions {
            event_cap: 10,
            ..Default::default()
        };
        let err = sample_with(g, ModelParams::VOTER, 5, opts).unwrap_err();
        assert_eq!(err, Error::Runaway { cap: 10 });
    }

    #[test]
    fn l3_voter_outcome() {
        let g = build_box(3).unwrap();
        let out = sample(g, ModelParams::VOTER, 9).unwrap();
        let c = out.class_of(Site::new(1, 1)).unwrap();
        assert_eq!(out.class_ids(), vec![c]);
        let exit = out.exit_site(c).unwrap();
        assert_eq!(Some(out.vote(Site::new(1, 1))), g.boundary_vote(exit));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(1.5, 0.0).is_err());
        assert!(ModelParams::new(0.5, -0.1).is_err());
        assert_eq!(
            ModelParams::new(1.0, 0.0).unwrap().corner_name(),
            Some("cow")
        );
        assert_eq!(ModelParams::new(0.5, 0.5).unwrap().corner_name(), None);
    }
}
