//! Brute-force oracle for the closed forms: sample random component-failure
//! worlds (or exhaustively enumerate them) and replay the per-strategy
//! recovery rules.
//!
//! Nothing in this module shares code with [`crate::analytic`]; agreement
//! between the two is the crate's central correctness check. The only shared
//! vocabulary is the [`Scenario`] itself.
//!
//! # Component layout
//!
//! A [`World`] holds one up/down flag per physical component. Index
//! conventions, fixed per strategy:
//!
//! * centralized active placement (`cv-none`, `asbn`, `asbs`): one active
//!   server per chain stage `s` (`psi_total` total); active VNF `(s, q)` for
//!   replica `q` at index `s * n + q`.
//! * distributed active placement (`dv-none`, `anbs`, `anbn`): active server
//!   `(q, k)` for sub-flow `q` and chain position `k` at `q * n_servers + k`;
//!   active VNF `(q, t)` for type `t` at `q * psi_total + t`.
//! * `vnf-only`: no servers; copy `c` of type `t` at `c * psi_total + t`,
//!   with `n + sigma` interchangeable copies per type.
//! * `asbn` backups: one backup server per stage; copy `j` for stage `s` at
//!   `s * sigma + j`.
//! * `asbs` / `anbs` backups: a single shared backup server; copy `j` of
//!   type `t` at `t * sigma + j`.
//! * `anbn` backups: backup server `b` of position `k`'s group at
//!   `k * (m / n_servers) + b`; its copy `j` of the position's local type
//!   `lt` at `group_offset(k) + b * sigma * psi_k + lt * sigma + j`.
//!
//! # Determinism
//!
//! Trial `i`'s randomness comes from an independent counter-indexed
//! substream (ChaCha8 keyed by `seed`, stream number `i`), so estimates are
//! bit-identical for any trial partitioning — serial, or any rayon pool
//! size. The merged statistic is an integer success count, whose summation
//! order cannot matter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analytic::{AnalyticError, SuccessProbability};
use crate::model::{ReliabilityParams, Scenario, Strategy};

/// 97.5th percentile of the standard normal: two-sided 95% coverage.
const Z_95: f64 = 1.959963984540054;

/// Up/down state of every physical component in one sampled world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub active_server_up: Vec<bool>,
    pub active_vnf_up: Vec<bool>,
    pub backup_server_up: Vec<bool>,
    pub backup_vnf_up: Vec<bool>,
}

impl World {
    fn sized(c: &ComponentCounts) -> World {
        World {
            active_server_up: vec![false; c.active_servers],
            active_vnf_up: vec![false; c.active_vnfs],
            backup_server_up: vec![false; c.backup_servers],
            backup_vnf_up: vec![false; c.backup_vnfs],
        }
    }
}

/// Number of components of each class a scenario deploys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentCounts {
    pub active_servers: usize,
    pub active_vnfs: usize,
    pub backup_servers: usize,
    pub backup_vnfs: usize,
}

impl ComponentCounts {
    pub fn of(sc: &Scenario) -> ComponentCounts {
        let n = sc.chain.n as usize;
        let psi = sc.chain.psi_total as usize;
        let n_servers = sc.chain.n_servers as usize;
        let sigma = sc.backup.sigma as usize;
        let m = sc.backup.m as usize;
        let (active_servers, active_vnfs) = match sc.strategy {
            Strategy::CvNone | Strategy::Asbn | Strategy::Asbs => (psi, n * psi),
            Strategy::VnfOnly => (0, (n + sigma) * psi),
            Strategy::DvNone | Strategy::Anbs | Strategy::Anbn => (n * n_servers, n * psi),
        };
        let (backup_servers, backup_vnfs) = match sc.strategy {
            Strategy::Asbn => (psi, sigma * psi),
            Strategy::Asbs | Strategy::Anbs => (1, sigma * psi),
            Strategy::Anbn => {
                let group = if n_servers == 0 { 0 } else { m / n_servers };
                (m, group * sigma * psi)
            }
            Strategy::CvNone | Strategy::DvNone | Strategy::VnfOnly => (0, 0),
        };
        ComponentCounts {
            active_servers,
            active_vnfs,
            backup_servers,
            backup_vnfs,
        }
    }

    pub fn total(&self) -> usize {
        self.active_servers + self.active_vnfs + self.backup_servers + self.backup_vnfs
    }
}

/// Monte Carlo success estimate with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("scenario deploys {count} components, above the exhaustive-enumeration cap of {cap}")]
    TooManyComponents { count: usize, cap: usize },
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

fn draw_world(sc: &Scenario, world: &mut World, rng: &mut ChaCha8Rng) {
    let p = &sc.params;
    // Fixed draw order — active servers, active VNFs, backup servers, backup
    // VNFs, each in index order — so a (seed, trial) pair always maps to the
    // same world. Each backup server is drawn exactly once per world even
    // though it may back many components.
    for up in world.active_server_up.iter_mut() {
        *up = rng.random::<f64>() < p.phi;
    }
    for up in world.active_vnf_up.iter_mut() {
        *up = rng.random::<f64>() < p.upsilon;
    }
    for up in world.backup_server_up.iter_mut() {
        *up = rng.random::<f64>() < p.phi_r;
    }
    for up in world.backup_vnf_up.iter_mut() {
        *up = rng.random::<f64>() < p.upsilon_r;
    }
}

/// Samples the world for one trial: every component is up independently with
/// its class reliability. Pure function of `(scenario, trial_index, seed)`.
pub fn sample_world(sc: &Scenario, trial_index: u64, seed: u64) -> World {
    let mut world = World::sized(&ComponentCounts::of(sc));
    draw_world(sc, &mut world, &mut trial_rng(seed, trial_index));
    world
}

/// Replays the strategy's recovery rules against a sampled world.
///
/// Demand at a VNF type counts failed active copies (a failed server fails
/// every copy it hosts); supply counts working backup copies of the same
/// type on up backup servers reachable under the strategy's layout. Backup
/// copies are typed: a copy of one type never substitutes for another.
pub fn succeeds(sc: &Scenario, w: &World) -> bool {
    let counts = ComponentCounts::of(sc);
    assert_eq!(
        (
            w.active_server_up.len(),
            w.active_vnf_up.len(),
            w.backup_server_up.len(),
            w.backup_vnf_up.len(),
        ),
        (
            counts.active_servers,
            counts.active_vnfs,
            counts.backup_servers,
            counts.backup_vnfs,
        ),
        "world shaped for a different scenario"
    );

    let n = sc.chain.n as usize;
    let psi = sc.chain.psi_total as usize;
    let n_servers = sc.chain.n_servers as usize;
    let sigma = sc.backup.sigma as usize;

    let up = |v: &[bool], i: usize| v[i];
    match sc.strategy {
        Strategy::CvNone | Strategy::DvNone => {
            w.active_server_up.iter().all(|&b| b) && w.active_vnf_up.iter().all(|&b| b)
        }
        Strategy::VnfOnly => {
            // Per type, at most sigma of the n + sigma copies may fail.
            (0..psi).all(|t| {
                let failed = (0..n + sigma)
                    .filter(|&c| !up(&w.active_vnf_up, c * psi + t))
                    .count();
                failed <= sigma
            })
        }
        Strategy::Asbn => {
            // Per stage: cover VNF failures (server up) or the whole stage
            // (server down) from the stage's own backup server.
            (0..psi).all(|s| {
                let supply = if up(&w.backup_server_up, s) {
                    (0..sigma)
                        .filter(|&j| up(&w.backup_vnf_up, s * sigma + j))
                        .count()
                } else {
                    0
                };
                if up(&w.active_server_up, s) {
                    let demand = (0..n).filter(|&q| !up(&w.active_vnf_up, s * n + q)).count();
                    demand == 0 || supply >= demand
                } else {
                    supply >= n
                }
            })
        }
        Strategy::Asbs => {
            // Per type: a down stage server demands all n copies; an up one
            // demands its failed copies. Supply comes from the single shared
            // backup server, consulted only when demand is nonzero.
            (0..psi).all(|t| {
                let demand = if up(&w.active_server_up, t) {
                    (0..n).filter(|&q| !up(&w.active_vnf_up, t * n + q)).count()
                } else {
                    n
                };
                if demand == 0 {
                    return true;
                }
                let supply = if up(&w.backup_server_up, 0) {
                    (0..sigma)
                        .filter(|&j| up(&w.backup_vnf_up, t * sigma + j))
                        .count()
                } else {
                    0
                };
                demand <= supply
            })
        }
        Strategy::Anbs => {
            let mut type_base = 0usize;
            for (k, &pk) in sc.chain.psi_split.iter().enumerate() {
                let failed_servers = (0..n)
                    .filter(|&q| !up(&w.active_server_up, q * n_servers + k))
                    .count();
                for lt in 0..pk as usize {
                    let t = type_base + lt;
                    let demand = failed_servers
                        + (0..n)
                            .filter(|&q| {
                                up(&w.active_server_up, q * n_servers + k)
                                    && !up(&w.active_vnf_up, q * psi + t)
                            })
                            .count();
                    if demand == 0 {
                        continue;
                    }
                    let supply = if up(&w.backup_server_up, 0) {
                        (0..sigma)
                            .filter(|&j| up(&w.backup_vnf_up, t * sigma + j))
                            .count()
                    } else {
                        0
                    };
                    if demand > supply {
                        return false;
                    }
                }
                type_base += pk as usize;
            }
            true
        }
        Strategy::Anbn => {
            let group = if n_servers == 0 {
                0
            } else {
                sc.backup.m as usize / n_servers
            };
            let mut type_base = 0usize;
            let mut backup_base = 0usize;
            for (k, &pk) in sc.chain.psi_split.iter().enumerate() {
                let pk = pk as usize;
                let failed_servers = (0..n)
                    .filter(|&q| !up(&w.active_server_up, q * n_servers + k))
                    .count();
                for lt in 0..pk {
                    let t = type_base + lt;
                    let demand = failed_servers
                        + (0..n)
                            .filter(|&q| {
                                up(&w.active_server_up, q * n_servers + k)
                                    && !up(&w.active_vnf_up, q * psi + t)
                            })
                            .count();
                    if demand == 0 {
                        continue;
                    }
                    // Pool the position's up backup servers.
                    let mut supply = 0usize;
                    for b in 0..group {
                        if up(&w.backup_server_up, k * group + b) {
                            let base = backup_base + b * sigma * pk + lt * sigma;
                            supply += (0..sigma)
                                .filter(|&j| up(&w.backup_vnf_up, base + j))
                                .count();
                        }
                    }
                    if demand > supply {
                        return false;
                    }
                }
                type_base += pk;
                backup_base += group * sigma * pk;
            }
            true
        }
    }
}

/// 95% Wilson score interval for `successes` out of `trials`. Stays accurate
/// for proportions at or near 0 and 1, unlike the plain normal interval.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (Z_95 / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimates the success probability over `trials` independently sampled
/// worlds. Pure function of `(scenario, trials, seed)`: results are
/// bit-identical for any degree of parallelism.
pub fn estimate(sc: &Scenario, trials: u64, seed: u64) -> Estimate {
    assert!(trials >= 1, "at least one trial required");
    let counts = ComponentCounts::of(sc);
    let successes = (0..trials)
        .into_par_iter()
        .map_init(
            || World::sized(&counts),
            |world, trial| {
                draw_world(sc, world, &mut trial_rng(seed, trial));
                u64::from(succeeds(sc, world))
            },
        )
        .sum::<u64>();
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Estimate {
        mean: successes as f64 / trials as f64,
        ci_low,
        ci_high,
        trials,
        seed,
        successes,
    }
}

/// Exhaustive world tally for one scenario shape: the number of *successful*
/// worlds, bucketed by how many components of each class are down.
///
/// The bucket counts depend only on the structural fields of the scenario
/// (strategy, chain, backup provisioning) — never on the reliabilities — so
/// one tally prices the exact success probability for any reliability
/// setting via [`ExactTally::probability`]. Bucketing also keeps the float
/// work per query down to a few thousand terms, far more accurate than
/// summing millions of per-world products.
#[derive(Debug, Clone)]
pub struct ExactTally {
    counts: ComponentCounts,
    /// successes[idx] for idx laid out as
    /// `((down_as * (av+1) + down_av) * (bs+1) + down_bs) * (bv+1) + down_bv`.
    successes: Vec<u64>,
}

impl ExactTally {
    /// Exhaustive enumeration is capped at 2^24 worlds.
    pub const MAX_COMPONENTS: usize = 24;

    /// Enumerates every up/down assignment of the scenario's components and
    /// tallies the successful ones per down-count signature.
    pub fn build(sc: &Scenario) -> Result<ExactTally, SimError> {
        let counts = ComponentCounts::of(sc);
        let total = counts.total();
        if total > Self::MAX_COMPONENTS {
            return Err(SimError::TooManyComponents {
                count: total,
                cap: Self::MAX_COMPONENTS,
            });
        }
        let dims = [
            counts.active_servers + 1,
            counts.active_vnfs + 1,
            counts.backup_servers + 1,
            counts.backup_vnfs + 1,
        ];
        let table_len = dims.iter().product::<usize>();
        let n_masks = 1usize << total;

        let successes = (0..n_masks)
            .into_par_iter()
            .with_min_len(1 << 12)
            .fold(
                || (World::sized(&counts), vec![0u64; table_len]),
                |(mut world, mut table), mask| {
                    let mut downs = [0usize; 4];
                    let mut bit = 0;
                    for (class, slots) in [
                        (0, &mut world.active_server_up),
                        (1, &mut world.active_vnf_up),
                        (2, &mut world.backup_server_up),
                        (3, &mut world.backup_vnf_up),
                    ] {
                        for slot in slots.iter_mut() {
                            let is_up = (mask >> bit) & 1 == 1;
                            *slot = is_up;
                            downs[class] += usize::from(!is_up);
                            bit += 1;
                        }
                    }
                    if succeeds(sc, &world) {
                        let idx = ((downs[0] * dims[1] + downs[1]) * dims[2] + downs[2]) * dims[3]
                            + downs[3];
                        table[idx] += 1;
                    }
                    (world, table)
                },
            )
            .map(|(_, table)| table)
            .reduce(
                || vec![0u64; table_len],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );

        Ok(ExactTally { counts, successes })
    }

    pub fn component_counts(&self) -> ComponentCounts {
        self.counts
    }

    /// Exact success probability under the given reliabilities: each bucket
    /// contributes `count * phi^up (1-phi)^down * ...` per component class.
    pub fn probability(&self, p: &ReliabilityParams) -> f64 {
        let c = self.counts;
        let class_weight = |prob: f64, total: usize, down: usize| {
            prob.powi((total - down) as i32) * (1.0 - prob).powi(down as i32)
        };
        let mut total = 0.0;
        let mut idx = 0;
        for da in 0..=c.active_servers {
            let wa = class_weight(p.phi, c.active_servers, da);
            for dv in 0..=c.active_vnfs {
                let wv = wa * class_weight(p.upsilon, c.active_vnfs, dv);
                for dbs in 0..=c.backup_servers {
                    let wbs = wv * class_weight(p.phi_r, c.backup_servers, dbs);
                    for dbv in 0..=c.backup_vnfs {
                        let count = self.successes[idx];
                        idx += 1;
                        if count > 0 {
                            total +=
                                count as f64 * wbs * class_weight(p.upsilon_r, c.backup_vnfs, dbv);
                        }
                    }
                }
            }
        }
        total
    }
}

/// Exact success probability by exhaustive enumeration of all component
/// up/down assignments. Limited to [`ExactTally::MAX_COMPONENTS`] components.
pub fn enumerate_exact(sc: &Scenario) -> Result<SuccessProbability, SimError> {
    let value = ExactTally::build(sc)?.probability(&sc.params);
    // The tally sums disjoint world probabilities, so anything beyond
    // round-off outside [0, 1] is an implementation bug.
    Ok(SuccessProbability::from_raw(value).map_err(SimError::Analytic)?)
}
