//! Scenario types shared by every other module: component reliabilities,
//! chain shape, backup provisioning, placement strategy, and validation.

use std::fmt;

/// Hard cap on `n`, `psi_total`, `sigma`, and every derived binomial order.
///
/// Keeping all combinatorial arguments at or below 64 means every binomial
/// coefficient fits exactly in a `u64` (C(64,32) < 2^63) and every sum stays
/// short enough that plain double-precision accumulation is accurate to well
/// below the tolerances used in the test suite.
pub const MAX_COUNT: u32 = 64;

/// Per-component availability probabilities.
///
/// Active and backup components are distinguished because they may live on
/// different hardware classes; all four values are probabilities in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityParams {
    /// Probability that a server hosting active VNFs is up.
    pub phi: f64,
    /// Probability that a server hosting backup VNFs is up.
    pub phi_r: f64,
    /// Probability that an active VNF instance is up.
    pub upsilon: f64,
    /// Probability that a backup VNF instance is up.
    pub upsilon_r: f64,
}

impl ReliabilityParams {
    /// All four reliabilities set to the same value.
    pub fn uniform(p: f64) -> Self {
        ReliabilityParams {
            phi: p,
            phi_r: p,
            upsilon: p,
            upsilon_r: p,
        }
    }

    /// Active and backup classes set separately: servers to `phi`,
    /// VNF instances to `upsilon`.
    pub fn new(phi: f64, phi_r: f64, upsilon: f64, upsilon_r: f64) -> Self {
        ReliabilityParams {
            phi,
            phi_r,
            upsilon,
            upsilon_r,
        }
    }
}

/// Parallelism and chain shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSpec {
    /// Number of parallel sub-flows (active chain copies), `n >= 1`.
    pub n: u32,
    /// Number of VNF types every sub-flow must traverse, `psi_total >= 1`.
    pub psi_total: u32,
    /// Servers per sub-flow under distributed placement, `1 <= n_servers <=
    /// psi_total`. Centralized strategies force this to `psi_total`.
    pub n_servers: u32,
    /// How many consecutive VNF types run on each of the `n_servers` servers;
    /// entries are positive and sum to `psi_total`.
    pub psi_split: Vec<u32>,
}

impl ChainSpec {
    /// Chain with an explicit per-server VNF split.
    pub fn new(n: u32, psi_total: u32, psi_split: Vec<u32>) -> Self {
        let n_servers = psi_split.len() as u32;
        ChainSpec {
            n,
            psi_total,
            n_servers,
            psi_split,
        }
    }

    /// Chain with the default split: `psi_total` VNF types spread as evenly
    /// as possible over `n_servers` servers, remainders going to the
    /// lowest-index servers.
    pub fn with_even_split(n: u32, psi_total: u32, n_servers: u32) -> Self {
        ChainSpec {
            n,
            psi_total,
            n_servers,
            psi_split: even_split(psi_total, n_servers),
        }
    }
}

/// The most even split of `psi_total` over `n_servers`: the first
/// `psi_total % n_servers` servers get one extra VNF type.
pub fn even_split(psi_total: u32, n_servers: u32) -> Vec<u32> {
    if n_servers == 0 {
        return Vec::new();
    }
    let base = psi_total / n_servers;
    let extra = psi_total % n_servers;
    (0..n_servers)
        .map(|k| base + u32::from(k < extra))
        .collect()
}

/// Backup provisioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackupSpec {
    /// Backup chain copies held per backup server (`sigma` copies of each
    /// VNF type the server is responsible for).
    pub sigma: u32,
    /// Number of backup servers. Only [`Strategy::Anbn`] takes this as a free
    /// parameter (`m` a positive multiple of `n_servers`, at most
    /// `n * n_servers`, or 0 for the no-backup reduction); every other
    /// strategy fixes the backup-server count structurally and requires 0.
    pub m: u32,
}

impl BackupSpec {
    pub fn new(sigma: u32, m: u32) -> Self {
        BackupSpec { sigma, m }
    }

    /// No backups at all.
    pub fn none() -> Self {
        BackupSpec { sigma: 0, m: 0 }
    }
}

/// Active/backup placement strategy.
///
/// Active placement is either centralized (all `n` copies of a VNF type share
/// one server, `psi_total` servers in total) or distributed (each sub-flow's
/// chain spreads over `n_servers` servers, `n * n_servers` in total). Backup
/// placement puts `sigma` chain copies on a dedicated server per stage, on a
/// single shared server, or pooled over `m` servers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Centralized active placement, no backups.
    CvNone,
    /// Distributed active placement, no backups.
    DvNone,
    /// Centralized active placement; one dedicated backup server per stage,
    /// holding `sigma` copies of that stage's VNF type.
    Asbn,
    /// Centralized active placement; one shared backup server holding
    /// `sigma` copies of every VNF type.
    Asbs,
    /// Distributed active placement; `m` backup servers, `m / n_servers` of
    /// them assigned to each chain position, each holding `sigma` copies of
    /// the position's VNF types. Failed demand at a position draws on the
    /// pooled supply of its up backup servers.
    Anbn,
    /// Distributed active placement; one shared backup server holding
    /// `sigma` copies of every VNF type.
    Anbs,
    /// Server-failure-free model: only VNF instances fail. Each VNF type has
    /// `n + sigma` interchangeable copies and tolerates up to `sigma`
    /// failures.
    VnfOnly,
}

impl Strategy {
    /// All strategy tags, in a stable order.
    pub const ALL: [Strategy; 7] = [
        Strategy::CvNone,
        Strategy::DvNone,
        Strategy::Asbn,
        Strategy::Asbs,
        Strategy::Anbn,
        Strategy::Anbs,
        Strategy::VnfOnly,
    ];

    /// True for the strategies with centralized active placement (one server
    /// per chain stage). These force `n_servers == psi_total` with an
    /// all-ones split.
    pub fn is_centralized(self) -> bool {
        matches!(
            self,
            Strategy::CvNone | Strategy::Asbn | Strategy::Asbs | Strategy::VnfOnly
        )
    }

    /// True when the strategy reserves no backup VNFs.
    pub fn is_no_backup(self) -> bool {
        matches!(self, Strategy::CvNone | Strategy::DvNone)
    }

    /// Stable lower-case token used by the CLI and output rows.
    pub fn token(self) -> &'static str {
        match self {
            Strategy::CvNone => "cv-none",
            Strategy::DvNone => "dv-none",
            Strategy::Asbn => "asbn",
            Strategy::Asbs => "asbs",
            Strategy::Anbn => "anbn",
            Strategy::Anbs => "anbs",
            Strategy::VnfOnly => "vnf-only",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A fully specified evaluation unit: strategy plus reliabilities, chain
/// shape, and backup provisioning.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub strategy: Strategy,
    pub params: ReliabilityParams,
    pub chain: ChainSpec,
    pub backup: BackupSpec,
}

impl Scenario {
    /// Builds a scenario, normalizing the chain shape for centralized
    /// strategies (`n_servers := psi_total`, one VNF type per server) so the
    /// caller never has to thread that invariant through.
    pub fn new(
        strategy: Strategy,
        params: ReliabilityParams,
        chain: ChainSpec,
        backup: BackupSpec,
    ) -> Self {
        let chain = if strategy.is_centralized() {
            ChainSpec {
                n_servers: chain.psi_total,
                psi_split: vec![1; chain.psi_total as usize],
                ..chain
            }
        } else {
            chain
        };
        Scenario {
            strategy,
            params,
            chain,
            backup,
        }
    }

    /// Checks every structural and numeric precondition the evaluation
    /// modules rely on. Returns `Ok(())` or the full list of violations.
    /// Never panics; a passing result guarantees every formula's
    /// preconditions hold.
    pub fn validate(&self) -> ValidationResult {
        let mut v = Vec::new();
        for (field, value) in [
            ("phi", self.params.phi),
            ("phi_r", self.params.phi_r),
            ("upsilon", self.params.upsilon),
            ("upsilon_r", self.params.upsilon_r),
        ] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                v.push(Violation::ProbabilityOutOfRange { field, value });
            }
        }

        let ChainSpec {
            n,
            psi_total,
            n_servers,
            ref psi_split,
        } = self.chain;
        if n < 1 {
            v.push(Violation::CountOutOfRange {
                field: "n",
                value: n,
                min: 1,
                max: MAX_COUNT,
            });
        }
        if psi_total < 1 {
            v.push(Violation::CountOutOfRange {
                field: "psi_total",
                value: psi_total,
                min: 1,
                max: MAX_COUNT,
            });
        }
        if n > MAX_COUNT {
            v.push(Violation::CountOutOfRange {
                field: "n",
                value: n,
                min: 1,
                max: MAX_COUNT,
            });
        }
        if psi_total > MAX_COUNT {
            v.push(Violation::CountOutOfRange {
                field: "psi_total",
                value: psi_total,
                min: 1,
                max: MAX_COUNT,
            });
        }
        if n_servers < 1 || n_servers > psi_total {
            v.push(Violation::CountOutOfRange {
                field: "n_servers",
                value: n_servers,
                min: 1,
                max: psi_total,
            });
        }
        if psi_split.len() as u32 != n_servers
            || psi_split.iter().sum::<u32>() != psi_total
            || psi_split.iter().any(|&p| p < 1)
        {
            v.push(Violation::PsiSplitMismatch {
                psi_split: psi_split.clone(),
                n_servers,
                psi_total,
            });
        }
        if self.strategy.is_centralized()
            && (n_servers != psi_total || psi_split.iter().any(|&p| p != 1))
        {
            v.push(Violation::CentralizedSplit {
                strategy: self.strategy,
            });
        }

        let BackupSpec { sigma, m } = self.backup;
        if sigma > MAX_COUNT {
            v.push(Violation::CountOutOfRange {
                field: "sigma",
                value: sigma,
                min: 0,
                max: MAX_COUNT,
            });
        }
        match self.strategy {
            Strategy::CvNone | Strategy::DvNone => {
                if sigma != 0 {
                    v.push(Violation::UnexpectedBackup {
                        field: "sigma",
                        strategy: self.strategy,
                    });
                }
                if m != 0 {
                    v.push(Violation::UnexpectedBackup {
                        field: "m",
                        strategy: self.strategy,
                    });
                }
            }
            Strategy::Anbn => {
                // m = 0 is the explicit no-backup reduction; otherwise the
                // pooled formula needs m/N groups of at least one server and
                // no more backup servers than active ones.
                if m != 0 {
                    if n_servers >= 1 && m % n_servers != 0 {
                        v.push(Violation::BackupServersNotMultiple { m, n_servers });
                    }
                    if m < n_servers || m > n.saturating_mul(n_servers) {
                        v.push(Violation::BackupServersOutOfRange {
                            m,
                            min: n_servers,
                            max: n.saturating_mul(n_servers),
                        });
                    }
                }
                // Pooled per-type backup capacity bounds the binomial order.
                if n_servers >= 1 && m % n_servers == 0 {
                    let per_position = m / n_servers.max(1);
                    if per_position.saturating_mul(sigma) > MAX_COUNT {
                        v.push(Violation::CountOutOfRange {
                            field: "(m / n_servers) * sigma",
                            value: per_position.saturating_mul(sigma),
                            min: 0,
                            max: MAX_COUNT,
                        });
                    }
                }
            }
            Strategy::VnfOnly => {
                if m != 0 {
                    v.push(Violation::UnexpectedBackup {
                        field: "m",
                        strategy: self.strategy,
                    });
                }
                // Each type has n + sigma interchangeable copies.
                if n.saturating_add(sigma) > MAX_COUNT {
                    v.push(Violation::CountOutOfRange {
                        field: "n + sigma",
                        value: n.saturating_add(sigma),
                        min: 1,
                        max: MAX_COUNT,
                    });
                }
            }
            Strategy::Asbn | Strategy::Asbs | Strategy::Anbs => {
                if m != 0 {
                    v.push(Violation::UnexpectedBackup {
                        field: "m",
                        strategy: self.strategy,
                    });
                }
            }
        }

        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Total number of backup chain copies reserved system-wide: `sigma` for
    /// the single-group backup layouts, `(m / n_servers) * sigma` for the
    /// pooled layout, 0 without backups.
    pub fn total_backup_subchains(&self) -> u32 {
        match self.strategy {
            Strategy::CvNone | Strategy::DvNone => 0,
            Strategy::Asbn | Strategy::Asbs | Strategy::Anbs | Strategy::VnfOnly => {
                self.backup.sigma
            }
            Strategy::Anbn => {
                if self.chain.n_servers == 0 {
                    0
                } else {
                    (self.backup.m / self.chain.n_servers) * self.backup.sigma
                }
            }
        }
    }
}

/// Verdict of [`Scenario::validate`]: `Ok(())` or every violated constraint.
pub type ValidationResult = Result<(), Vec<Violation>>;

/// One violated scenario constraint. Rendered messages name the offending
/// field and the bound it broke.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ProbabilityOutOfRange {
        field: &'static str,
        value: f64,
    },
    CountOutOfRange {
        field: &'static str,
        value: u32,
        min: u32,
        max: u32,
    },
    PsiSplitMismatch {
        psi_split: Vec<u32>,
        n_servers: u32,
        psi_total: u32,
    },
    /// Centralized strategies host exactly one VNF type per server.
    CentralizedSplit {
        strategy: Strategy,
    },
    /// Backup servers are assigned per chain position, so their count must be
    /// a multiple of the per-flow server count.
    BackupServersNotMultiple {
        m: u32,
        n_servers: u32,
    },
    BackupServersOutOfRange {
        m: u32,
        min: u32,
        max: u32,
    },
    /// A backup parameter was set for a strategy that fixes it structurally.
    UnexpectedBackup {
        field: &'static str,
        strategy: Strategy,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ProbabilityOutOfRange { field, value } => {
                write!(f, "{field} out of [0,1]: {value}")
            }
            Violation::CountOutOfRange {
                field,
                value,
                min,
                max,
            } => write!(f, "{field} = {value} outside [{min}, {max}]"),
            Violation::PsiSplitMismatch {
                psi_split,
                n_servers,
                psi_total,
            } => write!(
                f,
                "psi_split {psi_split:?} must have {n_servers} positive entries summing to {psi_total}"
            ),
            Violation::CentralizedSplit { strategy } => write!(
                f,
                "{strategy} places one VNF type per server (n_servers = psi_total, all-ones split)"
            ),
            Violation::BackupServersNotMultiple { m, n_servers } => {
                write!(f, "m = {m} must be a multiple of n_servers = {n_servers}")
            }
            Violation::BackupServersOutOfRange { m, min, max } => {
                write!(f, "m = {m} outside [{min}, {max}] (n_servers <= m <= n * n_servers)")
            }
            Violation::UnexpectedBackup { field, strategy } => {
                write!(f, "{field} must be 0 for strategy {strategy}")
            }
        }
    }
}
