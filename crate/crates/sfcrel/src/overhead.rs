//! Resource utilization: the share of reserved VNF instances that do active
//! work. Reserving backups buys reliability at the cost of idle capacity;
//! this module quantifies that cost.

use crate::model::{Scenario, Strategy};

/// Ratio of required (active) VNFs to all reserved (active + backup) VNFs,
/// in `(0, 1]`. Equals 1 exactly when no backup chain copies are reserved.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Utilization(f64);

impl Utilization {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Utilization> for f64 {
    fn from(u: Utilization) -> f64 {
        u.0
    }
}

/// Computes the utilization ratio for a validated scenario.
///
/// Every chain stage reserves the same proportion of backups, so the chain
/// length cancels and the ratio only depends on the sub-flow and backup-copy
/// counts: `n / (n + sigma)` for the single-group backup layouts,
/// `n * n_servers / (n * n_servers + m * sigma)` for the pooled layout, and
/// 1 for the no-backup placements.
pub fn utilization(sc: &Scenario) -> Utilization {
    let n = f64::from(sc.chain.n);
    let sigma = f64::from(sc.backup.sigma);
    let value = match sc.strategy {
        Strategy::CvNone | Strategy::DvNone => 1.0,
        Strategy::Asbn | Strategy::Asbs | Strategy::Anbs | Strategy::VnfOnly => n / (n + sigma),
        Strategy::Anbn => {
            let active = n * f64::from(sc.chain.n_servers);
            active / (active + f64::from(sc.backup.m) * sigma)
        }
    };
    Utilization(value)
}
