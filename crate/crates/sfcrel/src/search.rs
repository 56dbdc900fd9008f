//! Provisioning searches on top of the closed forms: how few backup copies
//! reach a reliability target, and how many sub-flows a fixed budget can
//! protect.

use thiserror::Error;

use crate::analytic::{evaluate, AnalyticError};
use crate::model::{BackupSpec, ChainSpec, ReliabilityParams, Scenario, Strategy, MAX_COUNT};
use crate::overhead::{utilization, Utilization};

/// Outcome of a minimal-provisioning search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProvisioningResult {
    /// Smallest per-server backup copy count meeting the target.
    pub sigma_min: u32,
    /// Total backup chain copies reserved at `sigma_min`.
    pub sigma_total: u32,
    /// Success probability achieved at `sigma_min`.
    pub achieved: f64,
    /// Utilization ratio at `sigma_min`.
    pub omega: Utilization,
    /// Minimality witness: the (sub-target) value at `sigma_min - 1`, or
    /// `None` when `sigma_min` is 0.
    pub witness_below: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    /// The target stays out of reach for every admissible backup count; the
    /// best value found (the plateau of the success curve at the provisioning
    /// cap) is reported.
    #[error("target {target} infeasible: best achievable {best} at sigma = {at_sigma}")]
    Infeasible {
        target: f64,
        best: f64,
        at_sigma: u32,
    },
    /// The caller's fixed parameters never form a valid scenario, e.g. more
    /// backup than active servers at every candidate point.
    #[error("no valid scenario for the given parameters: {0}")]
    NoValidScenario(String),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

fn scenario_at_sigma(
    strategy: Strategy,
    params: ReliabilityParams,
    chain: &ChainSpec,
    m: u32,
    sigma: u32,
) -> Scenario {
    // Only the pooled strategy takes a backup-server count; the rest fix it
    // structurally and validate against a nonzero m.
    let m = if strategy == Strategy::Anbn { m } else { 0 };
    Scenario::new(strategy, params, chain.clone(), BackupSpec::new(sigma, m))
}

/// Finds the smallest backup copy count `sigma` whose success probability
/// reaches `target`, scanning upward from `sigma = 0`.
///
/// The scan is linear because a single evaluation is cheap and monotonicity
/// in `sigma` is a tested property of the formulas rather than an assumption
/// baked into the search. For the pooled strategy the caller fixes the
/// backup-server count `m`; other strategies ignore it. The scan stops at
/// the provisioning cap ([`MAX_COUNT`], tighter where validation caps the
/// per-type capacity); an unmet target is reported as infeasible together
/// with the best value reached.
pub fn min_sigma(
    strategy: Strategy,
    params: ReliabilityParams,
    chain: &ChainSpec,
    m: u32,
    target: f64,
) -> Result<ProvisioningResult, SearchError> {
    let mut below: Option<f64> = None;
    let mut best: Option<(u32, f64)> = None;
    for sigma in 0..=MAX_COUNT {
        let sc = scenario_at_sigma(strategy, params, chain, m, sigma);
        if sc.validate().is_err() {
            // Caps on sigma and derived capacities only tighten as sigma
            // grows, so the first invalid point ends the scan.
            break;
        }
        let value = evaluate(&sc)?.value();
        if value >= target {
            return Ok(ProvisioningResult {
                sigma_min: sigma,
                sigma_total: sc.total_backup_subchains(),
                achieved: value,
                omega: utilization(&sc),
                witness_below: below,
            });
        }
        below = Some(value);
        best = Some(match best {
            Some((s, b)) if b >= value => (s, b),
            _ => (sigma, value),
        });
    }
    match best {
        Some((at_sigma, best)) => Err(SearchError::Infeasible {
            target,
            best,
            at_sigma,
        }),
        None => Err(SearchError::NoValidScenario(format!(
            "{strategy} with m = {m} admits no sigma in 0..={MAX_COUNT}"
        ))),
    }
}

/// Finds the largest sub-flow count `n <= MAX_COUNT` that a fixed backup
/// budget (`sigma` copies per backup server, `m` backup servers for the
/// pooled strategy) still protects at `target`, or 0 if none.
///
/// Candidate values of `n` where the budget cannot form a valid scenario
/// (e.g. `m` exceeding the active server count at small `n`) are skipped.
pub fn max_protected_n(
    strategy: Strategy,
    params: ReliabilityParams,
    psi_total: u32,
    n_servers: u32,
    sigma: u32,
    m: u32,
    target: f64,
) -> Result<u32, SearchError> {
    let mut best = 0;
    for n in 1..=MAX_COUNT {
        let sc = Scenario::new(
            strategy,
            params,
            ChainSpec::with_even_split(n, psi_total, n_servers),
            BackupSpec::new(sigma, m),
        );
        if sc.validate().is_err() {
            continue;
        }
        if evaluate(&sc)?.value() >= target {
            best = n;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_params() -> ReliabilityParams {
        ReliabilityParams::new(0.999, 0.999, 0.9, 0.9)
    }

    #[test]
    fn minimal_backup_for_single_subflow() {
        let chain = ChainSpec::with_even_split(1, 3, 3);
        let r = min_sigma(Strategy::Asbn, table_params(), &chain, 0, 0.999).unwrap();
        assert_eq!(r.sigma_min, 3);
        assert_eq!(r.sigma_total, 3);
        assert_eq!(r.omega.value(), 0.25);
        assert!(r.achieved >= 0.999);
        // Minimality witness: one copy fewer misses the target.
        assert!(r.witness_below.unwrap() < 0.999);
    }

    #[test]
    fn minimal_backup_scales_with_parallelism() {
        let chain = ChainSpec::with_even_split(3, 3, 3);
        let r = min_sigma(Strategy::Asbn, table_params(), &chain, 0, 0.999).unwrap();
        assert_eq!(r.sigma_min, 5);
        assert_eq!(r.omega.value(), 0.375);
    }

    #[test]
    fn zero_sigma_when_target_is_trivial() {
        let chain = ChainSpec::with_even_split(1, 2, 2);
        let r = min_sigma(Strategy::Asbs, table_params(), &chain, 0, 0.5).unwrap();
        assert_eq!(r.sigma_min, 0);
        assert_eq!(r.witness_below, None);
        assert_eq!(r.omega.value(), 1.0);
    }

    #[test]
    fn no_backup_strategy_reports_infeasible() {
        let chain = ChainSpec::with_even_split(2, 3, 3);
        let err = min_sigma(
            Strategy::CvNone,
            ReliabilityParams::new(0.9, 1.0, 0.99, 1.0),
            &chain,
            0,
            0.999,
        )
        .unwrap_err();
        match err {
            SearchError::Infeasible { best, at_sigma, .. } => {
                assert!(best < 0.999);
                assert_eq!(at_sigma, 0);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn raising_the_target_never_lowers_sigma() {
        let chain = ChainSpec::with_even_split(4, 3, 1);
        let lo = min_sigma(Strategy::Anbs, table_params(), &chain, 0, 0.99)
            .unwrap()
            .sigma_min;
        let hi = min_sigma(Strategy::Anbs, table_params(), &chain, 0, 0.999)
            .unwrap()
            .sigma_min;
        assert!(hi >= lo);
        // A single shared backup server plateaus below four nines here.
        let err = min_sigma(Strategy::Anbs, table_params(), &chain, 0, 0.9999).unwrap_err();
        assert!(matches!(err, SearchError::Infeasible { best, .. } if best > 0.999));
    }

    #[test]
    fn budget_protection_limits() {
        let n = max_protected_n(Strategy::Anbn, table_params(), 3, 1, 4, 2, 0.999).unwrap();
        assert_eq!(n, 15);
        let n = max_protected_n(Strategy::Anbs, table_params(), 3, 1, 8, 0, 0.999).unwrap();
        assert_eq!(n, 9);
        // Unreachable target.
        let n = max_protected_n(Strategy::Anbs, table_params(), 3, 1, 8, 0, 1.0 - 1e-15).unwrap();
        assert_eq!(n, 0);
    }

    #[test]
    fn budget_protection_grows_with_sigma() {
        let small = max_protected_n(Strategy::Anbs, table_params(), 3, 1, 4, 0, 0.999).unwrap();
        let large = max_protected_n(Strategy::Anbs, table_params(), 3, 1, 8, 0, 0.999).unwrap();
        assert!(large >= small);
    }
}
