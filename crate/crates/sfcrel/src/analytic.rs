//! Closed-form service-success probabilities.
//!
//! Every formula composes the same two primitives:
//!
//! * [`binom_sum`] — the probability that the number of failures among `K`
//!   independent components lands in an index window, with the empty-window
//!   convention (out-of-range windows contribute 0).
//! * `covered_mix` — the probability, for one VNF type, that `i` of the
//!   `n_risk` active copies fail *and* the backup pool covers those `i`
//!   failures on top of `reserved` copies already claimed by failed servers.
//!
//! All binomial coefficients come from an exact integer Pascal table (orders
//! are capped at [`MAX_COUNT`] by scenario validation), and sums accumulate
//! same-sign terms in ascending index order, so round-off stays orders of
//! magnitude below the crate's 1e-12 comparison tolerances.

use std::sync::OnceLock;

use thiserror::Error;

use crate::model::{Scenario, Strategy, MAX_COUNT};

/// A probability produced by a closed-form evaluation.
///
/// Values may drift a few ulps outside `[0, 1]` through round-off; drift up
/// to [`SuccessProbability::CLAMP_TOLERANCE`] is clamped silently, anything
/// larger is reported as an internal-consistency error rather than masked.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SuccessProbability(f64);

impl SuccessProbability {
    /// Largest tolerated excursion outside `[0, 1]` before an evaluation is
    /// considered broken instead of merely rounded.
    pub const CLAMP_TOLERANCE: f64 = 1e-9;

    pub(crate) fn from_raw(value: f64) -> Result<Self, AnalyticError> {
        if value.is_nan() || value < -Self::CLAMP_TOLERANCE || value > 1.0 + Self::CLAMP_TOLERANCE {
            return Err(AnalyticError::OutOfRange { value });
        }
        Ok(SuccessProbability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<SuccessProbability> for f64 {
    fn from(p: SuccessProbability) -> f64 {
        p.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    /// A formula produced a value outside `[0, 1]` by more than the clamp
    /// tolerance — an implementation bug, never a property of valid input.
    #[error("formula produced {value}, outside [0, 1] beyond round-off")]
    OutOfRange { value: f64 },
}

/// Exact Pascal triangle up to order [`MAX_COUNT`]; `C(64, 32) < 2^63` so
/// every entry is an exact `u64`.
fn pascal() -> &'static [[u64; 65]; 65] {
    static TABLE: OnceLock<[[u64; 65]; 65]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0u64; 65]; 65];
        for k in 0..=64 {
            t[k][0] = 1;
            for i in 1..=k {
                t[k][i] = t[k - 1][i - 1] + if i <= k - 1 { t[k - 1][i] } else { 0 };
            }
        }
        t
    })
}

/// Binomial coefficient `C(k, i)` as an exact integer converted to `f64`.
///
/// # Panics
/// If `k` exceeds [`MAX_COUNT`] (scenario validation rules that out).
fn binom(k: u32, i: u32) -> f64 {
    assert!(k <= MAX_COUNT, "binomial order {k} above cap {MAX_COUNT}");
    if i > k {
        return 0.0;
    }
    pascal()[k as usize][i as usize] as f64
}

/// Probability that the failure count among `k` independent components, each
/// failing with probability `1 - p`, falls in `[lo, hi]`:
/// `sum_{i = max(lo,0)}^{min(hi,k)} C(k,i) (1-p)^i p^(k-i)`.
///
/// Windows that miss `[0, k]` entirely yield 0 (empty-sum convention); the
/// full window `[0, k]` yields 1 up to round-off.
///
/// # Panics
/// If `k` exceeds [`MAX_COUNT`].
pub fn binom_sum(k: u32, lo: i64, hi: i64, p: f64) -> f64 {
    assert!(k <= MAX_COUNT, "binomial order {k} above cap {MAX_COUNT}");
    let lo = lo.max(0);
    let hi = hi.min(k as i64);
    if lo > hi {
        return 0.0;
    }
    let q = 1.0 - p;
    let mut total = 0.0;
    for i in lo..=hi {
        total += binom(k, i as u32) * q.powi(i as i32) * p.powi((k as i64 - i) as i32);
    }
    total
}

/// For one VNF type: probability that `i` of the `n_risk` active copies on
/// up servers fail and the backup pool of `cap` copies keeps at least
/// `reserved + i` of them working, summed over every coverable `i`.
/// `reserved` counts copies already claimed by failed servers.
fn covered_mix(n_risk: u32, cap: u32, reserved: u32, u: f64, ur: f64) -> f64 {
    let imax = (n_risk as i64).min(cap as i64 - reserved as i64);
    if imax < 0 {
        return 0.0;
    }
    let qu = 1.0 - u;
    let mut total = 0.0;
    for i in 0..=imax {
        let fail_i =
            binom(n_risk, i as u32) * qu.powi(i as i32) * u.powi((n_risk as i64 - i) as i32);
        total += fail_i * binom_sum(cap, 0, cap as i64 - reserved as i64 - i, ur);
    }
    total
}

/// Server-failure-free model: each VNF type has `n + sigma` interchangeable
/// copies of reliability `upsilon` and tolerates up to `sigma` failures;
/// the chain of `psi_total` types succeeds when every type does.
pub fn success_vnf_only(
    upsilon: f64,
    n: u32,
    sigma: u32,
    psi_total: u32,
) -> Result<SuccessProbability, AnalyticError> {
    let per_type = binom_sum(sigma + n, 0, sigma as i64, upsilon);
    SuccessProbability::from_raw(per_type.powi(psi_total as i32))
}

/// Centralized placement, no backups: all `psi_total` stage servers and all
/// `n` copies on each must be up.
pub fn success_cv_none(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    SuccessProbability::from_raw(raw_cv_none(sc))
}

fn raw_cv_none(sc: &Scenario) -> f64 {
    let p = &sc.params;
    (p.phi * p.upsilon.powi(sc.chain.n as i32)).powi(sc.chain.psi_total as i32)
}

/// Centralized active placement with one dedicated backup server per stage.
///
/// Per stage, one of: all `n` active copies work; the active server is up and
/// the `i >= 1` failed copies are covered by working copies on the stage's
/// backup server; the active server is down and the backup server supplies at
/// least `n` working copies. The chain multiplies the stage bracket
/// `psi_total` times.
pub fn success_asbn(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    let p = &sc.params;
    let (n, sigma) = (sc.chain.n, sc.backup.sigma);
    let all_up = p.upsilon.powi(n as i32);
    let bracket = p.phi * all_up
        + p.phi * p.phi_r * (covered_mix(n, sigma, 0, p.upsilon, p.upsilon_r) - all_up)
        + (1.0 - p.phi) * p.phi_r * binom_sum(sigma, 0, sigma as i64 - n as i64, p.upsilon_r);
    SuccessProbability::from_raw(bracket.powi(sc.chain.psi_total as i32))
}

/// Centralized active placement with one shared backup server.
///
/// Three exclusive cases, with the shared server's reliability applied once:
/// nothing fails anywhere; every stage server is up and each stage's VNF
/// failures are covered by the shared server's per-type copies; `f >= 1`
/// stage servers are down, each consuming `n` backup copies of its type,
/// while the surviving stages are covered as in the mixed case.
pub fn success_asbs(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    let p = &sc.params;
    let (n, psi, sigma) = (sc.chain.n, sc.chain.psi_total, sc.backup.sigma);
    let s = covered_mix(n, sigma, 0, p.upsilon, p.upsilon_r);
    let down = binom_sum(sigma, 0, sigma as i64 - n as i64, p.upsilon_r);
    let no_fail = p.phi.powi(psi as i32) * p.upsilon.powi((n * psi) as i32);

    let mut r = no_fail;
    r += p.phi.powi(psi as i32) * p.phi_r * (s.powi(psi as i32) - p.upsilon.powi((n * psi) as i32));
    let mut servers_down = 0.0;
    for f in 1..=psi {
        servers_down += binom(psi, f)
            * p.phi.powi((psi - f) as i32)
            * (1.0 - p.phi).powi(f as i32)
            * down.powi(f as i32)
            * s.powi((psi - f) as i32);
    }
    r += p.phi_r * servers_down;
    SuccessProbability::from_raw(r)
}

/// Distributed placement, no backups: all `n * n_servers` servers and all
/// `n * psi_total` VNF copies must be up.
pub fn success_dv_none(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    SuccessProbability::from_raw(raw_dv_none(sc))
}

fn raw_dv_none(sc: &Scenario) -> f64 {
    let p = &sc.params;
    let mut per_flow = p.phi.powi(sc.chain.n_servers as i32);
    for &pk in &sc.chain.psi_split {
        per_flow *= p.upsilon.powi(pk as i32);
    }
    per_flow.powi(sc.chain.n as i32)
}

/// Per chain position with `psi_k` VNF types and a per-type backup capacity
/// `cap`: returns `(a, bc)` where `a` is the zero-demand probability (all `n`
/// position servers and their copies up) and `bc` the probability that a
/// non-zero demand is fully covered, given enough working backup copies.
fn position_terms(phi: f64, u: f64, ur: f64, n: u32, cap: u32, psi_k: u32) -> (f64, f64) {
    let a = (phi * u.powi(psi_k as i32)).powi(n as i32);
    let s = covered_mix(n, cap, 0, u, ur);
    let b = phi.powi(n as i32) * (s.powi(psi_k as i32) - u.powi((psi_k * n) as i32));
    let mut c = 0.0;
    for f in 1..=n.min(cap) {
        c += binom(n, f)
            * phi.powi((n - f) as i32)
            * (1.0 - phi).powi(f as i32)
            * covered_mix(n - f, cap, f, u, ur).powi(psi_k as i32);
    }
    (a, b + c)
}

/// Distributed active placement with one shared backup server.
///
/// Per position, demand for a type is the count of failed position servers
/// plus failed copies on up servers; it must be covered by the shared
/// server's working copies of that type. Because a single physical server
/// backs every position, its reliability factors in exactly once:
/// `prod(a_k) + phi_r * (prod(a_k + bc_k) - prod(a_k))`.
pub fn success_anbs(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    let p = &sc.params;
    let (n, sigma) = (sc.chain.n, sc.backup.sigma);
    let mut prod_a = 1.0;
    let mut prod_abc = 1.0;
    for &pk in &sc.chain.psi_split {
        let (a, bc) = position_terms(p.phi, p.upsilon, p.upsilon_r, n, sigma, pk);
        prod_a *= a;
        prod_abc *= a + bc;
    }
    SuccessProbability::from_raw(prod_a + p.phi_r * (prod_abc - prod_a))
}

/// Distributed active placement with `m` backup servers, `m / n_servers` per
/// chain position.
///
/// Per position: either nothing fails, or — summing over `l` down backup
/// servers in the position's group — the remaining pooled capacity
/// `(m/n_servers - l) * sigma` per type covers the demand (failed position
/// servers plus failed copies on up servers). Positions are independent, so
/// the chain multiplies the position brackets.
pub fn success_anbn(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    let p = &sc.params;
    let (n, sigma) = (sc.chain.n, sc.backup.sigma);
    let group = if sc.chain.n_servers == 0 {
        0
    } else {
        sc.backup.m / sc.chain.n_servers
    };
    let mut r = 1.0;
    for &pk in &sc.chain.psi_split {
        let a = (p.phi * p.upsilon.powi(pk as i32)).powi(n as i32);
        let mut covered = 0.0;
        for l in 0..group {
            let cap = (group - l) * sigma;
            let (_, bc) = position_terms(p.phi, p.upsilon, p.upsilon_r, n, cap, pk);
            covered += binom(group, l)
                * p.phi_r.powi((group - l) as i32)
                * (1.0 - p.phi_r).powi(l as i32)
                * bc;
        }
        r *= a + covered;
    }
    SuccessProbability::from_raw(r)
}

/// Routes a validated scenario to its strategy's closed form.
pub fn evaluate(sc: &Scenario) -> Result<SuccessProbability, AnalyticError> {
    match sc.strategy {
        Strategy::CvNone => success_cv_none(sc),
        Strategy::DvNone => success_dv_none(sc),
        Strategy::Asbn => success_asbn(sc),
        Strategy::Asbs => success_asbs(sc),
        Strategy::Anbn => success_anbn(sc),
        Strategy::Anbs => success_anbs(sc),
        Strategy::VnfOnly => success_vnf_only(
            sc.params.upsilon,
            sc.chain.n,
            sc.backup.sigma,
            sc.chain.psi_total,
        ),
    }
}
