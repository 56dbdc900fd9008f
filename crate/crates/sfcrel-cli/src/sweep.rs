//! Flat-text sweep descriptions and their execution.
//!
//! A sweep file starts with global `key = value` defaults, followed by one
//! `[strategy]` section per emitted curve; a section inherits every global
//! value and may override any of them. The same strategy may appear in
//! several sections (e.g. one curve per sub-flow count). Rows come out in
//! declared section order, sweep points ascending.
//!
//! ```text
//! # normalized service success vs. chain length
//! phi = 0.999
//! phi_r = 0.999
//! upsilon = 0.9
//! upsilon_r = 0.9
//! N = 1
//! vary = psi
//! from = 1
//! to = 8
//! step = 1
//! couple = sigma=n
//! normalize = serial
//!
//! [asbn]
//! n = 6
//! ```
//!
//! Keys: the scenario fields `n`, `psi`, `N`, `sigma`, `m`, `phi`, `phi_r`,
//! `upsilon`, `upsilon_r`; the sweep controls `vary` (one of `n`, `psi`,
//! `sigma`, `m`), `from`, `to`, `step` (inclusive integer range; an empty
//! range emits no rows); `couple` (`none`, `sigma=n`, or `omega=0.5`);
//! `normalize` (`none`, `serial`, or `no-backup`); and optional `trials` and
//! `seed`, which add Monte Carlo columns to every row. `#` starts a comment.
//!
//! Coupling rules re-derive the backup provisioning at every point: `sigma=n`
//! reserves one backup copy per sub-flow, `omega=0.5` sizes the reserve so
//! utilization is exactly one half (for the pooled strategy that means
//! `m * sigma = n * N`, which must divide evenly). Under either rule the
//! pooled strategy clamps `m` to the active server count so that small-`n`
//! points stay valid.
//!
//! `normalize = serial` divides each row by the same section re-evaluated at
//! `n = 1` (couplings re-applied); `normalize = no-backup` divides by the
//! matching unprotected baseline: the centralized one for centralized
//! strategies, the distributed one for distributed strategies, a zero-backup
//! chain for the chain-only model.

use std::fs;
use std::path::Path;

use sfcrel::analytic::evaluate;
use sfcrel::estimate;
use sfcrel::model::{BackupSpec, ChainSpec, ReliabilityParams, Scenario, Strategy};

use crate::row::ResultRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Vary {
    N,
    Psi,
    Sigma,
    M,
}

impl Vary {
    fn name(self) -> &'static str {
        match self {
            Vary::N => "n",
            Vary::Psi => "psi",
            Vary::Sigma => "sigma",
            Vary::M => "m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Couple {
    #[default]
    None,
    SigmaEqualsN,
    OmegaHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum Normalize {
    #[default]
    None,
    Serial,
    NoBackup,
}

/// Every key a sweep file can set; sections start from the global values.
#[derive(Debug, Clone)]
struct Settings {
    n: u32,
    psi: u32,
    n_servers: u32,
    sigma: u32,
    m: u32,
    phi: f64,
    phi_r: f64,
    upsilon: f64,
    upsilon_r: f64,
    vary: Option<Vary>,
    from: u32,
    to: u32,
    step: u32,
    couple: Couple,
    normalize: Normalize,
    trials: Option<u64>,
    seed: u64,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings {
            n: 1,
            psi: 1,
            n_servers: 1,
            sigma: 0,
            m: 0,
            phi: 1.0,
            phi_r: 1.0,
            upsilon: 1.0,
            upsilon_r: 1.0,
            vary: None,
            from: 1,
            to: 1,
            step: 1,
            couple: Couple::None,
            normalize: Normalize::None,
            trials: None,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
struct Section {
    strategy: Strategy,
    settings: Settings,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    sections: Vec<Section>,
}

pub fn load(path: &Path) -> Result<SweepConfig, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<SweepConfig, String> {
    let mut globals = Settings::default();
    let mut sections: Vec<Section> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(token) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let strategy = parse_strategy(token.trim())
                .ok_or_else(|| format!("line {line_no}: unknown strategy [{token}]"))?;
            sections.push(Section {
                strategy,
                settings: globals.clone(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {line_no}: expected key = value, got {line:?}"))?;
        let target = match sections.last_mut() {
            Some(section) => &mut section.settings,
            None => &mut globals,
        };
        apply(target, key.trim(), value.trim()).map_err(|e| format!("line {line_no}: {e}"))?;
    }

    if sections.is_empty() {
        return Err("no [strategy] section declared".to_string());
    }
    for section in &sections {
        if section.settings.vary.is_none() {
            return Err(format!(
                "section [{}] has no vary parameter (set vary = n|psi|sigma|m)",
                section.strategy
            ));
        }
    }
    Ok(SweepConfig { sections })
}

fn parse_strategy(token: &str) -> Option<Strategy> {
    Strategy::ALL.into_iter().find(|s| s.token() == token)
}

fn apply(s: &mut Settings, key: &str, value: &str) -> Result<(), String> {
    fn int(value: &str) -> Result<u32, String> {
        value
            .parse()
            .map_err(|_| format!("expected a non-negative integer, got {value:?}"))
    }
    fn float(value: &str) -> Result<f64, String> {
        value
            .parse()
            .map_err(|_| format!("expected a number, got {value:?}"))
    }
    match key {
        "n" => s.n = int(value)?,
        "psi" => s.psi = int(value)?,
        "N" => s.n_servers = int(value)?,
        "sigma" => s.sigma = int(value)?,
        "m" => s.m = int(value)?,
        "phi" => s.phi = float(value)?,
        "phi_r" => s.phi_r = float(value)?,
        "upsilon" => s.upsilon = float(value)?,
        "upsilon_r" => s.upsilon_r = float(value)?,
        "vary" => {
            s.vary = Some(match value {
                "n" => Vary::N,
                "psi" => Vary::Psi,
                "sigma" => Vary::Sigma,
                "m" => Vary::M,
                _ => return Err(format!("vary must be n, psi, sigma or m, got {value:?}")),
            })
        }
        "from" => s.from = int(value)?,
        "to" => s.to = int(value)?,
        "step" => {
            s.step = int(value)?;
            if s.step == 0 {
                return Err("step must be at least 1".to_string());
            }
        }
        "couple" => {
            s.couple = match value {
                "none" => Couple::None,
                "sigma=n" => Couple::SigmaEqualsN,
                "omega=0.5" => Couple::OmegaHalf,
                _ => {
                    return Err(format!(
                        "couple must be none, sigma=n or omega=0.5, got {value:?}"
                    ))
                }
            }
        }
        "normalize" => {
            s.normalize = match value {
                "none" => Normalize::None,
                "serial" => Normalize::Serial,
                "no-backup" => Normalize::NoBackup,
                _ => {
                    return Err(format!(
                        "normalize must be none, serial or no-backup, got {value:?}"
                    ))
                }
            }
        }
        "trials" => {
            s.trials = Some(
                value
                    .parse()
                    .map_err(|_| format!("expected a trial count, got {value:?}"))?,
            )
        }
        "seed" => {
            s.seed = value
                .parse()
                .map_err(|_| format!("expected a seed, got {value:?}"))?
        }
        _ => return Err(format!("unknown key {key:?}")),
    }
    Ok(())
}

/// Builds the scenario for one resolved point: applies the coupling rule,
/// then validates.
fn build_scenario(strategy: Strategy, s: &Settings) -> Result<Scenario, String> {
    let mut sigma = s.sigma;
    let mut m = s.m;
    match s.couple {
        Couple::None => {}
        Couple::SigmaEqualsN => {
            sigma = s.n;
            if strategy == Strategy::Anbn {
                m = m.min(s.n * s.n_servers);
            }
        }
        Couple::OmegaHalf => {
            if strategy == Strategy::Anbn {
                m = m.min(s.n * s.n_servers);
                if m == 0 {
                    return Err("omega=0.5 coupling needs m >= 1 for the pooled strategy".into());
                }
                let active = s.n * s.n_servers;
                if active % m != 0 {
                    return Err(format!(
                        "omega=0.5 coupling needs m to divide n*N (m={m}, n*N={active})"
                    ));
                }
                sigma = active / m;
            } else {
                sigma = s.n;
            }
        }
    }
    let params = ReliabilityParams::new(s.phi, s.phi_r, s.upsilon, s.upsilon_r);
    let chain = ChainSpec::with_even_split(s.n, s.psi, s.n_servers);
    let sc = Scenario::new(strategy, params, chain, BackupSpec::new(sigma, m));
    sc.validate().map_err(|violations| {
        violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    })?;
    Ok(sc)
}

/// The unprotected counterpart a `normalize = no-backup` row is divided by.
fn no_backup_strategy(strategy: Strategy) -> Strategy {
    match strategy {
        Strategy::CvNone | Strategy::Asbn | Strategy::Asbs => Strategy::CvNone,
        Strategy::DvNone | Strategy::Anbs | Strategy::Anbn => Strategy::DvNone,
        Strategy::VnfOnly => Strategy::VnfOnly,
    }
}

fn baseline_value(strategy: Strategy, s: &Settings) -> Result<f64, String> {
    let baseline = match s.normalize {
        Normalize::None => return Err("no baseline requested".into()),
        Normalize::Serial => {
            let mut serial = s.clone();
            serial.n = 1;
            build_scenario(strategy, &serial)?
        }
        Normalize::NoBackup => {
            let params = ReliabilityParams::new(s.phi, s.phi_r, s.upsilon, s.upsilon_r);
            let chain = ChainSpec::with_even_split(s.n, s.psi, s.n_servers);
            let sc = Scenario::new(
                no_backup_strategy(strategy),
                params,
                chain,
                BackupSpec::none(),
            );
            sc.validate().map_err(|violations| {
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            })?;
            sc
        }
    };
    let value = evaluate(&baseline).map_err(|e| e.to_string())?.value();
    if value == 0.0 {
        return Err("normalization baseline has zero success probability".into());
    }
    Ok(value)
}

/// Executes every section in order and returns the buffered rows.
pub fn run(cfg: &SweepConfig) -> Result<Vec<ResultRow>, String> {
    let mut rows = Vec::new();
    for section in &cfg.sections {
        let base = &section.settings;
        let vary = base.vary.expect("checked during parse");
        let mut v = base.from;
        while v <= base.to {
            let mut point = base.clone();
            match vary {
                Vary::N => point.n = v,
                Vary::Psi => point.psi = v,
                Vary::Sigma => point.sigma = v,
                Vary::M => point.m = v,
            }
            let context = format!("[{}] at {}={v}", section.strategy, vary.name());
            let sc =
                build_scenario(section.strategy, &point).map_err(|e| format!("{context}: {e}"))?;
            let analytic = evaluate(&sc)
                .map_err(|e| format!("{context}: {e}"))?
                .value();
            let mut row = ResultRow::new(&sc, analytic);
            if let Some(trials) = point.trials {
                row = row.with_estimate(&estimate(&sc, trials, point.seed));
            }
            if point.normalize != Normalize::None {
                let base_value = baseline_value(section.strategy, &point)
                    .map_err(|e| format!("{context}: {e}"))?;
                row.normalized = Some(analytic / base_value);
            }
            rows.push(row);
            match v.checked_add(point.step) {
                Some(next) => v = next,
                None => break,
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_globals_sections_and_comments() {
        let cfg = parse(
            "# demo\nphi = 0.9\nvary = sigma\nfrom = 0\nto = 2\n\n[asbn]\nn = 2  # inline\n[asbn]\nn = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.sections.len(), 2);
        assert_eq!(cfg.sections[0].settings.n, 2);
        assert_eq!(cfg.sections[1].settings.n, 3);
        assert!((cfg.sections[1].settings.phi - 0.9).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_keys_and_strategies() {
        assert!(parse("bogus = 1\n[asbn]\nvary = n\n")
            .unwrap_err()
            .contains("line 1"));
        assert!(parse("[warm-spare]\nvary = n\n")
            .unwrap_err()
            .contains("unknown strategy"));
        assert!(parse("vary = n\n").unwrap_err().contains("no [strategy]"));
    }

    #[test]
    fn empty_range_yields_no_rows() {
        let cfg = parse("vary = n\nfrom = 1\nto = 0\n[asbn]\nsigma = 1\npsi = 1\n").unwrap();
        assert!(run(&cfg).unwrap().is_empty());
    }

    #[test]
    fn sigma_coupling_tracks_n_and_clamps_pool() {
        let cfg = parse("vary = n\nfrom = 1\nto = 3\ncouple = sigma=n\npsi = 2\nm = 2\n[anbn]\n")
            .unwrap();
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].sigma, rows[0].m), (1, 1));
        assert_eq!((rows[2].sigma, rows[2].m), (3, 2));
    }

    #[test]
    fn half_utilization_coupling_requires_divisibility() {
        let cfg = parse("vary = n\nfrom = 3\nto = 3\ncouple = omega=0.5\npsi = 3\nm = 2\n[anbn]\n")
            .unwrap();
        let err = run(&cfg).unwrap_err();
        assert!(err.contains("[anbn] at n=3"), "{err}");
        assert!(err.contains("divide"), "{err}");
    }

    #[test]
    fn serial_normalization_is_one_at_n_equals_1() {
        let cfg = parse(
            "vary = psi\nfrom = 1\nto = 3\ncouple = sigma=n\nnormalize = serial\n\
             phi = 0.999\nphi_r = 0.999\nupsilon = 0.9\nupsilon_r = 0.9\n[asbs]\nn = 1\n",
        )
        .unwrap();
        for row in run(&cfg).unwrap() {
            assert_eq!(row.normalized, Some(1.0));
        }
    }
}
