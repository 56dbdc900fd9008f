//! The one output record every subcommand emits, plus its CSV and JSON
//! serializations.

use std::io::{self, Write};

use serde::Serialize;

use sfcrel::model::Scenario;
use sfcrel::{utilization, Estimate};

/// One evaluated scenario. Column order is stable and part of the external
/// interface; downstream plotting scripts index into it.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub strategy: String,
    pub n: u32,
    pub psi_total: u32,
    pub n_servers: u32,
    pub sigma: u32,
    pub m: u32,
    pub phi: f64,
    pub phi_r: f64,
    pub upsilon: f64,
    pub upsilon_r: f64,
    pub analytic: f64,
    pub mc_mean: Option<f64>,
    pub mc_ci_low: Option<f64>,
    pub mc_ci_high: Option<f64>,
    pub omega: f64,
    pub normalized: Option<f64>,
}

pub const CSV_HEADER: &str = "strategy,n,psi_total,n_servers,sigma,m,phi,phi_r,\
                              upsilon,upsilon_r,analytic,mc_mean,mc_ci_low,mc_ci_high,\
                              omega,normalized";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl ResultRow {
    pub fn new(sc: &Scenario, analytic: f64) -> ResultRow {
        // Re-check the range contract at the output boundary; a value outside
        // [0, 1] can only mean a bug upstream, never valid data.
        assert!(
            (0.0..=1.0).contains(&analytic),
            "success probability {analytic} out of range"
        );
        ResultRow {
            strategy: sc.strategy.token().to_string(),
            n: sc.chain.n,
            psi_total: sc.chain.psi_total,
            n_servers: sc.chain.n_servers,
            sigma: sc.backup.sigma,
            m: sc.backup.m,
            phi: sc.params.phi,
            phi_r: sc.params.phi_r,
            upsilon: sc.params.upsilon,
            upsilon_r: sc.params.upsilon_r,
            analytic,
            mc_mean: None,
            mc_ci_low: None,
            mc_ci_high: None,
            omega: utilization(sc).value(),
            normalized: None,
        }
    }

    pub fn with_estimate(mut self, est: &Estimate) -> ResultRow {
        self.mc_mean = Some(est.mean);
        self.mc_ci_low = Some(est.ci_low);
        self.mc_ci_high = Some(est.ci_high);
        self
    }

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.strategy,
            self.n,
            self.psi_total,
            self.n_servers,
            self.sigma,
            self.m,
            csv_float(self.phi),
            csv_float(self.phi_r),
            csv_float(self.upsilon),
            csv_float(self.upsilon_r),
            csv_float(self.analytic),
            csv_opt(self.mc_mean),
            csv_opt(self.mc_ci_low),
            csv_opt(self.mc_ci_high),
            csv_float(self.omega),
            csv_opt(self.normalized),
        )
    }
}

/// 17 significant digits: enough to round-trip any f64 bit pattern exactly.
fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_opt(x: Option<f64>) -> String {
    x.map(csv_float).unwrap_or_default()
}

/// Writes the whole dataset. CSV always starts with the header row; JSON is a
/// pretty-printed array (absent values become `null`).
pub fn write_rows(rows: &[ResultRow], format: Format, w: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for row in rows {
                writeln!(w, "{}", row.csv_line())?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, rows).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(())
}
