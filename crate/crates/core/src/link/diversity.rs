use serde::Serialize;

use super::fm::FmConfig;
use super::params::LinkParams;
use super::pipeline::{FdmPlan, TrialOutcome};
use super::sweep::run_trials;
use super::DEFAULT_SEED;
use crate::error::{Error, Result};

/// Settings for a receiver-diversity experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityConfig {
    pub levels: u32,
    pub d_max: f64,
    pub fm: FmConfig,
    pub trials: u64,
    pub seed: u64,
}

impl Default for DiversityConfig {
    fn default() -> Self {
        DiversityConfig {
            levels: 73,
            d_max: 5.0,
            fm: FmConfig::default(),
            trials: 200,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdrRow {
    pub csnr_db: f64,
    pub sensors: u32,
    pub sdr_db: f64,
}

/// Signal-to-distortion ratio of both recovered sources, in dB.
pub(crate) fn sdr_db(outcomes: &[TrialOutcome]) -> f64 {
    let signal: f64 = outcomes.iter().map(|o| o.x1 * o.x1 + o.x2 * o.x2).sum();
    let distortion: f64 = outcomes.iter().map(|o| o.sq_err_x1() + o.sq_err_x2()).sum();
    10.0 * (signal / distortion).log10()
}

/// SDR for every `(csnr, sensor count)` pair, CSNR-major in input order.
///
/// Each sensor carries the same encoded value on its own sub-band with an
/// independent channel phase; the receiver adds the sub-band magnitude
/// spectra before peak detection. Trials are matched across rows.
pub fn sdr_vs_csnr(sensors: &[u32], csnr_db: &[f64], cfg: &DiversityConfig) -> Result<Vec<SdrRow>> {
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let link = LinkParams::new(cfg.d_max, cfg.levels)?;
    let plans = sensors
        .iter()
        .map(|&s| FdmPlan::new(s, &link, &cfg.fm))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(sensors.len() * csnr_db.len());
    for &csnr in csnr_db {
        for plan in &plans {
            let outcomes = run_trials(&link, &cfg.fm, plan, csnr, cfg.trials, cfg.seed)?;
            rows.push(SdrRow {
                csnr_db: csnr,
                sensors: plan.sensors,
                sdr_db: sdr_db(&outcomes),
            });
        }
    }
    Ok(rows)
}
