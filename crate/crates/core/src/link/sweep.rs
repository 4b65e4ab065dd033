use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::fm::FmConfig;
use super::params::LinkParams;
use super::peak::PeakDetector;
use super::pipeline::{simulate_trial, FdmPlan, TrialOutcome};
use super::DEFAULT_SEED;
use crate::error::{Error, Result};

/// Settings shared by every row of an MSE-vs-levels sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    /// Amplitude limit of the encoded voltage.
    pub d_max: f64,
    pub fm: FmConfig,
    /// Channel SNR; `+inf` disables noise.
    pub snr_db: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            d_max: 5.0,
            fm: FmConfig::default(),
            snr_db: -20.0,
            trials: 200,
            seed: DEFAULT_SEED,
        }
    }
}

/// Mean square errors of both sources at one level count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub levels: u32,
    pub trials: u64,
    pub mse_x1: f64,
    pub mse_x2: f64,
    pub mse_sum: f64,
}

/// Runs `trials` independent trials in parallel and returns them in trial order.
pub(crate) fn run_trials(
    link: &LinkParams,
    fm: &FmConfig,
    plan: &FdmPlan,
    snr_db: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialOutcome>> {
    let fft = FftPlanner::new().plan_fft_forward(fm.fft_size);
    (0..trials)
        .into_par_iter()
        .map_init(
            || PeakDetector::with_plan(fft.clone(), fm),
            |det, t| simulate_trial(link, fm, plan, snr_db, seed, t, det),
        )
        .collect()
}

/// MSE of both sources for each level count in `levels`.
///
/// Rows come back in input order and are bit-identical for identical inputs:
/// trial errors are summed sequentially in trial order.
pub fn mse_sweep(levels: &[u32], cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.fm.validate()?;
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    levels
        .iter()
        .map(|&l| {
            let link = LinkParams::new(cfg.d_max, l)?;
            let plan = FdmPlan::new(1, &link, &cfg.fm)?;
            let outcomes = run_trials(&link, &cfg.fm, &plan, cfg.snr_db, cfg.trials, cfg.seed)?;
            let n = cfg.trials as f64;
            let mse_x1 = outcomes.iter().map(TrialOutcome::sq_err_x1).sum::<f64>() / n;
            let mse_x2 = outcomes.iter().map(TrialOutcome::sq_err_x2).sum::<f64>() / n;
            Ok(SweepRow {
                levels: l,
                trials: cfg.trials,
                mse_x1,
                mse_x2,
                mse_sum: mse_x1 + mse_x2,
            })
        })
        .collect()
}
