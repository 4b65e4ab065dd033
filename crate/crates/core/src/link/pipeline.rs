use std::f64::consts::TAU;

use rand::Rng;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::channel::{add_noise, noise_variance};
use super::fm::{check_frequency, tone_sample, FmConfig};
use super::params::{link_decode, link_encode, LinkParams};
use super::peak::{argmax, PeakDetector};
use super::trial_rng;
use crate::error::{Error, Result};

/// Frequency-division layout of `sensors` transmitters that all carry the
/// same encoded value.
///
/// The receiver band `[0, fs/2]` is split into `sensors` equal sub-bands;
/// sensor `s` transmits at `offset(s) + hz_per_volt * v_d`. A single sensor
/// owns the whole band, which is exactly the plain single-link receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdmPlan {
    pub sensors: u32,
    /// Width of each sub-band in FFT bins.
    pub band_bins: usize,
}

impl FdmPlan {
    pub fn new(sensors: u32, link: &LinkParams, fm: &FmConfig) -> Result<Self> {
        fm.validate()?;
        if sensors == 0 {
            return Err(Error::Config("need at least one sensor".into()));
        }
        let band_bins = (fm.fft_size / 2 + 1) / sensors as usize;
        let needed = (fm.hz_per_volt * link.d_max / fm.bin_width()).ceil() as usize + 1;
        if needed > band_bins {
            return Err(Error::Config(format!(
                "overlapping sub-bands: each of {sensors} sensors needs {needed} bins, only {band_bins} available"
            )));
        }
        Ok(FdmPlan { sensors, band_bins })
    }

    /// Carrier offset of sensor `s` in Hz.
    pub fn offset_hz(&self, s: u32, fm: &FmConfig) -> f64 {
        (s as usize * self.band_bins) as f64 * fm.bin_width()
    }
}

/// Sources and their reconstructions for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub x1: f64,
    pub x2: f64,
    pub x1_hat: f64,
    pub x2_hat: f64,
}

impl TrialOutcome {
    pub fn sq_err_x1(&self) -> f64 {
        (self.x1_hat - self.x1).powi(2)
    }

    pub fn sq_err_x2(&self) -> f64 {
        (self.x2_hat - self.x2).powi(2)
    }
}

/// One Monte-Carlo trial: draw sources, encode, modulate every sensor,
/// add channel noise, combine sub-band magnitude spectra, detect and decode.
///
/// Random draws happen in a fixed order from the `(seed, trial)` stream:
/// `x1`, `x2`, one channel phase per sensor, then the noise.
pub fn simulate_trial(
    link: &LinkParams,
    fm: &FmConfig,
    plan: &FdmPlan,
    snr_db: f64,
    seed: u64,
    trial: u64,
    detector: &mut PeakDetector,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial);
    let x1: f64 = rng.random();
    let x2: f64 = rng.random();
    let v_d = link_encode(x1, x2, link)?;
    let tone = fm.hz_per_volt * v_d;

    let buf = detector.buffer_mut();
    buf.fill(Complex64::default());
    for s in 0..plan.sensors {
        let freq = plan.offset_hz(s, fm) + tone;
        check_frequency(freq, fm)?;
        let gain = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
        for (n, sample) in buf.iter_mut().enumerate() {
            *sample += gain * tone_sample(freq, fm.fs, n);
        }
    }
    add_noise(buf, noise_variance(snr_db), &mut rng);

    let bin_width = detector.bin_width();
    let spectrum = detector.transform();
    let bin = if plan.sensors == 1 {
        argmax(spectrum[..plan.band_bins].iter().map(|c| c.norm_sqr()))?
    } else {
        let band = plan.band_bins;
        argmax((0..band).map(|j| {
            (0..plan.sensors as usize)
                .map(|s| spectrum[s * band + j].norm())
                .sum::<f64>()
        }))?
    };
    let v_hat = bin as f64 * bin_width / fm.hz_per_volt;
    let (x1_hat, x2_hat) = link_decode(v_hat, link);
    Ok(TrialOutcome {
        x1,
        x2,
        x1_hat,
        x2_hat,
    })
}
