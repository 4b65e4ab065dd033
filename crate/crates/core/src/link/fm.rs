use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{domain_err, Error, Result};

/// Voltage-to-frequency modulator and receiver sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FmConfig {
    /// Modulator scaling in Hz per volt.
    pub hz_per_volt: f64,
    /// Receiver sampling rate in Hz.
    pub fs: f64,
    pub fft_size: usize,
    /// Observation window in seconds.
    pub duration: f64,
}

impl Default for FmConfig {
    /// 1 kHz/V, 65.536 kHz sampling, 65536-point FFT over one second (1 Hz bins).
    fn default() -> Self {
        FmConfig {
            hz_per_volt: 1000.0,
            fs: 65_536.0,
            fft_size: 65_536,
            duration: 1.0,
        }
    }
}

impl FmConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hz_per_volt", self.hz_per_volt),
            ("fs", self.fs),
            ("duration", self.duration),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.fft_size < 2 {
            return Err(Error::Config("fft_size must be at least 2".into()));
        }
        if self.fft_size > self.samples() {
            return Err(Error::Config(format!(
                "fft_size {} exceeds the {} samples in the window",
                self.fft_size,
                self.samples()
            )));
        }
        Ok(())
    }

    /// Samples in one observation window.
    pub fn samples(&self) -> usize {
        (self.fs * self.duration).round() as usize
    }

    /// FFT bin spacing in Hz.
    pub fn bin_width(&self) -> f64 {
        self.fs / self.fft_size as f64
    }

    pub fn nyquist(&self) -> f64 {
        self.fs / 2.0
    }
}

pub(crate) fn check_frequency(freq: f64, fm: &FmConfig) -> Result<()> {
    if !(freq >= 0.0 && freq <= fm.nyquist()) {
        return Err(domain_err!(
            "tone at {freq} Hz outside [0, {}] Hz (aliasing)",
            fm.nyquist()
        ));
    }
    Ok(())
}

/// `cos(2 pi freq n / fs)` for sample `n`, with the phase reduced modulo one
/// cycle before scaling so long windows keep full precision.
pub(crate) fn tone_sample(freq: f64, fs: f64, n: usize) -> f64 {
    let cycles = (freq * n as f64 / fs).fract();
    (TAU * cycles).cos()
}

/// Unit-amplitude cosine at `hz_per_volt * v_d`, one window long.
pub fn fm_modulate(v_d: f64, fm: &FmConfig) -> Result<Vec<f64>> {
    fm.validate()?;
    if v_d.is_nan() || v_d < 0.0 {
        return Err(domain_err!("v_d = {v_d} must be non-negative"));
    }
    let freq = fm.hz_per_volt * v_d;
    check_frequency(freq, fm)?;
    Ok((0..fm.samples())
        .map(|n| tone_sample(freq, fm.fs, n))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_window() {
        let fm = FmConfig::default();
        fm.validate().unwrap();
        assert_eq!(fm.samples(), 65_536);
        assert_eq!(fm.bin_width(), 1.0);
    }

    #[test]
    fn dc_and_tone() {
        let fm = FmConfig::default();
        let dc = fm_modulate(0.0, &fm).unwrap();
        assert!(dc.iter().all(|&s| s == 1.0));
        let w = fm_modulate(1.0, &fm).unwrap();
        // 1000 Hz at 65536 Hz: 65.536 samples per cycle, so sample 16384 is 250 cycles in
        assert!((w[16_384] - 1.0).abs() < 1e-9);
        let power = w.iter().map(|s| s * s).sum::<f64>() / w.len() as f64;
        assert!((power - 0.5).abs() < 1e-6);
        // 5 kHz is well below Nyquist
        assert!(fm_modulate(5.0, &fm).is_ok());
    }

    #[test]
    fn rejects_aliasing_and_negative() {
        let fm = FmConfig::default();
        assert!(fm_modulate(40.0, &fm).is_err());
        assert!(fm_modulate(-1.0, &fm).is_err());
        let bad = FmConfig {
            fft_size: 70_000,
            ..FmConfig::default()
        };
        assert!(fm_modulate(1.0, &bad).is_err());
    }
}
