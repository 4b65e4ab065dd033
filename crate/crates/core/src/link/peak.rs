use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::fm::FmConfig;
use crate::error::{Error, Result};

/// Reusable FFT peak detector with its own scratch buffers.
pub struct PeakDetector {
    fft: Arc<dyn Fft<f64>>,
    fft_size: usize,
    bin_width: f64,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl PeakDetector {
    pub fn new(fm: &FmConfig) -> Result<Self> {
        fm.validate()?;
        let fft = FftPlanner::new().plan_fft_forward(fm.fft_size);
        Ok(Self::with_plan(fft, fm))
    }

    pub(crate) fn with_plan(fft: Arc<dyn Fft<f64>>, fm: &FmConfig) -> Self {
        let scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        PeakDetector {
            fft,
            fft_size: fm.fft_size,
            bin_width: fm.bin_width(),
            buf: vec![Complex64::default(); fm.fft_size],
            scratch,
        }
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// Time-domain buffer of length `fft_size`, transformed by [`Self::transform`].
    pub(crate) fn buffer_mut(&mut self) -> &mut [Complex64] {
        &mut self.buf
    }

    /// Forward FFT of the buffer in place; returns the spectrum.
    pub(crate) fn transform(&mut self) -> &[Complex64] {
        self.fft
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        &self.buf
    }

    /// Frequency of the largest bin in `[0, fs/2]` of the first `fft_size` samples.
    pub fn detect(&mut self, samples: &[Complex64]) -> Result<f64> {
        if samples.len() < self.fft_size {
            return Err(Error::Domain(format!(
                "{} samples, need at least fft_size = {}",
                samples.len(),
                self.fft_size
            )));
        }
        self.buf.copy_from_slice(&samples[..self.fft_size]);
        let half = self.fft_size / 2;
        let spectrum = self.transform();
        let bin = argmax(spectrum[..=half].iter().map(|c| c.norm_sqr()))?;
        Ok(bin as f64 * self.bin_width)
    }
}

/// Index of the first maximum; an all-zero (or empty) input has no peak.
pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> Result<usize> {
    let mut best = (0usize, 0.0f64);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    if best.1 > 0.0 {
        Ok(best.0)
    } else {
        Err(Error::NoPeak)
    }
}

/// Bin-center frequency of the strongest non-negative-frequency FFT bin.
pub fn fft_peak_detect(samples: &[Complex64], fm: &FmConfig) -> Result<f64> {
    PeakDetector::new(fm)?.detect(samples)
}

/// [`fft_peak_detect`] for a real waveform.
pub fn fft_peak_detect_real(samples: &[f64], fm: &FmConfig) -> Result<f64> {
    let complex: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    fft_peak_detect(&complex, fm)
}
