use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::trial_rng;

/// Static channel with additive white Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelConfig {
    /// Signal-to-noise ratio for unit transmit power; `+inf` disables noise.
    pub snr_db: f64,
    /// Static complex gain; unit magnitude with some phase.
    #[serde(skip)]
    pub gain: Complex64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, phase: f64, seed: u64) -> Self {
        ChannelConfig {
            snr_db,
            gain: Complex64::from_polar(1.0, phase),
            seed,
        }
    }

    pub fn noise_variance(&self) -> f64 {
        noise_variance(self.snr_db)
    }
}

/// Noise variance `10^(-snr_db / 10)` relative to unit signal power.
pub fn noise_variance(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    }
}

/// Adds circular complex Gaussian noise with `E|n|^2 = variance` in place.
pub(crate) fn add_noise<R: Rng>(buf: &mut [Complex64], variance: f64, rng: &mut R) {
    if variance == 0.0 {
        return;
    }
    let sigma = (variance / 2.0).sqrt();
    for s in buf.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *s += Complex64::new(sigma * re, sigma * im);
    }
}

/// `gain * w + n`; the noise is a pure function of `ch.seed`.
pub fn awgn_apply(w: &[f64], ch: &ChannelConfig) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = w.iter().map(|&s| ch.gain * s).collect();
    let mut rng = trial_rng(ch.seed, 0);
    add_noise(&mut out, ch.noise_variance(), &mut rng);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize) -> Vec<f64> {
        (0..n).map(|i| (i as f64 * 0.01).sin()).collect()
    }

    #[test]
    fn noiseless_is_pure_gain() {
        let w = ramp(1000);
        let ch = ChannelConfig::new(f64::INFINITY, 0.7, 1);
        let out = awgn_apply(&w, &ch);
        for (o, s) in out.iter().zip(&w) {
            assert_eq!(*o, ch.gain * s);
        }
    }

    #[test]
    fn zero_db_has_unit_noise_power() {
        let w = ramp(65_536);
        let ch = ChannelConfig::new(0.0, 1.1, 42);
        let out = awgn_apply(&w, &ch);
        let n = out.len() as f64;
        let residual: Vec<Complex64> = out.iter().zip(&w).map(|(o, s)| o - ch.gain * s).collect();
        let mean = residual.iter().sum::<Complex64>() / n;
        let var = residual.iter().map(|r| (r - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn seeded_noise_is_deterministic() {
        let w = ramp(4096);
        let a = awgn_apply(&w, &ChannelConfig::new(-10.0, 0.0, 9));
        let b = awgn_apply(&w, &ChannelConfig::new(-10.0, 0.0, 9));
        let c = awgn_apply(&w, &ChannelConfig::new(-10.0, 0.0, 10));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn variance_from_snr() {
        assert_eq!(noise_variance(0.0), 1.0);
        assert!((noise_variance(-20.0) - 100.0).abs() < 1e-9);
        assert!((noise_variance(10.0) - 0.1).abs() < 1e-12);
        assert_eq!(noise_variance(f64::INFINITY), 0.0);
    }
}
