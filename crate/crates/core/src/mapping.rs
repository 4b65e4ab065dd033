//! Ideal rectangular (parallel-lines) mapping.
//!
//! The first input selects a horizontal line (a *level*) by uniform
//! quantization with spacing `delta_h`; the second input sets the position
//! along that line. The encoded voltage is the accumulated length of the snake
//! from the origin, where one full line contributes `v_r`. Even levels are
//! traversed left to right (Type 1), odd levels right to left (Type 2), so the
//! output is continuous in the second input across level changes.
//!
//! The vertical connecting segments between lines are not counted, so the
//! output range is exactly `[0, levels * v_r]`.

use serde::Serialize;

use crate::error::{domain_err, Error, Result};

/// One pair of (offset-removed) sensor voltages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensorSample {
    pub v_h: f64,
    pub v_t: f64,
}

impl SensorSample {
    pub fn new(v_h: f64, v_t: f64) -> Self {
        SensorSample { v_h, v_t }
    }
}

/// Parameters of one rectangular mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MappingParams {
    /// Spacing between adjacent levels, in volts of `v_h`.
    pub delta_h: f64,
    /// Encoded-voltage span of one full level.
    pub v_r: f64,
    pub levels: u32,
    pub v_h_max: f64,
    pub v_t_max: f64,
    /// Reconstruct `v_h` at level midpoints `(l + 0.5) * delta_h` instead of
    /// the level base `l * delta_h`.
    pub half_offset: bool,
}

impl MappingParams {
    /// Builds and validates a parameter set. `half_offset` defaults to `true`.
    pub fn new(delta_h: f64, v_r: f64, levels: u32, v_h_max: f64, v_t_max: f64) -> Result<Self> {
        let p = MappingParams {
            delta_h,
            v_r,
            levels,
            v_h_max,
            v_t_max,
            half_offset: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_half_offset(mut self, half_offset: bool) -> Self {
        self.half_offset = half_offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("delta_h", self.delta_h)?;
        positive("v_r", self.v_r)?;
        positive("v_h_max", self.v_h_max)?;
        positive("v_t_max", self.v_t_max)?;
        if self.levels == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        // Relative slack so that e.g. 16 * (3/16) >= 3 survives rounding.
        let span = f64::from(self.levels) * self.delta_h;
        if span < self.v_h_max * (1.0 - 1e-12) {
            return Err(Error::Config(format!(
                "levels * delta_h = {span} does not cover v_h_max = {}",
                self.v_h_max
            )));
        }
        Ok(())
    }

    /// Largest encoded voltage, `levels * v_r`.
    pub fn v_d_max(&self) -> f64 {
        f64::from(self.levels) * self.v_r
    }

    /// Reconstruction point of `v_h` for a level.
    pub fn level_value(&self, level: u32) -> f64 {
        let base = f64::from(level);
        if self.half_offset {
            (base + 0.5) * self.delta_h
        } else {
            base * self.delta_h
        }
    }
}

/// Output of an encoder: the accumulated-length voltage and the level it lies on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EncodedValue {
    pub v_d: f64,
    pub level: u32,
}

/// Affine range adjustment `(v - offset) * gain` applied to a raw sensor voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeAdjust {
    pub offset: f64,
    pub gain: f64,
}

impl RangeAdjust {
    pub fn apply(&self, raw: f64) -> f64 {
        (raw - self.offset) * self.gain
    }
}

impl Default for RangeAdjust {
    fn default() -> Self {
        RangeAdjust {
            offset: 0.0,
            gain: 1.0,
        }
    }
}

/// How [`decode`] treats encoded voltages outside `[0, levels * v_r]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Out-of-range input is a domain error.
    #[default]
    Strict,
    /// Out-of-range input is clamped into range first (noisy receivers).
    Clip,
}

fn check_range(name: &str, v: f64, max: f64) -> Result<()> {
    if !(0.0..=max).contains(&v) {
        return Err(domain_err!("{name} = {v} outside [0, {max}]"));
    }
    Ok(())
}

/// Level index of `v_h`: `floor(v_h / delta_h)` clamped to `[0, levels - 1]`.
///
/// A value exactly on a boundary belongs to the upper level, except at the
/// top edge where it clamps to the last level.
pub fn quantize_level(v_h: f64, p: &MappingParams) -> Result<u32> {
    check_range("v_h", v_h, p.v_h_max)?;
    Ok(level_of(v_h / p.delta_h, p.levels))
}

pub(crate) fn level_of(ratio: f64, levels: u32) -> u32 {
    let l = ratio.floor();
    if l <= 0.0 {
        0
    } else if l >= f64::from(levels - 1) {
        levels - 1
    } else {
        l as u32
    }
}

/// Encodes a sample with the ideal (circuit-free) mapping.
pub fn encode_ideal(s: SensorSample, p: &MappingParams) -> Result<EncodedValue> {
    p.validate()?;
    let level = quantize_level(s.v_h, p)?;
    check_range("v_t", s.v_t, p.v_t_max)?;
    let along = p.v_r * s.v_t / p.v_t_max;
    let within = if level.is_multiple_of(2) {
        along
    } else {
        p.v_r - along
    };
    Ok(EncodedValue {
        v_d: f64::from(level) * p.v_r + within,
        level,
    })
}

/// Inverts the accumulated-length mapping.
///
/// `v_t` is recovered exactly; `v_h` is recovered to its level's
/// reconstruction point (see [`MappingParams::level_value`]). Corner points
/// `v_d = l * v_r` are shared by two levels and decode to the upper one.
pub fn decode(v_d: f64, p: &MappingParams, mode: DecodeMode) -> Result<SensorSample> {
    p.validate()?;
    let max = p.v_d_max();
    let v_d = match mode {
        DecodeMode::Strict => {
            check_range("v_d", v_d, max)?;
            v_d
        }
        DecodeMode::Clip => {
            if v_d.is_nan() {
                return Err(domain_err!("v_d is NaN"));
            }
            v_d.clamp(0.0, max)
        }
    };
    let level = level_of(v_d / p.v_r, p.levels);
    let frac = ((v_d - f64::from(level) * p.v_r) / p.v_r).clamp(0.0, 1.0);
    let v_t = if level.is_multiple_of(2) {
        frac
    } else {
        1.0 - frac
    } * p.v_t_max;
    Ok(SensorSample {
        v_h: p.level_value(level),
        v_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> MappingParams {
        MappingParams::new(0.1875, 0.3125, 16, 3.0, 5.0).unwrap()
    }

    #[test]
    fn quantize_examples() {
        let p = params();
        assert_eq!(quantize_level(0.0, &p).unwrap(), 0);
        assert_eq!(quantize_level(0.5, &p).unwrap(), 2);
        // floor(3.0 / 0.1875) = 16 clamps to the last level
        assert_eq!(quantize_level(3.0, &p).unwrap(), 15);
        // boundaries belong to the upper level
        assert_eq!(quantize_level(0.375, &p).unwrap(), 2);
    }

    #[test]
    fn quantize_rejects_out_of_range() {
        let p = params();
        assert!(matches!(quantize_level(-0.01, &p), Err(Error::Domain(_))));
        assert!(matches!(quantize_level(3.01, &p), Err(Error::Domain(_))));
        assert!(quantize_level(f64::NAN, &p).is_err());
    }

    #[test]
    fn encode_examples() {
        let p = params();
        let even = encode_ideal(SensorSample::new(0.5, 1.0), &p).unwrap();
        assert_eq!(even.level, 2);
        assert!((even.v_d - 0.6875).abs() < 1e-12);

        let odd = encode_ideal(SensorSample::new(0.6, 1.0), &p).unwrap();
        assert_eq!(odd.level, 3);
        assert!((odd.v_d - 1.1875).abs() < 1e-12);

        for l in 0..16u32 {
            let v_h = (f64::from(l) + 0.3) * p.delta_h;
            let e = encode_ideal(SensorSample::new(v_h, 2.5), &p).unwrap();
            assert!((e.v_d - (f64::from(l) + 0.5) * p.v_r).abs() < 1e-12);
        }
    }

    #[test]
    fn encode_rejects_bad_v_t() {
        let p = params();
        assert!(encode_ideal(SensorSample::new(0.5, 5.5), &p).is_err());
        assert!(encode_ideal(SensorSample::new(0.5, -1.0), &p).is_err());
    }

    #[test]
    fn decode_examples() {
        let p = params();
        let s = decode(0.78125, &p, DecodeMode::Strict).unwrap();
        assert!((s.v_t - 2.5).abs() < 1e-12);
        assert!((s.v_h - 0.46875).abs() < 1e-12);

        let s = decode(0.0, &p, DecodeMode::Strict).unwrap();
        assert_eq!(s.v_t, 0.0);
        assert!((s.v_h - p.delta_h / 2.0).abs() < 1e-12);

        let s = decode(1.1875, &p, DecodeMode::Strict).unwrap();
        assert!((s.v_t - 1.0).abs() < 1e-12);
        assert!((s.v_h - 0.65625).abs() < 1e-12);
    }

    #[test]
    fn decode_without_half_offset_uses_level_base() {
        let p = params().with_half_offset(false);
        let s = decode(0.78125, &p, DecodeMode::Strict).unwrap();
        assert!((s.v_h - 0.375).abs() < 1e-12);
    }

    #[test]
    fn decode_range_handling() {
        let p = params();
        assert!(decode(-0.1, &p, DecodeMode::Strict).is_err());
        assert!(decode(5.01, &p, DecodeMode::Strict).is_err());
        let top = decode(7.0, &p, DecodeMode::Clip).unwrap();
        // last level (15) is odd, so the clipped top corner is v_t = 0
        assert!((top.v_h - 15.5 * p.delta_h).abs() < 1e-12);
        assert!(top.v_t.abs() < 1e-12);
        let bottom = decode(-3.0, &p, DecodeMode::Clip).unwrap();
        assert_eq!(bottom.v_t, 0.0);
    }

    #[test]
    fn invalid_params() {
        assert!(MappingParams::new(0.0, 0.3, 16, 3.0, 5.0).is_err());
        assert!(MappingParams::new(0.1875, 0.3125, 0, 3.0, 5.0).is_err());
        // 15 levels of 0.1875 only reach 2.8125
        assert!(MappingParams::new(0.1875, 0.3125, 15, 3.0, 5.0).is_err());
    }

    #[test]
    fn range_adjust_is_affine() {
        let adj = RangeAdjust {
            offset: 1.0,
            gain: 2.0,
        };
        assert_eq!(adj.apply(1.0), 0.0);
        assert_eq!(adj.apply(2.5), 3.0);
        assert_eq!(RangeAdjust::default().apply(0.7), 0.7);
    }

    fn arb_case() -> impl Strategy<Value = (MappingParams, f64, f64)> {
        (
            1u32..=128,
            0.01f64..1.0,
            0.01f64..1.0,
            0.0f64..1.0,
            1e-6f64..(1.0 - 1e-6),
        )
            .prop_map(|(levels, delta_h, v_r, uh, ut)| {
                let v_h_max = f64::from(levels) * delta_h;
                let p = MappingParams::new(delta_h, v_r, levels, v_h_max, 5.0).unwrap();
                (p, uh * v_h_max, ut * 5.0)
            })
    }

    proptest! {
        #[test]
        fn roundtrip_recovers_v_t_and_bounds_v_h((p, v_h, v_t) in arb_case()) {
            let e = encode_ideal(SensorSample::new(v_h, v_t), &p).unwrap();
            prop_assert!(e.v_d >= 0.0 && e.v_d <= p.v_d_max());
            prop_assert!(f64::from(e.level) * p.v_r <= e.v_d + 1e-12);
            prop_assert!(e.v_d <= f64::from(e.level + 1) * p.v_r + 1e-12);
            let s = decode(e.v_d, &p, DecodeMode::Strict).unwrap();
            prop_assert!((s.v_t - v_t).abs() < 1e-9);
            prop_assert!((s.v_h - v_h).abs() <= p.delta_h / 2.0 + 1e-9);
        }

        #[test]
        fn monotone_within_level((p, v_h, v_t) in arb_case(), dt in 1e-4f64..0.5) {
            let hi = (v_t + dt).min(p.v_t_max);
            prop_assume!(hi > v_t);
            let a = encode_ideal(SensorSample::new(v_h, v_t), &p).unwrap();
            let b = encode_ideal(SensorSample::new(v_h, hi), &p).unwrap();
            if a.level.is_multiple_of(2) {
                prop_assert!(b.v_d > a.v_d);
            } else {
                prop_assert!(b.v_d < a.v_d);
            }
        }
    }
}
