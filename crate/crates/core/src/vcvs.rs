//! Behavioral model of the parallel switched-VCVS encoder.
//!
//! Every level has its own analog switch. A switch outputs ground while `v_h`
//! is below its activation threshold, the level's VCVS output (Type 1 on even
//! levels, Type 2 on odd ones) for one `delta_h` above the threshold, and the
//! saturation voltage `v_r` beyond that. The encoder output is the sum of all
//! switch outputs. The extra `delta_h` a real switch would add in saturation
//! is dropped, so the output matches the ideal mapping.

use serde::Serialize;

use crate::adb::vcvs_outputs;
use crate::error::{domain_err, Error, Result};
use crate::mapping::{level_of, EncodedValue, MappingParams, SensorSample};

/// A stack of per-level switches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VcvsStackConfig {
    pub levels: u32,
    pub delta_h: f64,
    pub v_r: f64,
    pub v_t_max: f64,
    /// Activation voltage of each level's switch, lowest level first.
    pub thresholds: Vec<f64>,
}

impl VcvsStackConfig {
    /// Stack with thresholds `i * delta_h` (offset-removed input).
    pub fn new(levels: u32, delta_h: f64, v_r: f64, v_t_max: f64) -> Result<Self> {
        Self::with_base(levels, delta_h, v_r, v_t_max, 0.0)
    }

    /// Stack with thresholds `base + i * delta_h`.
    pub fn with_base(levels: u32, delta_h: f64, v_r: f64, v_t_max: f64, base: f64) -> Result<Self> {
        let thresholds = (0..levels).map(|i| base + f64::from(i) * delta_h).collect();
        let cfg = VcvsStackConfig {
            levels,
            delta_h,
            v_r,
            v_t_max,
            thresholds,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        for (name, v) in [
            ("delta_h", self.delta_h),
            ("v_r", self.v_r),
            ("v_t_max", self.v_t_max),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.thresholds.len() != self.levels as usize {
            return Err(Error::Config(format!(
                "{} thresholds for {} levels",
                self.thresholds.len(),
                self.levels
            )));
        }
        for pair in self.thresholds.windows(2) {
            let step = pair[1] - pair[0];
            if (step - self.delta_h).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "threshold step {step} differs from delta_h {}",
                    self.delta_h
                )));
            }
        }
        Ok(())
    }

    /// The ideal mapping with the same geometry (level base reconstruction).
    ///
    /// Only meaningful when the thresholds start at zero.
    pub fn ideal_params(&self) -> MappingParams {
        MappingParams {
            delta_h: self.delta_h,
            v_r: self.v_r,
            levels: self.levels,
            v_h_max: f64::from(self.levels) * self.delta_h,
            v_t_max: self.v_t_max,
            half_offset: false,
        }
    }
}

/// Output of the switch for `level_index`.
pub fn switch_output(v_h: f64, level_index: u32, cfg: &VcvsStackConfig, v_t: f64) -> Result<f64> {
    if level_index >= cfg.levels {
        return Err(domain_err!(
            "level index {level_index} outside [0, {}]",
            cfg.levels - 1
        ));
    }
    let threshold = cfg.thresholds[level_index as usize];
    if v_h < threshold {
        return Ok(0.0);
    }
    if v_h >= threshold + cfg.delta_h {
        return Ok(cfg.v_r);
    }
    let (type1, type2) = vcvs_outputs(v_t, cfg.v_r, cfg.v_t_max)?;
    Ok(if level_index.is_multiple_of(2) {
        type1
    } else {
        type2
    })
}

fn check_sample(s: SensorSample, cfg: &VcvsStackConfig) -> Result<()> {
    if !(s.v_h.is_finite() && s.v_h >= 0.0) {
        return Err(domain_err!(
            "v_h = {} must be a non-negative voltage",
            s.v_h
        ));
    }
    if !(0.0..=cfg.v_t_max).contains(&s.v_t) {
        return Err(domain_err!("v_t = {} outside [0, {}]", s.v_t, cfg.v_t_max));
    }
    Ok(())
}

/// Sum of all switch outputs.
pub fn vcvs_encode(s: SensorSample, cfg: &VcvsStackConfig) -> Result<EncodedValue> {
    cfg.validate()?;
    check_sample(s, cfg)?;
    let mut v_d = 0.0;
    for i in 0..cfg.levels {
        v_d += switch_output(s.v_h, i, cfg, s.v_t)?;
    }
    let level = level_of((s.v_h - cfg.thresholds[0]) / cfg.delta_h, cfg.levels);
    Ok(EncodedValue { v_d, level })
}

/// Output of one design stage: the sum of levels `2 * stage` and `2 * stage + 1`.
pub fn stage_output(v_h: f64, v_t: f64, stage: u32, cfg: &VcvsStackConfig) -> Result<f64> {
    check_sample(SensorSample::new(v_h, v_t), cfg)?;
    let first = 2 * stage;
    Ok(switch_output(v_h, first, cfg, v_t)? + switch_output(v_h, first + 1, cfg, v_t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::encode_ideal;

    #[test]
    fn switch_regions() {
        let cfg = VcvsStackConfig::new(16, 0.1875, 0.3125, 5.0).unwrap();
        // level 3 activates at 0.5625
        assert_eq!(switch_output(0.5, 3, &cfg, 1.0).unwrap(), 0.0);
        for level in [2, 3] {
            let mid = cfg.thresholds[level as usize] + 0.1;
            let v = switch_output(mid, level, &cfg, 2.5).unwrap();
            assert!((v - 0.15625).abs() < 1e-12);
        }
        assert_eq!(switch_output(2.9, 3, &cfg, 1.0).unwrap(), 0.3125);
        assert!(switch_output(0.5, 16, &cfg, 1.0).is_err());
    }

    #[test]
    fn encode_examples() {
        let cfg = VcvsStackConfig::new(16, 0.1875, 0.3125, 5.0).unwrap();
        let e = vcvs_encode(SensorSample::new(0.0, 0.0), &cfg).unwrap();
        assert_eq!(e.v_d, 0.0);
        let e = vcvs_encode(SensorSample::new(0.5, 1.0), &cfg).unwrap();
        assert!((e.v_d - 0.6875).abs() < 1e-12);
        assert_eq!(e.level, 2);
        let ideal = encode_ideal(SensorSample::new(0.5, 1.0), &cfg.ideal_params()).unwrap();
        assert!((e.v_d - ideal.v_d).abs() < 1e-12);
    }

    #[test]
    fn second_stage_partial_sum() {
        let v_r = 0.5;
        let cfg = VcvsStackConfig::with_base(4, 0.3, v_r, 5.0, 0.65).unwrap();
        let at = |v_h: f64, v_t: f64| stage_output(v_h, v_t, 1, &cfg).unwrap();
        assert_eq!(at(1.2, 3.0), 0.0);
        assert!((at(1.4, 3.0) - 0.3).abs() < 1e-12);
        assert!((at(1.7, 3.0) - (v_r + 0.2)).abs() < 1e-12);
        assert_eq!(at(1.9, 3.0), 2.0 * v_r);
    }

    #[test]
    fn monotone_in_v_h_at_mid_scale() {
        let cfg = VcvsStackConfig::new(11, 0.3, 0.45, 5.0).unwrap();
        let mut prev = -1.0;
        for i in 0..=3300 {
            let v = vcvs_encode(SensorSample::new(f64::from(i) * 1e-3, 2.5), &cfg)
                .unwrap()
                .v_d;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn rejects_bad_thresholds() {
        let mut cfg = VcvsStackConfig::new(4, 0.3, 0.5, 5.0).unwrap();
        cfg.thresholds[2] += 0.01;
        assert!(cfg.validate().is_err());
        cfg.thresholds.pop();
        assert!(cfg.validate().is_err());
        assert!(VcvsStackConfig::new(0, 0.3, 0.5, 5.0).is_err());
    }

    #[test]
    fn rejects_out_of_range_sample() {
        let cfg = VcvsStackConfig::new(4, 0.3, 0.5, 5.0).unwrap();
        assert!(vcvs_encode(SensorSample::new(-0.1, 1.0), &cfg).is_err());
        assert!(vcvs_encode(SensorSample::new(0.1, 6.0), &cfg).is_err());
    }
}
