//! Behavioral model of the multi-stage analog divider encoder.
//!
//! Each analog divider block (ADB) maps its input `v` in `[-v_ref, v_ref]` to
//! the residue `2 (v - v_ref/2)` for `v >= 0` and `2 (v + v_ref/2)` for
//! `v < 0`; a comparator reads the residue's sign as one quotient bit. A chain
//! of `k` blocks fed with `v_h` emits `floor(v_h * 2^k / v_ref)` MSB first,
//! i.e. the level index for `delta_h = v_ref / 2^k`. The bits drive a
//! binary-weighted summer (`level * v_r`), the LSB picks the Type-1 or Type-2
//! VCVS, and a final adder produces the encoded voltage.
//!
//! Op-amps and comparators are ideal: exact arithmetic, no offsets or noise.

use serde::Serialize;

use crate::error::{domain_err, Error, Result};
use crate::mapping::{EncodedValue, MappingParams, SensorSample};

/// Largest supported stage count.
pub const MAX_STAGES: u32 = 24;

/// Band around an exact level boundary in which the cascade output is
/// implementation-defined (comparator metastability).
pub const BOUNDARY_EPS: f64 = 1e-9;

/// Divider-chain configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdbConfig {
    /// Number of divider stages.
    pub k: u32,
    pub v_ref: f64,
    pub v_dd: f64,
    /// Largest `v_h` the encoder accepts.
    pub v_in_max: f64,
    /// Full scale of `v_t`; defaults to `v_dd`.
    pub v_t_max: f64,
    /// Clamp the final adder output to `[0, v_dd]`.
    pub clamp_output: bool,
}

impl AdbConfig {
    pub fn new(k: u32, v_ref: f64, v_dd: f64, v_in_max: f64) -> Result<Self> {
        let cfg = AdbConfig {
            k,
            v_ref,
            v_dd,
            v_in_max,
            v_t_max: v_dd,
            clamp_output: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_v_t_max(mut self, v_t_max: f64) -> Result<Self> {
        self.v_t_max = v_t_max;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_STAGES).contains(&self.k) {
            return Err(Error::Config(format!(
                "stage count k = {} outside [1, {MAX_STAGES}]",
                self.k
            )));
        }
        for (name, v) in [
            ("v_ref", self.v_ref),
            ("v_dd", self.v_dd),
            ("v_in_max", self.v_in_max),
            ("v_t_max", self.v_t_max),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.v_ref < self.v_in_max {
            return Err(Error::Config(format!(
                "v_ref = {} is below v_in_max = {}",
                self.v_ref, self.v_in_max
            )));
        }
        Ok(())
    }

    /// Maximum number of levels, `2^k`.
    pub fn max_levels(&self) -> u32 {
        1 << self.k
    }

    /// Level spacing `v_ref / 2^k`.
    pub fn delta_h(&self) -> f64 {
        self.v_ref / f64::from(self.max_levels())
    }

    /// Per-level span `v_dd / 2^k`, held fixed when `v_ref` is tuned.
    pub fn v_r(&self) -> f64 {
        self.v_dd / f64::from(self.max_levels())
    }

    /// Number of levels actually reachable by inputs in `[0, v_in_max]`.
    pub fn realized_levels(&self) -> u32 {
        let top = (self.v_in_max / self.delta_h() + BOUNDARY_EPS).floor() as u32;
        top.min(self.max_levels() - 1) + 1
    }

    /// The ideal mapping this circuit realizes.
    pub fn mapping_params(&self) -> MappingParams {
        MappingParams {
            delta_h: self.delta_h(),
            v_r: self.v_r(),
            levels: self.max_levels(),
            v_h_max: self.v_in_max,
            v_t_max: self.v_t_max,
            half_offset: true,
        }
    }
}

/// Output of one divider block. `bit` is 1 for a non-negative residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageResult {
    pub residue: f64,
    pub bit: u8,
}

/// One analog divider block.
pub fn stage_residue(v_in: f64, v_ref: f64) -> Result<StageResult> {
    if v_in.is_nan() || v_in.abs() > v_ref {
        return Err(domain_err!(
            "stage input {v_in} outside [-{v_ref}, {v_ref}]"
        ));
    }
    let residue = if v_in < 0.0 {
        2.0 * (v_in - v_ref / 2.0 + v_ref)
    } else {
        2.0 * (v_in - v_ref / 2.0)
    };
    // The clamp only removes rounding excursions; the exact map stays in range.
    let residue = residue.clamp(-v_ref, v_ref);
    // A zero residue takes the non-negative branch in the next stage, so the
    // comparator must read it as a 1 to keep boundary inputs on the floor.
    Ok(StageResult {
        residue,
        bit: u8::from(residue >= 0.0),
    })
}

/// Bits and residues of a full divider chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cascade {
    /// Quotient bits, MSB first.
    pub bits: Vec<u8>,
    pub residues: Vec<f64>,
}

impl Cascade {
    pub fn quotient(&self) -> u32 {
        self.bits
            .iter()
            .fold(0, |acc, &b| (acc << 1) | u32::from(b))
    }

    pub fn lsb(&self) -> u8 {
        *self.bits.last().expect("cascade has at least one stage")
    }
}

/// Runs `v_in` through `cfg.k` divider stages.
///
/// Away from level boundaries the bits spell `floor(v_in * 2^k / v_ref)`;
/// `v_in == v_ref` saturates to all ones.
pub fn divider_cascade(v_in: f64, cfg: &AdbConfig) -> Result<Cascade> {
    cfg.validate()?;
    if !(0.0..=cfg.v_ref).contains(&v_in) {
        return Err(domain_err!(
            "divider input {v_in} outside [0, {}]",
            cfg.v_ref
        ));
    }
    let k = cfg.k as usize;
    let mut bits = Vec::with_capacity(k);
    let mut residues = Vec::with_capacity(k);
    let mut v = v_in;
    for _ in 0..k {
        let stage = stage_residue(v, cfg.v_ref)?;
        bits.push(stage.bit);
        residues.push(stage.residue);
        v = stage.residue;
    }
    Ok(Cascade { bits, residues })
}

/// Binary-weighted summing amplifier: `v_r * sum(bit_i * 2^(k-1-i))`.
pub fn bits_to_quotient_voltage(bits: &[u8], v_r: f64) -> f64 {
    let code = bits
        .iter()
        .fold(0.0, |acc, &b| 2.0 * acc + f64::from(b.min(1)));
    code * v_r
}

/// Type-1 and Type-2 VCVS outputs for `v_t`.
pub fn vcvs_outputs(v_t: f64, v_r: f64, v_t_max: f64) -> Result<(f64, f64)> {
    if !(0.0..=v_t_max).contains(&v_t) {
        return Err(domain_err!("v_t = {v_t} outside [0, {v_t_max}]"));
    }
    let type1 = v_r * v_t / v_t_max;
    Ok((type1, v_r - type1))
}

/// Encodes a sample through the divider-chain circuit.
pub fn adb_encode(s: SensorSample, cfg: &AdbConfig) -> Result<EncodedValue> {
    if !(0.0..=cfg.v_in_max).contains(&s.v_h) {
        return Err(domain_err!("v_h = {} outside [0, {}]", s.v_h, cfg.v_in_max));
    }
    let cascade = divider_cascade(s.v_h, cfg)?;
    let v_r = cfg.v_r();
    let (type1, type2) = vcvs_outputs(s.v_t, v_r, cfg.v_t_max)?;
    let selected = if cascade.lsb() == 0 { type1 } else { type2 };
    let mut v_d = bits_to_quotient_voltage(&cascade.bits, v_r) + selected;
    if cfg.clamp_output {
        v_d = v_d.clamp(0.0, cfg.v_dd);
    }
    Ok(EncodedValue {
        v_d,
        level: cascade.quotient(),
    })
}

/// Largest usable `V_REF` per stage count (index `k - 2`, `k = 2..=8`),
/// limited by op-amp saturation in the reference circuit.
const MAX_V_REF: [f64; 7] = [4.0, 4.8, 4.8, 4.8, 4.923, 4.987, 4.987];

/// Stored saturation-limited maximum `V_REF` for `k`, when tabulated.
pub fn max_v_ref(k: u32) -> Option<f64> {
    (2..=8).contains(&k).then(|| MAX_V_REF[(k - 2) as usize])
}

/// One row of the divider-chain configuration table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfigRow {
    pub k: u32,
    pub max_n: u32,
    pub min_v_ref: f64,
    pub min_delta_h: f64,
    pub min_n: Option<u32>,
    pub max_v_ref: Option<f64>,
    pub max_delta_h: Option<f64>,
    pub v_r: f64,
}

/// Tuning range of a `k`-stage chain for inputs up to `v_in_max`.
///
/// The smallest `V_REF` is the one whose `2^k` levels exactly cover
/// `[0, v_in_max]` with the top level starting at `v_in_max`.
pub fn config_table(k: u32, v_dd: f64, v_in_max: f64) -> Result<ConfigRow> {
    if !(1..=16).contains(&k) {
        return Err(domain_err!("k = {k} outside [1, 16]"));
    }
    if !(v_in_max.is_finite() && v_in_max > 0.0) {
        return Err(domain_err!("v_in_max must be positive, got {v_in_max}"));
    }
    if !(v_dd.is_finite() && v_dd > 0.0) {
        return Err(domain_err!("v_dd must be positive, got {v_dd}"));
    }
    let n = f64::from(1u32 << k);
    let min_v_ref = v_in_max * n / (n - 1.0);
    let max_ref = max_v_ref(k);
    Ok(ConfigRow {
        k,
        max_n: 1 << k,
        min_v_ref,
        min_delta_h: min_v_ref / n,
        min_n: max_ref.map(|m| (v_in_max * n / m + BOUNDARY_EPS).floor() as u32 + 1),
        max_v_ref: max_ref,
        max_delta_h: max_ref.map(|m| m / n),
        v_r: v_dd / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::encode_ideal;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn stage_examples() {
        let s = stage_residue(0.0, 3.0).unwrap();
        assert_eq!((s.residue, s.bit), (-3.0, 0));
        let s = stage_residue(2.4, 3.0).unwrap();
        assert!((s.residue - 1.8).abs() < 1e-12);
        assert_eq!(s.bit, 1);
        let s = stage_residue(-1.0, 3.0).unwrap();
        assert!((s.residue - 1.0).abs() < 1e-12);
        assert_eq!(s.bit, 1);
        assert!(stage_residue(3.5, 3.0).is_err());
        assert!(stage_residue(-3.01, 3.0).is_err());
    }

    #[test]
    fn exact_boundaries_land_on_the_floor() {
        // 0.375 V is the start of level 2 for v_ref = 3, k = 4; stage 3 sees exactly 0 V
        let cfg = AdbConfig::new(4, 3.0, 5.0, 3.0).unwrap();
        let c = divider_cascade(0.375, &cfg).unwrap();
        assert_eq!(c.residues[2], 0.0);
        assert_eq!(c.quotient(), 2);
        for j in 0..16 {
            let v = f64::from(j) * 0.1875;
            assert_eq!(divider_cascade(v, &cfg).unwrap().quotient(), j as u32);
        }
    }

    #[test]
    fn stage_residue_stays_in_range() {
        let v_ref = 3.0;
        for i in -3000..=3000 {
            let v = f64::from(i) / 1000.0;
            let r = stage_residue(v, v_ref).unwrap().residue;
            assert!(r.abs() <= v_ref, "v={v} r={r}");
        }
    }

    #[test]
    fn cascade_examples() {
        let cfg = AdbConfig::new(4, 3.2, 5.0, 3.0).unwrap();
        assert_eq!(divider_cascade(0.0, &cfg).unwrap().bits, bits("0000"));
        let c = divider_cascade(0.5, &cfg).unwrap();
        assert_eq!(c.bits, bits("0010"));
        assert_eq!(c.quotient(), 2);
        // stage by stage: -2.2, -1.2, 0.8, -1.6
        for (r, want) in c.residues.iter().zip([-2.2, -1.2, 0.8, -1.6]) {
            assert!((r - want).abs() < 1e-12);
        }
        assert_eq!(divider_cascade(3.1, &cfg).unwrap().bits, bits("1111"));
        assert_eq!(divider_cascade(3.2, &cfg).unwrap().quotient(), 15);
        assert!(divider_cascade(-0.1, &cfg).is_err());
    }

    #[test]
    fn summer_examples() {
        assert_eq!(bits_to_quotient_voltage(&bits("0000"), 0.3125), 0.0);
        assert_eq!(bits_to_quotient_voltage(&bits("0010"), 0.3125), 0.625);
        assert_eq!(bits_to_quotient_voltage(&bits("1111"), 0.3125), 4.6875);
    }

    #[test]
    fn vcvs_examples() {
        assert_eq!(vcvs_outputs(0.0, 0.3125, 5.0).unwrap(), (0.0, 0.3125));
        assert_eq!(vcvs_outputs(5.0, 0.3125, 5.0).unwrap(), (0.3125, 0.0));
        assert_eq!(vcvs_outputs(2.5, 0.3125, 5.0).unwrap(), (0.15625, 0.15625));
        assert!(vcvs_outputs(5.1, 0.3125, 5.0).is_err());
    }

    #[test]
    fn encode_examples() {
        let cfg = AdbConfig::new(4, 3.0, 5.0, 3.0).unwrap();
        let e = adb_encode(SensorSample::new(0.5, 2.5), &cfg).unwrap();
        assert_eq!(e.level, 2);
        assert!((e.v_d - 0.78125).abs() < 1e-12);
        let e = adb_encode(SensorSample::new(0.0, 2.5), &cfg).unwrap();
        assert!((e.v_d - 0.15625).abs() < 1e-12);
        let e = adb_encode(SensorSample::new(3.0, 2.5), &cfg).unwrap();
        assert!((e.v_d - 4.84375).abs() < 1e-12);
    }

    #[test]
    fn staircase_has_sixteen_equal_steps() {
        let cfg = AdbConfig::new(4, 3.0, 5.0, 3.0).unwrap();
        let mut steps: Vec<f64> = Vec::new();
        for i in 0..=3000 {
            let v_h = f64::from(i) / 1000.0;
            let v_d = adb_encode(SensorSample::new(v_h, 2.5), &cfg).unwrap().v_d;
            if steps.last().is_none_or(|&last| (v_d - last).abs() > 1e-9) {
                steps.push(v_d);
            }
        }
        assert_eq!(steps.len(), 16);
        for (l, v) in steps.iter().enumerate() {
            assert!((v - (l as f64 + 0.5) * 0.3125).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_selects_vcvs_type() {
        let cfg = AdbConfig::new(5, 3.2, 5.0, 3.0).unwrap();
        let p = cfg.mapping_params();
        for i in 0..500 {
            let v_h = 0.0031 + f64::from(i) * 0.00599;
            let c = divider_cascade(v_h, &cfg).unwrap();
            let level = (v_h / p.delta_h).floor() as u32;
            assert_eq!(u32::from(c.lsb()), level % 2);
            let a = adb_encode(SensorSample::new(v_h, 1.3), &cfg).unwrap();
            let b = encode_ideal(SensorSample::new(v_h, 1.3), &p).unwrap();
            assert!((a.v_d - b.v_d).abs() < 1e-9);
        }
    }

    #[test]
    fn config_validation() {
        assert!(AdbConfig::new(0, 3.0, 5.0, 3.0).is_err());
        assert!(AdbConfig::new(4, 2.9, 5.0, 3.0).is_err());
        let cfg = AdbConfig::new(4, 3.0, 5.0, 3.0).unwrap();
        assert_eq!(cfg.max_levels(), 16);
        assert!((cfg.delta_h() - 0.1875).abs() < 1e-15);
        assert!((cfg.v_r() - 0.3125).abs() < 1e-15);
        assert!(cfg.with_v_t_max(-1.0).is_err());
    }

    #[test]
    fn config_table_examples() {
        let r = config_table(4, 5.0, 3.0).unwrap();
        assert_eq!(r.max_n, 16);
        assert!((r.min_v_ref - 3.2).abs() < 1e-12);
        assert!((r.min_delta_h - 0.2).abs() < 1e-12);
        assert!((r.v_r - 0.3125).abs() < 1e-12);
        assert_eq!(r.max_v_ref, Some(4.8));
        assert!((r.max_delta_h.unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(r.min_n, Some(11));

        let r = config_table(1, 5.0, 3.0).unwrap();
        assert_eq!(r.max_n, 2);
        assert!((r.min_v_ref - 6.0).abs() < 1e-12);
        assert!((r.min_delta_h - 3.0).abs() < 1e-12);
        assert_eq!(r.v_r, 2.5);
        assert_eq!((r.min_n, r.max_v_ref, r.max_delta_h), (None, None, None));

        let r = config_table(8, 5.0, 3.0).unwrap();
        assert!((r.min_v_ref - 3.012).abs() < 1e-3);
        assert!((r.min_delta_h - 0.012).abs() < 5e-4);
        assert!((r.v_r - 0.0195).abs() < 1e-4);
        assert_eq!(r.min_n, Some(155));

        assert!(config_table(0, 5.0, 3.0).is_err());
        assert!(config_table(17, 5.0, 3.0).is_err());
        assert!(config_table(9, 5.0, 3.0).unwrap().max_v_ref.is_none());
    }

    #[test]
    fn tuning_v_ref_reduces_levels() {
        for k in 2..=8 {
            let row = config_table(k, 5.0, 3.0).unwrap();
            let (lo, hi) = (row.min_v_ref, row.max_v_ref.unwrap());
            let mut prev = u32::MAX;
            for i in 0..=100 {
                let v_ref = lo + (hi - lo) * f64::from(i) / 100.0;
                let n = AdbConfig::new(k, v_ref, 5.0, 3.0)
                    .unwrap()
                    .realized_levels();
                assert!(n <= prev);
                prev = n;
                if i == 0 {
                    assert_eq!(n, row.max_n);
                }
            }
            assert_eq!(prev, row.min_n.unwrap(), "k={k}");
        }
    }
}
