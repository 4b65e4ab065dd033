use serde::Serialize;

use super::bom::{bom, bom_for_levels, Bom};
use super::Design;
use crate::error::{Error, Result};

// Measured per-subcircuit power of the 4-stage divider design built from
// general-purpose COTS op-amps and comparators (mW). Only the divider chain
// grows with the stage count; the rest is treated as constant.
const ADB_REF_K: u32 = 4;
const ADB_DIVIDER_MW: f64 = 14.710;
const ADB_FIXED_MW: [(&str, f64); 6] = [
    ("V_T Offset", 0.855),
    ("VCVS Type 1,2", 0.963),
    ("VCVS Type Selector", 0.002),
    ("Bits to Voltage Converter", 3.396),
    ("Final Adder", 0.834),
    ("V_R Buffer", 0.897),
];
pub(crate) const ADB_DIVIDER_NAME: &str = "Analog divider";

// Parallel-VCVS totals with the same parts at 16 and 128 levels (mW).
const VCVS_ANCHORS: [(u32, f64); 2] = [(4, 22.72), (7, 155.52)];

// Divider design with low-power COTS parts at 16 levels (mW).
const EFFICIENT_ADB_MW_AT_REF: f64 = 4.8;

/// Divider-design power model: linear divider chain plus fixed subcircuits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdbCalibration {
    /// Stage count at which `divider_mw` was measured.
    pub ref_k: u32,
    pub divider_mw: f64,
    pub fixed_mw: Vec<(String, f64)>,
    /// Multiplier applied to every subcircuit.
    pub scale: f64,
}

impl AdbCalibration {
    fn subcircuits(&self, k: u32) -> Vec<(String, f64)> {
        let divider = self.divider_mw * f64::from(k) / f64::from(self.ref_k);
        std::iter::once((ADB_DIVIDER_NAME.to_string(), divider))
            .chain(self.fixed_mw.iter().cloned())
            .map(|(name, mw)| (name, mw * self.scale))
            .collect()
    }

    fn total(&self, k: u32) -> f64 {
        self.subcircuits(k).iter().map(|(_, mw)| mw).sum()
    }
}

/// VCVS-design power model `per_opamp_mw * #O + fixed_mw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VcvsCalibration {
    pub per_opamp_mw: f64,
    pub fixed_mw: f64,
}

impl VcvsCalibration {
    /// Line through the two reference totals.
    fn from_anchors() -> Self {
        let [(k0, p0), (k1, p1)] = VCVS_ANCHORS;
        let o0 = f64::from(bom(Design::Vcvs, k0, false).unwrap().opamps);
        let o1 = f64::from(bom(Design::Vcvs, k1, false).unwrap().opamps);
        let per_opamp_mw = (p1 - p0) / (o1 - o0);
        VcvsCalibration {
            per_opamp_mw,
            fixed_mw: p0 - per_opamp_mw * o0,
        }
    }
}

/// Measured power models, per design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub adb: Option<AdbCalibration>,
    pub vcvs: Option<VcvsCalibration>,
}

/// A family of parts and how to estimate power with it.
///
/// Libraries with a [`Calibration`] use it; otherwise power is the per-device
/// sum over op-amps and comparators (resistor dissipation is ignored).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceLibrary {
    pub name: String,
    pub p_opamp_uw: f64,
    pub p_comparator_uw: f64,
    pub calibration: Option<Calibration>,
}

impl DeviceLibrary {
    /// General-purpose COTS parts, calibrated for both designs.
    pub fn standard() -> Self {
        let vcvs = VcvsCalibration::from_anchors();
        DeviceLibrary {
            name: "standard".into(),
            p_opamp_uw: vcvs.per_opamp_mw * 1e3,
            p_comparator_uw: 0.0,
            calibration: Some(Calibration {
                adb: Some(standard_adb()),
                vcvs: Some(vcvs),
            }),
        }
    }

    /// Low-power COTS parts; only the divider design has a measurement.
    pub fn efficient() -> Self {
        let standard = standard_adb();
        let scale = EFFICIENT_ADB_MW_AT_REF / standard.total(ADB_REF_K);
        DeviceLibrary {
            name: "efficient".into(),
            p_opamp_uw: 0.0,
            p_comparator_uw: 0.0,
            calibration: Some(Calibration {
                adb: Some(AdbCalibration { scale, ..standard }),
                vcvs: None,
            }),
        }
    }

    /// Integrated nano-meter devices: 8 uW per op-amp, 12.7 nW per comparator.
    pub fn nano() -> Self {
        DeviceLibrary {
            name: "nano".into(),
            p_opamp_uw: 8.0,
            p_comparator_uw: 0.0127,
            calibration: None,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "standard" => Ok(Self::standard()),
            "efficient" => Ok(Self::efficient()),
            "nano" => Ok(Self::nano()),
            other => Err(Error::Config(format!("unknown device library `{other}`"))),
        }
    }
}

fn standard_adb() -> AdbCalibration {
    AdbCalibration {
        ref_k: ADB_REF_K,
        divider_mw: ADB_DIVIDER_MW,
        fixed_mw: ADB_FIXED_MW
            .iter()
            .map(|&(n, mw)| (n.to_string(), mw))
            .collect(),
        scale: 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubcircuitPower {
    pub name: String,
    pub mw: f64,
    pub percent: f64,
}

/// Total and per-subcircuit power of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerReport {
    pub design: Design,
    pub levels: u32,
    pub library: String,
    pub total_mw: f64,
    pub per_subcircuit: Vec<SubcircuitPower>,
}

impl PowerReport {
    fn new(design: Design, levels: u32, library: &str, parts: Vec<(String, f64)>) -> Self {
        let total_mw: f64 = parts.iter().map(|(_, mw)| mw).sum();
        let per_subcircuit = parts
            .into_iter()
            .map(|(name, mw)| SubcircuitPower {
                percent: if total_mw > 0.0 {
                    100.0 * mw / total_mw
                } else {
                    0.0
                },
                name,
                mw,
            })
            .collect();
        PowerReport {
            design,
            levels,
            library: library.to_string(),
            total_mw,
            per_subcircuit,
        }
    }

    pub fn mw_per_level(&self) -> f64 {
        self.total_mw / f64::from(self.levels)
    }
}

fn per_device(b: &Bom, lib: &DeviceLibrary) -> Vec<(String, f64)> {
    vec![
        (
            "Op Amps".to_string(),
            f64::from(b.opamps) * lib.p_opamp_uw * 1e-3,
        ),
        (
            "Comparators".to_string(),
            f64::from(b.comparators) * lib.p_comparator_uw * 1e-3,
        ),
    ]
}

fn missing(lib: &DeviceLibrary, design: Design) -> Error {
    Error::MissingCalibration {
        library: lib.name.clone(),
        design: design.to_string(),
    }
}

fn vcvs_report(b: &Bom, levels: u32, lib: &DeviceLibrary) -> Result<PowerReport> {
    let parts = match &lib.calibration {
        None => per_device(b, lib),
        Some(cal) => {
            let v = cal.vcvs.ok_or_else(|| missing(lib, Design::Vcvs))?;
            vec![
                ("Op Amps".to_string(), v.per_opamp_mw * f64::from(b.opamps)),
                ("Fixed".to_string(), v.fixed_mw),
            ]
        }
    };
    Ok(PowerReport::new(Design::Vcvs, levels, &lib.name, parts))
}

/// Power of a `k`-stage ADB design or a `2^k`-level VCVS design.
pub fn power(design: Design, k: u32, lib: &DeviceLibrary) -> Result<PowerReport> {
    let b = bom(design, k, false)?;
    let levels = 1u32 << k;
    match design {
        Design::Adb => {
            let parts = match &lib.calibration {
                None => per_device(&b, lib),
                Some(cal) => cal
                    .adb
                    .as_ref()
                    .ok_or_else(|| missing(lib, design))?
                    .subcircuits(k),
            };
            Ok(PowerReport::new(design, levels, &lib.name, parts))
        }
        Design::Vcvs => vcvs_report(&b, levels, lib),
    }
}

/// VCVS power at an arbitrary level count (see [`bom_for_levels`]).
pub fn vcvs_power_for_levels(levels: u32, lib: &DeviceLibrary) -> Result<PowerReport> {
    let b = bom_for_levels(levels)?;
    vcvs_report(&b, levels, lib)
}

/// One line of a design comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub design: Design,
    pub k: u32,
    pub levels: u32,
    pub bom: Bom,
    pub total_mw: f64,
    pub mw_per_level: f64,
}

/// Both designs at every `k`, `k`-major.
///
/// A design the library has no power model for is left out; it is an error
/// only if that leaves nothing to compare.
pub fn compare(k_list: &[u32], lib: &DeviceLibrary) -> Result<Vec<CompareRow>> {
    if k_list.is_empty() {
        return Err(Error::Config("empty stage-count list".into()));
    }
    let mut rows = Vec::new();
    for &k in k_list {
        for design in Design::ALL {
            let report = match power(design, k, lib) {
                Ok(r) => r,
                Err(Error::MissingCalibration { .. }) => continue,
                Err(e) => return Err(e),
            };
            rows.push(CompareRow {
                design,
                k,
                levels: report.levels,
                bom: bom(design, k, false)?,
                total_mw: report.total_mw,
                mw_per_level: report.mw_per_level(),
            });
        }
    }
    if rows.is_empty() {
        return Err(missing(lib, Design::Vcvs));
    }
    Ok(rows)
}
