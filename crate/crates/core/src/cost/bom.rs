use serde::Serialize;

use super::Design;
use crate::error::{domain_err, Error, Result};

/// Largest stage count with reference component counts for the VCVS design.
pub const VCVS_TABLE_MAX_K: u32 = 7;

// Reference parallel-VCVS counts for 2^k levels, k = 1..=7. Comparators and
// multiplexers equal the level count; op-amps and resistors follow no clean
// closed form and are kept as data.
const VCVS_OPAMPS: [u32; 7] = [6, 10, 16, 30, 56, 110, 217];
const VCVS_RESISTORS: [u32; 7] = [28, 47, 79, 149, 283, 559, 1103];

/// Where a set of component counts comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BomSource {
    /// Reference table entry.
    Table,
    /// Closed form, exact on every reference row.
    ClosedForm,
    /// Beyond the reference data; not authoritative.
    Extrapolated,
    /// Level count between table rows; estimate only.
    Estimate,
}

impl BomSource {
    pub fn name(self) -> &'static str {
        match self {
            BomSource::Table => "table",
            BomSource::ClosedForm => "closed-form",
            BomSource::Extrapolated => "extrapolated",
            BomSource::Estimate => "estimate",
        }
    }
}

/// Component counts of one encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bom {
    pub opamps: u32,
    pub comparators: u32,
    pub multiplexers: u32,
    pub resistors: u32,
    pub source: BomSource,
}

/// Component counts for a `k`-stage ADB design or a `2^k`-level VCVS design.
///
/// VCVS counts beyond `k = 7` require `extrapolate`: comparators and
/// multiplexers keep doubling, op-amps and resistors continue the last
/// observed growth ratio.
pub fn bom(design: Design, k: u32, extrapolate: bool) -> Result<Bom> {
    match design {
        Design::Adb => {
            if !(1..=16).contains(&k) {
                return Err(domain_err!("adb stage count k = {k} outside [1, 16]"));
            }
            Ok(Bom {
                opamps: k + 5,
                comparators: 2 * k + 2,
                multiplexers: 0,
                resistors: 7 * k + 23,
                source: BomSource::ClosedForm,
            })
        }
        Design::Vcvs => {
            if k == 0 || k > 16 {
                return Err(domain_err!("vcvs k = {k} outside [1, 16]"));
            }
            if k <= VCVS_TABLE_MAX_K {
                let i = (k - 1) as usize;
                return Ok(Bom {
                    opamps: VCVS_OPAMPS[i],
                    comparators: 1 << k,
                    multiplexers: 1 << k,
                    resistors: VCVS_RESISTORS[i],
                    source: BomSource::Table,
                });
            }
            if !extrapolate {
                return Err(Error::OutsideData(format!(
                    "vcvs component counts are tabulated for k <= {VCVS_TABLE_MAX_K}, got {k}"
                )));
            }
            let last = VCVS_TABLE_MAX_K as usize - 1;
            let o_ratio = f64::from(VCVS_OPAMPS[last]) / f64::from(VCVS_OPAMPS[last - 1]);
            let r_ratio = f64::from(VCVS_RESISTORS[last]) / f64::from(VCVS_RESISTORS[last - 1]);
            let steps = (k - VCVS_TABLE_MAX_K) as i32;
            Ok(Bom {
                opamps: (f64::from(VCVS_OPAMPS[last]) * o_ratio.powi(steps)).round() as u32,
                comparators: 1 << k,
                multiplexers: 1 << k,
                resistors: (f64::from(VCVS_RESISTORS[last]) * r_ratio.powi(steps)).round() as u32,
                source: BomSource::Extrapolated,
            })
        }
    }
}

/// VCVS component counts for an arbitrary level count.
///
/// Power-of-two counts up to 128 are table rows. Other counts take op-amps
/// and resistors from the next-lower table row (the shared per-stage circuitry
/// is already present there) and one comparator and multiplexer per level.
pub fn bom_for_levels(levels: u32) -> Result<Bom> {
    if !(2..=1 << VCVS_TABLE_MAX_K).contains(&levels) {
        return Err(Error::OutsideData(format!(
            "vcvs level count {levels} outside [2, {}]",
            1 << VCVS_TABLE_MAX_K
        )));
    }
    let k = 31 - levels.leading_zeros();
    let row = bom(Design::Vcvs, k, false)?;
    if levels.is_power_of_two() {
        return Ok(row);
    }
    Ok(Bom {
        comparators: levels,
        multiplexers: levels,
        source: BomSource::Estimate,
        ..row
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adb_rows() {
        let b = bom(Design::Adb, 4, false).unwrap();
        assert_eq!(
            (b.opamps, b.comparators, b.multiplexers, b.resistors),
            (9, 10, 0, 51)
        );
        let b = bom(Design::Adb, 1, false).unwrap();
        assert_eq!(
            (b.opamps, b.comparators, b.multiplexers, b.resistors),
            (6, 4, 0, 30)
        );
        assert!(bom(Design::Adb, 0, false).is_err());
        assert!(bom(Design::Adb, 17, false).is_err());
    }

    #[test]
    fn vcvs_rows() {
        let b = bom(Design::Vcvs, 4, false).unwrap();
        assert_eq!(
            (b.opamps, b.comparators, b.multiplexers, b.resistors),
            (30, 16, 16, 149)
        );
        assert_eq!(b.source, BomSource::Table);
    }

    #[test]
    fn vcvs_extrapolation_is_opt_in() {
        assert!(matches!(
            bom(Design::Vcvs, 8, false),
            Err(Error::OutsideData(_))
        ));
        let b = bom(Design::Vcvs, 8, true).unwrap();
        assert_eq!(b.source, BomSource::Extrapolated);
        assert_eq!((b.comparators, b.multiplexers), (256, 256));
        // 217 * 217/110 and 1103 * 1103/559
        assert_eq!(b.opamps, 428);
        assert_eq!(b.resistors, 2176);
        let b9 = bom(Design::Vcvs, 9, true).unwrap();
        assert!(b9.opamps > b.opamps && b9.resistors > b.resistors);
    }

    #[test]
    fn levels_between_rows() {
        let b = bom_for_levels(11).unwrap();
        assert_eq!(b.source, BomSource::Estimate);
        assert_eq!(
            (b.opamps, b.comparators, b.multiplexers, b.resistors),
            (16, 11, 11, 79)
        );
        assert_eq!(
            bom_for_levels(16).unwrap(),
            bom(Design::Vcvs, 4, false).unwrap()
        );
        assert!(bom_for_levels(1).is_err());
        assert!(bom_for_levels(129).is_err());
    }
}
