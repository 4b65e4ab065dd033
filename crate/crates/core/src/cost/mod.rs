//! Component counts and power models for both encoder designs.

mod bom;
mod power;

pub use bom::{bom, bom_for_levels, Bom, BomSource, VCVS_TABLE_MAX_K};
pub use power::{
    compare, power, vcvs_power_for_levels, AdbCalibration, Calibration, CompareRow, DeviceLibrary,
    PowerReport, SubcircuitPower, VcvsCalibration,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

/// Encoder architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    /// Multi-stage analog divider chain.
    Adb,
    /// Parallel switched VCVS stack.
    Vcvs,
}

impl Design {
    pub const ALL: [Design; 2] = [Design::Adb, Design::Vcvs];

    pub fn name(self) -> &'static str {
        match self {
            Design::Adb => "adb",
            Design::Vcvs => "vcvs",
        }
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "adb" => Ok(Design::Adb),
            "vcvs" => Ok(Design::Vcvs),
            other => Err(Error::Config(format!("unknown design `{other}`"))),
        }
    }
}
