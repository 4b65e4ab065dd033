//! One function per subcommand; each returns a [`Report`].

use serde::Serialize;

use ajscc_core::adb::{adb_encode, config_table, divider_cascade, stage_residue, AdbConfig};
use ajscc_core::cost::{
    bom, compare, power, vcvs_power_for_levels, Bom, Design, DeviceLibrary, PowerReport,
};
use ajscc_core::link::{mse_sweep, sdr_vs_csnr, DiversityConfig, SweepConfig};
use ajscc_core::mapping::{decode, encode_ideal, DecodeMode, MappingParams, SensorSample};
use ajscc_core::vcvs::{stage_output, vcvs_encode, VcvsStackConfig};

use crate::args::*;
use crate::report::{num, opt_num, Body, Report};
use crate::CliError;

type Out = Result<Report, CliError>;

pub fn run(cmd: &Command, seed: u64) -> Out {
    match cmd {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode_cmd(a),
        Command::AdbSim(a) => adb_sim(a),
        Command::VcvsSim(a) => vcvs_sim(a),
        Command::ConfigTable(a) => config_table_cmd(a),
        Command::Sweep(a) => sweep(a, seed),
        Command::Sdr(a) => sdr(a, seed),
        Command::Bom(a) => bom_cmd(a),
        Command::Power(a) => power_cmd(a),
        Command::Compare(a) => compare_cmd(a),
    }
}

fn adb_config(a: &AdbArgs) -> Result<AdbConfig, CliError> {
    let cfg = AdbConfig::new(a.k, a.vref, a.vdd, a.vin_max.unwrap_or(a.vref))?;
    Ok(cfg.with_v_t_max(a.vt_max.unwrap_or(a.vdd))?)
}

/// Inclusive grid `start, start + step, ..` up to `end`, built by index so
/// rounding does not accumulate.
fn grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(CliError::Usage(format!(
            "step must be positive, got {step}"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor();
    if !(0.0..=1e7).contains(&n) {
        return Err(CliError::Usage(format!(
            "grid [{start}, {end}] with step {step} is empty or too large"
        )));
    }
    Ok((0..=n as u64).map(|i| start + i as f64 * step).collect())
}

fn encode(a: &EncodeArgs) -> Out {
    let s = SensorSample::new(a.vh, a.vt);
    let v_t_max = a.adb.vt_max.unwrap_or(a.adb.vdd);
    let e = match a.design {
        Encoder::Adb => adb_encode(s, &adb_config(&a.adb)?)?,
        Encoder::Ideal => {
            let v_h_max = f64::from(a.levels) * a.delta_h;
            let p = MappingParams::new(a.delta_h, a.vr, a.levels, v_h_max, v_t_max)?;
            encode_ideal(s, &p)?
        }
        Encoder::Vcvs => {
            let cfg = VcvsStackConfig::new(a.levels, a.delta_h, a.vr, v_t_max)?;
            vcvs_encode(s, &cfg)?
        }
    };
    Report::new(Body::Scalar(num(e.v_d)), &e)
}

fn decode_cmd(a: &DecodeArgs) -> Out {
    let st = &a.stack;
    let v_h_max = f64::from(st.levels) * st.delta_h;
    let p = MappingParams::new(st.delta_h, st.vr, st.levels, v_h_max, st.vt_max)?
        .with_half_offset(!a.no_half_offset);
    let mode = if a.clip {
        DecodeMode::Clip
    } else {
        DecodeMode::Strict
    };
    let s = decode(a.vd, &p, mode)?;
    Report::table(vec!["v_h", "v_t"], vec![vec![num(s.v_h), num(s.v_t)]], &s)
}

#[derive(Serialize)]
struct StaircasePoint {
    v_h: f64,
    v_t: f64,
    bits: String,
    level: u32,
    v_d: f64,
}

#[derive(Serialize)]
struct StagePoint {
    v_in: f64,
    residue: f64,
    bit: u8,
}

fn adb_sim(a: &AdbSimArgs) -> Out {
    let cfg = adb_config(&a.adb)?;
    match a.mode {
        AdbMode::Staircase => {
            let mut points = Vec::new();
            for v_h in grid(0.0, cfg.v_in_max, a.step)? {
                let c = divider_cascade(v_h, &cfg)?;
                let e = adb_encode(SensorSample::new(v_h, a.vt), &cfg)?;
                points.push(StaircasePoint {
                    v_h,
                    v_t: a.vt,
                    bits: c.bits.iter().map(|b| char::from(b'0' + b)).collect(),
                    level: e.level,
                    v_d: e.v_d,
                });
            }
            let rows = points
                .iter()
                .map(|p| {
                    vec![
                        num(p.v_h),
                        num(p.v_t),
                        p.bits.clone(),
                        p.level.to_string(),
                        num(p.v_d),
                    ]
                })
                .collect();
            Report::table(vec!["v_h", "v_t", "bits", "level", "v_d"], rows, &points)
        }
        AdbMode::Stage => {
            let mut points = Vec::new();
            for v_in in grid(-cfg.v_ref, cfg.v_ref, a.step)? {
                let r = stage_residue(v_in, cfg.v_ref)?;
                points.push(StagePoint {
                    v_in,
                    residue: r.residue,
                    bit: r.bit,
                });
            }
            let rows = points
                .iter()
                .map(|p| vec![num(p.v_in), num(p.residue), p.bit.to_string()])
                .collect();
            Report::table(vec!["v_in", "residue", "bit"], rows, &points)
        }
    }
}

#[derive(Serialize)]
struct SurfacePoint {
    v_h: f64,
    v_t: f64,
    v_d: f64,
}

fn vcvs_sim(a: &VcvsSimArgs) -> Out {
    let st = &a.stack;
    let cfg = VcvsStackConfig::with_base(st.levels, st.delta_h, st.vr, st.vt_max, a.base)?;
    if let Some(stage) = a.stage {
        if 2 * stage + 1 >= st.levels {
            return Err(ajscc_core::Error::Domain(format!(
                "stage {stage} needs levels {} and {}, stack has {}",
                2 * stage,
                2 * stage + 1,
                st.levels
            ))
            .into());
        }
    }
    let top = a.base.max(0.0) + f64::from(st.levels + 1) * st.delta_h;
    let v_ts = grid(0.0, st.vt_max, a.vt_step)?;
    let mut points = Vec::new();
    for v_h in grid(0.0, top, a.vh_step)? {
        for &v_t in &v_ts {
            let s = SensorSample::new(v_h, v_t);
            let v_d = match a.stage {
                Some(stage) => stage_output(v_h, v_t, stage, &cfg)?,
                None => vcvs_encode(s, &cfg)?.v_d,
            };
            points.push(SurfacePoint { v_h, v_t, v_d });
        }
    }
    let rows = points
        .iter()
        .map(|p| vec![num(p.v_h), num(p.v_t), num(p.v_d)])
        .collect();
    Report::table(vec!["v_h", "v_t", "v_d"], rows, &points)
}

fn k_list(k: &[u32], default: std::ops::RangeInclusive<u32>) -> Vec<u32> {
    if k.is_empty() {
        default.collect()
    } else {
        k.to_vec()
    }
}

fn config_table_cmd(a: &ConfigTableArgs) -> Out {
    let rows = k_list(&a.k, 1..=8)
        .into_iter()
        .map(|k| config_table(k, a.vdd, a.vin_max))
        .collect::<Result<Vec<_>, _>>()?;
    let csv = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.max_n.to_string(),
                num(r.min_v_ref),
                num(r.min_delta_h),
                r.min_n.map_or_else(|| "-".to_string(), |n| n.to_string()),
                opt_num(r.max_v_ref),
                opt_num(r.max_delta_h),
                num(r.v_r),
            ]
        })
        .collect();
    let header = vec![
        "k",
        "Max n",
        "Min V_REF",
        "Min Delta_H",
        "Min n",
        "Max V_REF",
        "Max Delta_H",
        "V_R",
    ];
    Report::table(header, csv, &rows)
}

fn sweep(a: &SweepArgs, seed: u64) -> Out {
    let cfg = SweepConfig {
        d_max: a.dmax,
        snr_db: a.snr_db,
        trials: a.trials,
        seed,
        ..SweepConfig::default()
    };
    let rows = mse_sweep(&a.levels, &cfg)?;
    let csv = rows
        .iter()
        .map(|r| {
            vec![
                r.levels.to_string(),
                r.trials.to_string(),
                num(r.mse_x1),
                num(r.mse_x2),
                num(r.mse_sum),
            ]
        })
        .collect();
    Report::table(
        vec!["L", "trials", "mse_x1", "mse_x2", "mse_sum"],
        csv,
        &rows,
    )
}

fn sdr(a: &SdrArgs, seed: u64) -> Out {
    let cfg = DiversityConfig {
        levels: a.levels,
        d_max: a.dmax,
        trials: a.trials,
        seed,
        ..DiversityConfig::default()
    };
    let rows = sdr_vs_csnr(&a.sensors, &a.csnr_db, &cfg)?;
    let csv = rows
        .iter()
        .map(|r| vec![num(r.csnr_db), r.sensors.to_string(), num(r.sdr_db)])
        .collect();
    Report::table(vec!["csnr_db", "sensors", "sdr_db"], csv, &rows)
}

fn design(d: DesignArg) -> Design {
    match d {
        DesignArg::Adb => Design::Adb,
        DesignArg::Vcvs => Design::Vcvs,
    }
}

#[derive(Serialize)]
struct BomRow {
    design: Design,
    k: u32,
    max_levels: u32,
    #[serde(flatten)]
    bom: Bom,
}

fn bom_cmd(a: &BomArgs) -> Out {
    let designs = match a.design {
        Some(d) => vec![design(d)],
        None => Design::ALL.to_vec(),
    };
    let ks = k_list(&a.k, 1..=7);
    let mut rows = Vec::new();
    for d in designs {
        for &k in &ks {
            if k >= 32 {
                return Err(ajscc_core::Error::Domain(format!("k = {k} is too large")).into());
            }
            rows.push(BomRow {
                design: d,
                k,
                max_levels: 1 << k,
                bom: bom(d, k, a.extrapolate)?,
            });
        }
    }
    let csv = rows
        .iter()
        .map(|r| {
            vec![
                r.design.to_string(),
                r.k.to_string(),
                r.max_levels.to_string(),
                r.bom.opamps.to_string(),
                r.bom.comparators.to_string(),
                r.bom.multiplexers.to_string(),
                r.bom.resistors.to_string(),
                r.bom.source.name().to_string(),
            ]
        })
        .collect();
    let header = vec![
        "design",
        "k",
        "Max Levels",
        "#O",
        "#C",
        "#M",
        "#R",
        "source",
    ];
    Report::table(header, csv, &rows)
}

#[derive(Serialize)]
struct PowerJson<'a> {
    #[serde(flatten)]
    report: &'a PowerReport,
    mw_per_level: f64,
}

fn power_cmd(a: &PowerArgs) -> Out {
    let lib = DeviceLibrary::by_name(a.lib.name())?;
    let report = match a.levels {
        Some(levels) => {
            if a.design != DesignArg::Vcvs {
                return Err(CliError::Usage(
                    "--levels applies to the vcvs design only".into(),
                ));
            }
            vcvs_power_for_levels(levels, &lib)?
        }
        None => power(design(a.design), a.k, &lib)?,
    };
    let mut csv: Vec<Vec<String>> = report
        .per_subcircuit
        .iter()
        .map(|p| vec![p.name.clone(), num(p.mw), num(p.percent)])
        .collect();
    csv.push(vec![
        "Total Circuit".into(),
        num(report.total_mw),
        num(100.0),
    ]);
    let json = PowerJson {
        mw_per_level: report.mw_per_level(),
        report: &report,
    };
    Report::table(vec!["Subcircuit", "Power [mW]", "% of Total"], csv, &json)
}

fn compare_cmd(a: &CompareArgs) -> Out {
    let lib = DeviceLibrary::by_name(a.lib.name())?;
    let rows = compare(&k_list(&a.k, 1..=7), &lib)?;
    let csv = rows
        .iter()
        .map(|r| {
            vec![
                r.design.to_string(),
                r.k.to_string(),
                r.levels.to_string(),
                r.bom.opamps.to_string(),
                r.bom.comparators.to_string(),
                r.bom.multiplexers.to_string(),
                r.bom.resistors.to_string(),
                num(r.total_mw),
                num(r.mw_per_level),
            ]
        })
        .collect();
    let header = vec![
        "design",
        "k",
        "Max Levels",
        "#O",
        "#C",
        "#M",
        "#R",
        "total_mw",
        "mw_per_level",
    ];
    Report::table(header, csv, &rows)
}
