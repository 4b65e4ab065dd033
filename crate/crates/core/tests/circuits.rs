use proptest::prelude::*;

use ajscc_core::adb::{adb_encode, AdbConfig};
use ajscc_core::mapping::{decode, encode_ideal, DecodeMode, SensorSample};
use ajscc_core::vcvs::{vcvs_encode, VcvsStackConfig};

fn off_boundary(v_h: f64, delta: f64) -> bool {
    let x = v_h / delta;
    (x - x.round()).abs() > 1e-6
}

proptest! {
    #[test]
    fn both_circuits_realize_the_ideal_mapping(
        k in 1u32..=7,
        frac in 0.0f64..1.0,
        v_t in 0.0f64..=5.0,
    ) {
        let adb = AdbConfig::new(k, 3.0, 5.0, 3.0).unwrap();
        let p = adb.mapping_params();
        let v_h = frac * 3.0;
        prop_assume!(off_boundary(v_h, p.delta_h));
        let s = SensorSample::new(v_h, v_t);
        let ideal = encode_ideal(s, &p).unwrap();
        let a = adb_encode(s, &adb).unwrap();
        prop_assert!((a.v_d - ideal.v_d).abs() < 1e-9);
        prop_assert_eq!(a.level, ideal.level);

        let stack = VcvsStackConfig::new(p.levels, p.delta_h, p.v_r, 5.0).unwrap();
        let v = vcvs_encode(s, &stack).unwrap();
        prop_assert!((v.v_d - ideal.v_d).abs() < 1e-9);
        prop_assert_eq!(v.level, ideal.level);
    }

    #[test]
    fn adb_output_decodes_to_the_input_level(
        k in 2u32..=6,
        frac in 0.0f64..1.0,
        v_t in 0.5f64..4.5,
    ) {
        let adb = AdbConfig::new(k, 3.2, 5.0, 3.0).unwrap();
        let p = adb.mapping_params();
        let v_h = frac * 3.0;
        prop_assume!(off_boundary(v_h, p.delta_h));
        let e = adb_encode(SensorSample::new(v_h, v_t), &adb).unwrap();
        let back = decode(e.v_d, &p, DecodeMode::Strict).unwrap();
        prop_assert!((back.v_h - v_h).abs() <= p.delta_h / 2.0 + 1e-12);
        prop_assert!((back.v_t - v_t).abs() < 1e-9);
    }
}
