use serde::Serialize;

use crate::error::{domain_err, Error, Result};
use crate::mapping::level_of;

/// Source-domain mapping used by the link simulator.
///
/// Both sources live on `[0, 1]`. The second source picks one of `levels`
/// lines spaced `delta = 1 / (levels - 1)`; the first is scaled into the
/// per-level span `v1 = d_max / levels`, so the encoded voltage never
/// exceeds `d_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkParams {
    pub d_max: f64,
    pub levels: u32,
    pub v1: f64,
    pub delta: f64,
}

impl LinkParams {
    pub fn new(d_max: f64, levels: u32) -> Result<Self> {
        if !(d_max.is_finite() && d_max > 0.0) {
            return Err(Error::Config(format!(
                "d_max must be positive, got {d_max}"
            )));
        }
        if levels < 2 {
            return Err(Error::Config(format!(
                "need at least 2 levels, got {levels}"
            )));
        }
        Ok(LinkParams {
            d_max,
            levels,
            v1: d_max / f64::from(levels),
            delta: 1.0 / f64::from(levels - 1),
        })
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain_err!("{name} = {x} outside [0, 1]"));
    }
    Ok(())
}

/// Accumulated-length encoding of `(x1, x2)`.
pub fn link_encode(x1: f64, x2: f64, p: &LinkParams) -> Result<f64> {
    check_unit("x1", x1)?;
    check_unit("x2", x2)?;
    let line = level_of(x2 / p.delta, p.levels);
    let along = x1 * p.v1;
    let within = if line.is_multiple_of(2) {
        along
    } else {
        p.v1 - along
    };
    Ok(f64::from(line) * p.v1 + within)
}

/// Inverse of [`link_encode`]; out-of-range voltages are clipped first.
///
/// `x2` is reconstructed at the midpoint of its line spacing.
pub fn link_decode(v_d: f64, p: &LinkParams) -> (f64, f64) {
    let v_d = if v_d.is_nan() {
        0.0
    } else {
        v_d.clamp(0.0, p.d_max)
    };
    let line = level_of(v_d / p.v1, p.levels);
    let frac = ((v_d - f64::from(line) * p.v1) / p.v1).clamp(0.0, 1.0);
    let x1 = if line.is_multiple_of(2) {
        frac
    } else {
        1.0 - frac
    };
    let x2 = ((f64::from(line) + 0.5) * p.delta).min(1.0);
    (x1, x2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_examples() {
        let p = LinkParams::new(5.0, 50).unwrap();
        assert_eq!(link_encode(0.0, 0.0, &p).unwrap(), 0.0);
        assert!((link_encode(0.5, 0.0, &p).unwrap() - 0.05).abs() < 1e-12);
        let x2 = 1.5 * p.delta;
        assert!((link_encode(0.5, x2, &p).unwrap() - 0.15).abs() < 1e-12);
        for l in [2, 11, 73, 110] {
            let p = LinkParams::new(5.0, l).unwrap();
            assert_eq!(link_encode(0.0, 0.0, &p).unwrap(), 0.0);
            assert!(link_encode(1.0, 1.0, &p).unwrap() <= 5.0 + 1e-12);
        }
    }

    #[test]
    fn encode_rejects_out_of_range() {
        let p = LinkParams::new(5.0, 50).unwrap();
        assert!(link_encode(1.1, 0.5, &p).is_err());
        assert!(link_encode(0.5, -0.1, &p).is_err());
        assert!(LinkParams::new(5.0, 1).is_err());
        assert!(LinkParams::new(0.0, 10).is_err());
    }

    #[test]
    fn decode_inverts_encode() {
        let p = LinkParams::new(5.0, 73).unwrap();
        for i in 1..200 {
            let x1 = f64::from(i) / 200.0;
            let x2 = (f64::from(i) * 0.37).fract();
            let (h1, h2) = link_decode(link_encode(x1, x2, &p).unwrap(), &p);
            assert!((h1 - x1).abs() < 1e-9);
            assert!((h2 - x2).abs() <= p.delta / 2.0 + 1e-12);
        }
        let (h1, h2) = link_decode(99.0, &p);
        assert!((0.0..=1.0).contains(&h1) && (0.0..=1.0).contains(&h2));
    }
}
