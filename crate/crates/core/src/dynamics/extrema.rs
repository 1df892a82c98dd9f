use std::f64::consts::PI;

use serde::Serialize;

use super::Phasor;
use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthExtremum {
    pub t: f64,
    pub kind: ExtremumKind,
    pub width: f64,
}

/// `d/dtheta (B/sigma0)^2`.
fn width_slope(spec: &WavepacketSpec, t: f64) -> f64 {
    let p = Phasor::new(spec, t);
    let e = p.inv_ratio;
    let inner = p.gamma * e * p.s + p.c;
    2.0 * e * e * p.s * p.c + 2.0 * inner * (p.gamma * e * p.c - p.s)
}

/// Local extrema of `B(t)` in `[t_lo, t_hi]`.
///
/// The slope of `B^2` is scanned on a grid of step `pi / (50 omega)`;
/// each sign change is then bisected to machine precision. Where `B^2`
/// is flat to round-off over the whole window (resonance with
/// `gamma = 0`) no extrema are reported. These are also the instants
/// where the Gouy rate is stationary.
pub fn find_width_extrema(
    spec: &WavepacketSpec,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<WidthExtremum>> {
    finite("t_lo", t_lo)?;
    finite("t_hi", t_hi)?;
    if !(t_lo < t_hi) {
        return Err(Error::EmptyWindow { lo: t_lo, hi: t_hi });
    }
    let step = PI / (50.0 * spec.omega());
    let n = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|k| t_lo + (t_hi - t_lo) * k as f64 / n as f64)
        .collect();
    let slopes: Vec<f64> = grid.iter().map(|&t| width_slope(spec, t)).collect();

    let scale = grid
        .iter()
        .map(|&t| Phasor::new(spec, t).width_ratio_sq())
        .fold(0.0, f64::max);
    let peak_slope = slopes.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if peak_slope <= 1e-13 * scale {
        return Ok(Vec::new());
    }
    let noise = 1e-15 * scale;

    let mut out = Vec::new();
    for k in 0..n {
        let (da, db) = (slopes[k], slopes[k + 1]);
        let kind = if da > noise && db <= noise {
            ExtremumKind::Max
        } else if da < -noise && db >= -noise {
            ExtremumKind::Min
        } else {
            continue;
        };
        let t = bisect(|t| width_slope(spec, t), grid[k], grid[k + 1]);
        // a root at the upper edge of the window is not interior
        if t >= t_hi {
            continue;
        }
        out.push(WidthExtremum {
            t,
            kind,
            width: super::width(spec, t)?,
        });
    }
    Ok(out)
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{gouy_rate, width};

    fn spec(omega0: f64, omega: f64, gamma: f64) -> WavepacketSpec {
        WavepacketSpec::natural(omega0, omega, gamma).unwrap()
    }

    fn maxima(sp: &WavepacketSpec, lo: f64, hi: f64) -> Vec<f64> {
        find_width_extrema(sp, lo, hi)
            .unwrap()
            .into_iter()
            .filter(|e| e.kind == ExtremumKind::Max)
            .map(|e| e.t)
            .collect()
    }

    #[test]
    fn slow_trap_uncorrelated_maxima() {
        let m = maxima(&spec(1.0, 0.1, 0.0), 0.0, 70.0);
        assert_eq!(m.len(), 2);
        assert!((m[0] - 5.0 * PI).abs() < 1e-9);
        assert!((m[1] - 15.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn slow_trap_correlated_maxima_shift() {
        // The slope of B^2 vanishes where tan(2 omega t) = -2 gamma r / (1 + gamma^2 - r^2).
        let (g, r) = (1.0f64, 0.1f64);
        let shift = 0.5 * (2.0 * g * r / (1.0 + g * g - r * r)).atan();
        let m = maxima(&spec(1.0, 0.1, g), 0.0, 70.0);
        assert_eq!(m.len(), 2);
        assert!((m[0] - (PI / 2.0 - shift) / 0.1).abs() < 1e-9, "{}", m[0]);
        assert!((m[1] - (3.0 * PI / 2.0 - shift) / 0.1).abs() < 1e-9);
    }

    #[test]
    fn stationary_resonance_has_no_extrema() {
        assert!(find_width_extrema(&spec(1.0, 1.0, 0.0), 0.0, 20.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn stiff_trap_minimum_squeezes_to_ratio() {
        let sp = spec(1.0, 10.0, 0.0);
        let ext = find_width_extrema(&sp, 0.0, 0.3).unwrap();
        let min = ext.iter().find(|e| e.kind == ExtremumKind::Min).unwrap();
        assert!((min.t - PI / 20.0).abs() < 1e-9);
        assert!((min.width - 0.1).abs() < 1e-12);
    }

    #[test]
    fn extrema_are_stationary_points_of_gouy_rate() {
        let sp = spec(1.0, 0.7, -1.3);
        let ext = find_width_extrema(&sp, 0.0, 15.0).unwrap();
        assert!(ext.len() >= 4);
        let h = 1e-5;
        for e in &ext {
            let d = (gouy_rate(&sp, e.t + h).unwrap() - gouy_rate(&sp, e.t - h).unwrap()) / (2.0 * h);
            assert!(d.abs() < 1e-8, "{d}");
            let b = width(&sp, e.t).unwrap();
            let side = width(&sp, e.t + 1e-3).unwrap();
            match e.kind {
                ExtremumKind::Max => assert!(side < b),
                ExtremumKind::Min => assert!(side > b),
            }
        }
    }

    #[test]
    fn empty_window_rejected() {
        assert!(matches!(
            find_width_extrema(&spec(1.0, 1.0, 0.0), 2.0, 2.0),
            Err(Error::EmptyWindow { .. })
        ));
    }
}
