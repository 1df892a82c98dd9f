//! Truncated series for the width and Gouy phase in the three limits:
//! slow trap (`omega << omega0`), stiff trap (`omega >> omega0`) and weak
//! correlation at resonance.

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;

/// Cosine magnitude below which the stiff-trap series is refused.
pub const HIGH_FREQUENCY_POLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expansion {
    pub width: f64,
    pub phase: f64,
}

/// Slow-trap series in powers of `omega`. `order` is 0 (free evolution) or 2.
///
/// The phase is the principal `1/2 arctan` form, so it is comparable with
/// [`super::gouy_principal`].
pub fn expand_low_frequency(spec: &WavepacketSpec, t: f64, order: u32) -> Result<Expansion> {
    finite("t", t)?;
    if order != 0 && order != 2 {
        return Err(Error::UnsupportedOrder { order });
    }
    let sigma0 = spec.sigma0();
    let g = spec.gamma();
    let tau = spec.omega0() * t;
    let q = 1.0 + 2.0 * g * tau + (1.0 + g * g) * tau * tau;

    let mut width = sigma0 * q.sqrt();
    let mut phase = 0.5 * (tau / (1.0 + g * tau)).atan();
    if order == 2 {
        let w2 = spec.omega().powi(2);
        width -= sigma0 * (3.0 + 4.0 * g * tau + (1.0 + g * g) * tau * tau) * t * t
            / (6.0 * q.sqrt())
            * w2;
        phase += spec.omega0() * t.powi(3) / (6.0 * q) * w2;
    }
    Ok(Expansion { width, phase })
}

/// Stiff-trap series in `omega0 / omega`.
///
/// `width_order` is 0 or 1 (powers of `1/omega`); `phase_order` is 1..=4.
pub fn expand_high_frequency(
    spec: &WavepacketSpec,
    t: f64,
    width_order: u32,
    phase_order: u32,
) -> Result<Expansion> {
    finite("t", t)?;
    if width_order > 1 {
        return Err(Error::UnsupportedOrder { order: width_order });
    }
    if !(1..=4).contains(&phase_order) {
        return Err(Error::UnsupportedOrder { order: phase_order });
    }
    let (s, c) = (spec.omega() * t).sin_cos();
    if c.abs() <= HIGH_FREQUENCY_POLE_TOL {
        return Err(Error::ExpansionPole { t, cos: c });
    }
    let g = spec.gamma();
    let eps = spec.omega0() / spec.omega();
    let tan = s / c;

    let mut width = spec.sigma0() * c.abs();
    if width_order == 1 {
        width += spec.sigma0() * g * eps * c.abs() * tan;
    }

    let x = eps * tan;
    let coefficients = [
        0.5,
        -0.5 * g,
        (3.0 * g * g - 1.0) / 6.0,
        (g - g * g * g) / 2.0,
    ];
    let phase = coefficients[..phase_order as usize]
        .iter()
        .enumerate()
        .map(|(k, a)| a * x.powi(k as i32 + 1))
        .sum();
    Ok(Expansion { width, phase })
}

/// First order in `gamma` at resonance. The phase is on the continuous
/// branch (`omega t / 2` at `gamma = 0`).
pub fn expand_weak_correlation(spec: &WavepacketSpec, t: f64) -> Result<Expansion> {
    spec.require_resonance()?;
    finite("t", t)?;
    let theta = spec.omega() * t;
    let g = spec.gamma();
    let s = theta.sin();
    Ok(Expansion {
        width: spec.sigma0() * (1.0 + 0.5 * (2.0 * theta).sin() * g),
        phase: 0.5 * theta - 0.5 * s * s * g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{gouy_continuous, gouy_principal, width};
    use std::f64::consts::PI;

    fn spec(omega0: f64, omega: f64, gamma: f64) -> WavepacketSpec {
        WavepacketSpec::natural(omega0, omega, gamma).unwrap()
    }

    #[test]
    fn low_frequency_order_zero_is_free_evolution() {
        let sp = spec(1.0, 0.3, 0.0);
        for t in [0.0, 0.5, 2.0, 7.0] {
            let e = expand_low_frequency(&sp, t, 0).unwrap();
            assert!((e.width - (1.0 + t * t).sqrt()).abs() < 1e-15);
            assert!((e.phase - 0.5 * t.atan()).abs() < 1e-15);
        }
    }

    #[test]
    fn low_frequency_order_two_improves() {
        let sp = spec(1.0, 1e-3, 1.0);
        let exact = width(&sp, 2.0).unwrap();
        let r0 = (exact - expand_low_frequency(&sp, 2.0, 0).unwrap().width).abs();
        let r2 = (exact - expand_low_frequency(&sp, 2.0, 2).unwrap().width).abs();
        assert!(r2 < 1e-4 * r0, "{r2} vs {r0}");
    }

    #[test]
    fn low_frequency_remainder_is_fourth_order() {
        for g in [-0.5, 0.0, 1.0] {
            let residual = |w: f64| {
                let sp = spec(1.0, w, g);
                let e = expand_low_frequency(&sp, 1.5, 2).unwrap();
                (
                    (width(&sp, 1.5).unwrap() - e.width).abs(),
                    (gouy_principal(&sp, 1.5).unwrap() - e.phase).abs(),
                )
            };
            let (b1, m1) = residual(1e-2);
            let (b2, m2) = residual(5e-3);
            assert!((8.0..=32.0).contains(&(b1 / b2)), "width ratio {}", b1 / b2);
            assert!((8.0..=32.0).contains(&(m1 / m2)), "phase ratio {}", m1 / m2);
        }
    }

    #[test]
    fn unsupported_orders() {
        let sp = spec(1.0, 0.1, 0.0);
        assert!(matches!(
            expand_low_frequency(&sp, 1.0, 1),
            Err(Error::UnsupportedOrder { order: 1 })
        ));
        assert!(expand_high_frequency(&sp, 1.0, 2, 1).is_err());
        assert!(expand_high_frequency(&sp, 1.0, 0, 0).is_err());
        assert!(expand_high_frequency(&sp, 1.0, 0, 5).is_err());
    }

    #[test]
    fn high_frequency_leading_width() {
        let sp = spec(1.0, 10.0, 0.0);
        for t in [0.01, 0.05, 0.2, 0.4] {
            let e = expand_high_frequency(&sp, t, 0, 1).unwrap();
            assert_eq!(e.width, (10.0 * t).cos().abs());
        }
    }

    #[test]
    fn high_frequency_pole() {
        let sp = spec(1.0, 10.0, 0.0);
        assert!(matches!(
            expand_high_frequency(&sp, PI / 20.0, 1, 1),
            Err(Error::ExpansionPole { .. })
        ));
    }

    #[test]
    fn high_frequency_first_order_phase_for_uncorrelated_packet() {
        let sp = spec(1.0, 10.0, 0.0);
        let t = 0.05;
        let e = expand_high_frequency(&sp, t, 0, 1).unwrap();
        assert!((e.phase - (0.5f64).tan() / 2.0 * 0.1).abs() < 1e-15);
        let err = (gouy_principal(&sp, t).unwrap() - e.phase).abs();
        // x^2 coefficient vanishes at gamma = 0, so the error is O(x^3)
        let x = 0.1 * (0.5f64).tan();
        assert!(err < x.powi(3) / 6.0 * 1.5 && err > x.powi(3) / 6.0 * 0.5);
    }

    #[test]
    fn high_frequency_residual_orders() {
        let theta = 0.6;
        for g in [0.7, -1.3] {
            let residual = |w: f64, wo: u32, po: u32| {
                let sp = spec(1.0, w, g);
                let t = theta / w;
                let e = expand_high_frequency(&sp, t, wo, po).unwrap();
                (
                    (width(&sp, t).unwrap() - e.width).abs(),
                    (gouy_principal(&sp, t).unwrap() - e.phase).abs(),
                )
            };
            for po in 1..=4u32 {
                let (_, r1) = residual(100.0, 0, po);
                let (_, r2) = residual(200.0, 0, po);
                let expected = 2f64.powi(po as i32 + 1);
                let ratio = r1 / r2;
                assert!(
                    ratio >= 0.5 * expected && ratio <= 2.0 * expected,
                    "phase order {po}: ratio {ratio}"
                );
            }
            for wo in 0..=1u32 {
                let (r1, _) = residual(100.0, wo, 1);
                let (r2, _) = residual(200.0, wo, 1);
                let expected = 2f64.powi(wo as i32 + 1);
                let ratio = r1 / r2;
                assert!(
                    ratio >= 0.5 * expected && ratio <= 2.0 * expected,
                    "width order {wo}: ratio {ratio}"
                );
            }
        }
    }

    #[test]
    fn weak_correlation_exact_at_zero() {
        let sp = spec(1.0, 1.0, 0.0);
        for t in [0.0, 0.3, 1.7, 4.0] {
            let e = expand_weak_correlation(&sp, t).unwrap();
            assert_eq!(e.width, 1.0);
            assert_eq!(e.phase, t / 2.0);
        }
        assert!(expand_weak_correlation(&spec(1.0, 2.0, 0.1), 1.0).is_err());
    }

    #[test]
    fn weak_correlation_peak_deviation() {
        let sp = spec(1.0, 1.0, 0.1);
        let e = expand_weak_correlation(&sp, PI / 4.0).unwrap();
        assert!((e.width - 1.05).abs() < 1e-15);
    }

    #[test]
    fn weak_correlation_remainder_is_second_order() {
        let t = 0.9;
        let residual = |g: f64| {
            let sp = spec(1.0, 1.0, g);
            let e = expand_weak_correlation(&sp, t).unwrap();
            (
                (width(&sp, t).unwrap() - e.width).abs(),
                (gouy_continuous(&sp, t).unwrap() - e.phase).abs(),
            )
        };
        let (b1, m1) = residual(0.1);
        let (b2, m2) = residual(0.05);
        assert!((3.0..=5.0).contains(&(b1 / b2)), "{}", b1 / b2);
        assert!((3.0..=5.0).contains(&(m1 / m2)), "{}", m1 / m2);
    }
}
