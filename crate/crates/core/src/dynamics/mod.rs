//! Closed-form evolution of the correlated Gaussian packet in the trap.
//!
//! With `theta = omega t`, `s = sin theta`, `c = cos theta` and the
//! frequency ratio `r = omega / omega0`, everything is built from
//!
//! ```text
//! D(t) = gamma s + r c            (Gouy denominator)
//! C(t) = s^2 + D^2                (auxiliary, C = (B omega / (sigma0 omega0))^2)
//! B(t) = sigma0 (omega0 / omega) sqrt(C)
//! mu(t) = 1/2 arctan(s / D)
//! ```
//!
//! The curvature is reported as `u = 1/R`. The numerator of `1/R` is
//! evaluated in the algebraically equivalent form
//! `omega [c s - (r s - gamma c) D] / C` (divided through by `sin`), which
//! vanishes exactly when the phase front is flat.

mod expansions;
mod extrema;
mod unwrap;

pub use expansions::{
    expand_high_frequency, expand_low_frequency, expand_weak_correlation, Expansion,
};
pub use extrema::{find_width_extrema, ExtremumKind, WidthExtremum};
pub use unwrap::{gouy_unwrapped, max_unwrap_step, GouyTrace};

use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;

/// `|sin(omega t)|` below this is treated as a curvature singularity.
pub const CURVATURE_SINGULAR_TOL: f64 = 1e-9;

/// Trigonometric state of the packet at one instant.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Phasor {
    pub s: f64,
    pub c: f64,
    /// `omega0 / omega`
    pub inv_ratio: f64,
    /// `omega / omega0`
    pub ratio: f64,
    pub gamma: f64,
}

impl Phasor {
    pub fn new(spec: &WavepacketSpec, t: f64) -> Self {
        let (s, c) = (spec.omega() * t).sin_cos();
        Self {
            s,
            c,
            inv_ratio: spec.omega0() / spec.omega(),
            ratio: spec.omega() / spec.omega0(),
            gamma: spec.gamma(),
        }
    }

    pub fn denominator(&self) -> f64 {
        self.gamma * self.s + self.ratio * self.c
    }

    pub fn aux_c(&self) -> f64 {
        let d = self.denominator();
        self.s * self.s + d * d
    }

    /// `(B / sigma0)^2`, written so that `t = 0` gives exactly 1.
    pub fn width_ratio_sq(&self) -> f64 {
        let es = self.inv_ratio * self.s;
        let d = self.gamma * es + self.c;
        es * es + d * d
    }
}

/// Closed-form parameters of the evolved packet at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolvedParams {
    pub t: f64,
    pub width: f64,
    /// `1/R`; `None` at the instants where `sin(omega t) = 0`.
    pub inv_curvature: Option<f64>,
    pub gouy_principal: f64,
    pub aux_c: f64,
}

/// Packet width `B(t, gamma)`.
pub fn width(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    Ok(spec.sigma0() * Phasor::new(spec, t).width_ratio_sq().sqrt())
}

/// The auxiliary `C(t)` shared by the width and the curvature.
pub fn aux_c(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    Ok(Phasor::new(spec, t).aux_c())
}

/// Inverse curvature radius `u = 1/R`.
pub fn inv_curvature(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    let p = Phasor::new(spec, t);
    if p.s.abs() < CURVATURE_SINGULAR_TOL {
        return Err(Error::CurvatureSingular { t });
    }
    Ok(inv_curvature_unchecked(spec.omega(), &p))
}

pub(crate) fn inv_curvature_unchecked(omega: f64, p: &Phasor) -> f64 {
    let d = p.denominator();
    let numerator = p.c * p.s - (p.ratio * p.s - p.gamma * p.c) * d;
    omega * numerator / (p.s * p.s + d * d)
}

/// Principal-branch Gouy phase, `1/2 arctan(s / D)`.
///
/// Where `D = 0` the arctan limit `±pi/4` carries the sign of `sin(omega t)`.
pub fn gouy_principal(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    Ok(principal_from(&Phasor::new(spec, t)))
}

pub(crate) fn principal_from(p: &Phasor) -> f64 {
    let d = p.denominator();
    if d == 0.0 {
        FRAC_PI_4.copysign(p.s)
    } else {
        0.5 * (p.s / d).atan()
    }
}

/// Continuous Gouy phase at a single instant, zero at `t = 0`.
///
/// The map `(cos, sin) -> (D, sin)` preserves orientation, so the
/// continuous argument of `D + i sin` stays within `pi` of `omega t`; that
/// fixes the branch without sampling.
pub fn gouy_continuous(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    let p = Phasor::new(spec, t);
    let theta = spec.omega() * t;
    let arg = p.s.atan2(p.denominator());
    let turns = ((theta - arg) / (2.0 * PI)).round();
    Ok(0.5 * (arg + 2.0 * PI * turns))
}

/// `1/2 atan2(sin, D)`: the global phase produced by the principal branch
/// of the propagator prefactor. Congruent to the principal Gouy phase
/// modulo `pi/2` and to the continuous one modulo `pi`.
pub fn gouy_half_arg(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    let p = Phasor::new(spec, t);
    Ok(0.5 * p.s.atan2(p.denominator()))
}

/// Gouy rate `omega0 / (2 (B/sigma0)^2)`.
pub fn gouy_rate(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    finite("t", t)?;
    Ok(spec.omega0() / (2.0 * Phasor::new(spec, t).width_ratio_sq()))
}

/// All closed-form parameters at `t`.
pub fn evolved_params(spec: &WavepacketSpec, t: f64) -> Result<EvolvedParams> {
    finite("t", t)?;
    let p = Phasor::new(spec, t);
    Ok(EvolvedParams {
        t,
        width: spec.sigma0() * p.width_ratio_sq().sqrt(),
        inv_curvature: (p.s.abs() >= CURVATURE_SINGULAR_TOL)
            .then(|| inv_curvature_unchecked(spec.omega(), &p)),
        gouy_principal: principal_from(&p),
        aux_c: p.aux_c(),
    })
}

/// Resonant specialisation `omega = omega0`.
pub fn resonance_params(spec: &WavepacketSpec, t: f64) -> Result<EvolvedParams> {
    spec.require_resonance()?;
    finite("t", t)?;
    let (s, c) = (spec.omega() * t).sin_cos();
    let g = spec.gamma();
    let d = g * s + c;
    let aux = s * s + d * d;
    let mu = if d == 0.0 {
        FRAC_PI_4.copysign(s)
    } else {
        0.5 * (s / d).atan()
    };
    let u = (s.abs() >= CURVATURE_SINGULAR_TOL)
        .then(|| spec.omega() * (c * s - (s - g * c) * d) / aux);
    Ok(EvolvedParams {
        t,
        width: spec.sigma0() * s.hypot(d),
        inv_curvature: u,
        gouy_principal: mu,
        aux_c: aux,
    })
}
