//! Independent ground truth for the closed forms.
//!
//! The evolved state is rebuilt by direct composite Gauss-Legendre
//! quadrature of the harmonic-oscillator propagator against the initial
//! correlated Gaussian, and (B, u, mu) are read back from the samples by
//! [`fit_gaussian_params`].

mod fit;
mod quadrature;

pub use fit::{fit_gaussian_params, GaussianFit, GAUSSIAN_FIT_TOL};
pub use quadrature::GaussLegendre;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, Phasor};
use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;

/// `|sin(omega t)|` below which the propagator itself is refused.
pub const KERNEL_SINGULAR_TOL: f64 = 1e-9;

/// Boundary-to-peak integrand ratio above which the cut is too tight.
pub const TRUNCATION_TOL: f64 = 1e-10;

/// A complex wavefunction sampled on an ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub t: f64,
}

impl ComplexField {
    /// Trapezoid `∫|psi|^2 dx` over the grid.
    pub fn norm_sq(&self) -> f64 {
        trapezoid(&self.xs, |k| self.values[k].norm_sqr())
    }

    /// Relative discrete L2 distance `||self - other|| / ||other||`.
    pub fn relative_l2(&self, other: &ComplexField) -> Result<f64> {
        if self.xs.len() != other.xs.len() {
            return Err(Error::LengthMismatch {
                left: self.xs.len(),
                right: other.xs.len(),
            });
        }
        let diff = trapezoid(&self.xs, |k| (self.values[k] - other.values[k]).norm_sqr());
        Ok((diff / other.norm_sq()).sqrt())
    }
}

pub(crate) fn trapezoid(xs: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    xs.windows(2)
        .enumerate()
        .map(|(k, w)| 0.5 * (w[1] - w[0]) * (f(k) + f(k + 1)))
        .sum()
}

/// Fixed-panel quadrature settings for [`evolve_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Half-width of the integration interval in units of `max(sigma0, B(t))`.
    pub cut_radius_in_widths: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// `|sin(omega t)|` below which [`evolve_numeric`] refuses to integrate.
    pub singular_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            cut_radius_in_widths: 12.0,
            panels: 64,
            nodes_per_panel: 32,
            singular_tol: 1e-3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cut_radius_in_widths >= 6.0) || !self.cut_radius_in_widths.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "cut_radius_in_widths must be at least 6, got {}",
                self.cut_radius_in_widths
            )));
        }
        if self.panels == 0 || self.nodes_per_panel == 0 {
            return Err(Error::InvalidConfig(
                "panels and nodes_per_panel must be positive".into(),
            ));
        }
        if self.panels.saturating_mul(self.nodes_per_panel) < 256 {
            return Err(Error::InvalidConfig(format!(
                "panels * nodes_per_panel must be at least 256, got {}",
                self.panels * self.nodes_per_panel
            )));
        }
        if !(self.singular_tol > 0.0 && self.singular_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "singular_tol must lie in (0, 1), got {}",
                self.singular_tol
            )));
        }
        Ok(())
    }
}

fn check_ascending(xs: &[f64]) -> Result<()> {
    for (i, &x) in xs.iter().enumerate() {
        finite("x", x)?;
        if i > 0 && x <= xs[i - 1] {
            return Err(Error::NotAscending { index: i });
        }
    }
    Ok(())
}

/// The correlated initial packet
/// `(sigma0 sqrt(pi))^(-1/2) exp[-x^2/(2 sigma0^2) + i gamma x^2/(2 sigma0^2)]`.
pub fn initial_state(spec: &WavepacketSpec, xs: &[f64]) -> Result<ComplexField> {
    check_ascending(xs)?;
    let values = xs.iter().map(|&x| initial_amplitude(spec, x)).collect();
    Ok(ComplexField {
        xs: xs.to_vec(),
        values,
        t: 0.0,
    })
}

fn initial_amplitude(spec: &WavepacketSpec, x: f64) -> Complex64 {
    let s0 = spec.sigma0();
    let q = x * x / (2.0 * s0 * s0);
    let norm = (s0 * PI.sqrt()).powf(-0.5);
    Complex64::new(-q, spec.gamma() * q).exp() * norm
}

/// Harmonic-oscillator propagator `G(x, t; x', 0)`.
///
/// The prefactor `sqrt(m omega / (2 pi i hbar sin))` is taken on the
/// principal branch, which reduces to the free-particle phase `e^{-i pi/4}`
/// as `omega t -> 0+`.
pub fn kernel(spec: &WavepacketSpec, x: f64, xp: f64, t: f64) -> Result<Complex64> {
    finite("x", x)?;
    finite("x'", xp)?;
    finite("t", t)?;
    let k = Kernel::new(spec, t, KERNEL_SINGULAR_TOL)?;
    Ok(k.eval(x, xp))
}

struct Kernel {
    prefactor: Complex64,
    /// `m omega / (2 hbar sin)`
    scale: f64,
    cos: f64,
}

impl Kernel {
    fn new(spec: &WavepacketSpec, t: f64, tol: f64) -> Result<Self> {
        let (s, c) = (spec.omega() * t).sin_cos();
        if s.abs() <= tol {
            return Err(Error::KernelSingular { t, sin_abs: s.abs() });
        }
        let u = spec.units();
        let a = u.mass() * spec.omega() / (2.0 * PI * u.hbar() * s);
        let prefactor = Complex64::new(0.0, -a).sqrt();
        Ok(Self {
            prefactor,
            scale: u.mass() * spec.omega() / (2.0 * u.hbar() * s),
            cos: c,
        })
    }

    fn eval(&self, x: f64, xp: f64) -> Complex64 {
        let phase = self.scale * (self.cos * (x * x + xp * xp) - 2.0 * x * xp);
        self.prefactor * Complex64::from_polar(1.0, phase)
    }
}

/// The evolved Gaussian written with the closed-form parameters,
/// `(B sqrt(pi))^(-1/2) exp[-x^2/(2B^2) + i m u x^2/(2 hbar) - i mu]`.
///
/// The global phase is `1/2 atan2(sin, D)`, the branch produced by the
/// principal square root in [`kernel`], so the result is directly
/// comparable with [`evolve_numeric`]. Valid at every `t`, including the
/// focal instants (the curvature is evaluated in its regular form).
pub fn closed_form_state(spec: &WavepacketSpec, t: f64, xs: &[f64]) -> Result<ComplexField> {
    finite("t", t)?;
    check_ascending(xs)?;
    let p = Phasor::new(spec, t);
    let b = dynamics::width(spec, t)?;
    let u = dynamics::inv_curvature_unchecked(spec.omega(), &p);
    let mu = dynamics::gouy_half_arg(spec, t)?;
    let units = spec.units();
    let curv = units.mass() * u / (2.0 * units.hbar());
    let norm = (b * PI.sqrt()).powf(-0.5);
    let values = xs
        .iter()
        .map(|&x| {
            let x2 = x * x;
            Complex64::new(-x2 / (2.0 * b * b), curv * x2 - mu).exp() * norm
        })
        .collect();
    Ok(ComplexField {
        xs: xs.to_vec(),
        values,
        t,
    })
}

/// Integration half-width `L = cut * max(sigma0, B(t))`.
pub fn integration_radius(spec: &WavepacketSpec, t: f64, config: &QuadratureConfig) -> Result<f64> {
    Ok(config.cut_radius_in_widths * spec.sigma0().max(dynamics::width(spec, t)?))
}

/// `psi(x, t) = ∫ dx' G(x, t; x', 0) psi0(x')` by composite Gauss-Legendre
/// quadrature over `[-L, L]`.
pub fn evolve_numeric(
    spec: &WavepacketSpec,
    t: f64,
    xs: &[f64],
    config: &QuadratureConfig,
) -> Result<ComplexField> {
    config.validate()?;
    finite("t", t)?;
    check_ascending(xs)?;
    let k = Kernel::new(spec, t, config.singular_tol)?;
    let l = integration_radius(spec, t, config)?;

    let peak = initial_amplitude(spec, 0.0).norm();
    let edge = initial_amplitude(spec, l).norm();
    if edge > TRUNCATION_TOL * peak {
        return Err(Error::TruncationTooTight { ratio: edge / peak });
    }

    let rule = GaussLegendre::new(config.nodes_per_panel)?;
    let weighted: Vec<(f64, Complex64)> = rule
        .composite(-l, l, config.panels)
        .into_iter()
        .map(|(xp, w)| (xp, initial_amplitude(spec, xp) * w))
        .collect();
    let values = xs
        .iter()
        .map(|&x| weighted.iter().map(|&(xp, wpsi)| k.eval(x, xp) * wpsi).sum())
        .collect();
    Ok(ComplexField {
        xs: xs.to_vec(),
        values,
        t,
    })
}

/// `n` equally spaced points on `[-half_width, half_width]`.
pub fn symmetric_grid(half_width: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|k| -half_width + 2.0 * half_width * k as f64 / (n - 1) as f64)
        .collect()
}
