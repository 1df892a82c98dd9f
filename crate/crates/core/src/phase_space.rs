//! Single-mode covariance algebra and Wigner functions.
//!
//! Phase-space coordinates are dimensionless, `x / sigma0` and
//! `p sigma0 / hbar`. In this convention the vacuum covariance is
//! `1/2 * identity`, a pure Gaussian has `det = 1/4` and the purity is
//! `1 / (2 sqrt(det))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;
use crate::oracle::ComplexField;

/// Slack allowed below the uncertainty bound `det >= 1/4`.
pub const UNCERTAINTY_SLACK: f64 = 1e-12;

/// Symmetric 2x2 covariance plus displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceState {
    sxx: f64,
    sxp: f64,
    spp: f64,
    d: [f64; 2],
}

impl CovarianceState {
    /// Validated state with zero displacement.
    pub fn new(sxx: f64, sxp: f64, spp: f64) -> Result<Self> {
        Self::displaced(sxx, sxp, spp, [0.0, 0.0])
    }

    pub fn displaced(sxx: f64, sxp: f64, spp: f64, d: [f64; 2]) -> Result<Self> {
        for (name, v) in [("sxx", sxx), ("sxp", sxp), ("spp", spp), ("dx", d[0]), ("dp", d[1])] {
            finite(name, v)?;
        }
        let det = sxx * spp - sxp * sxp;
        if !(sxx > 0.0 && spp > 0.0 && det > 0.0) {
            return Err(Error::NotPositiveDefinite { det });
        }
        if det < 0.25 - UNCERTAINTY_SLACK {
            return Err(Error::UncertaintyViolation { det });
        }
        Ok(Self { sxx, sxp, spp, d })
    }

    pub fn sxx(&self) -> f64 {
        self.sxx
    }

    pub fn sxp(&self) -> f64 {
        self.sxp
    }

    pub fn spp(&self) -> f64 {
        self.spp
    }

    pub fn displacement(&self) -> [f64; 2] {
        self.d
    }

    pub fn det(&self) -> f64 {
        self.sxx * self.spp - self.sxp * self.sxp
    }

    /// `sxp / sqrt(sxx spp)`.
    pub fn pearson(&self) -> f64 {
        self.sxp / (self.sxx * self.spp).sqrt()
    }

    /// `[[a, b], [b, c]]` of the inverse.
    pub fn inverse(&self) -> [f64; 3] {
        let det = self.det();
        [self.spp / det, -self.sxp / det, self.sxx / det]
    }

    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.sxx, self.sxp], [self.sxp, self.spp]]
    }
}

/// Squeezing `zeta = r e^{i phi}` of the single-mode squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParams {
    r: f64,
    phi: f64,
}

impl SqueezeParams {
    /// `phi` is reduced to `(-pi, pi]`.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        finite("r", r)?;
        finite("phi", phi)?;
        if r < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "squeeze magnitude must be non-negative, got {r}"
            )));
        }
        let mut phi = phi - 2.0 * PI * (phi / (2.0 * PI)).round();
        if phi <= -PI {
            phi += 2.0 * PI;
        }
        Ok(Self { r, phi })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `1/2 [[1, gamma], [gamma, 1 + gamma^2]]`.
pub fn initial_covariance(gamma: f64) -> Result<CovarianceState> {
    finite("gamma", gamma)?;
    CovarianceState::new(0.5, 0.5 * gamma, 0.5 * (1.0 + gamma * gamma))
}

/// Squeezed-vacuum covariance
/// `1/2 [[cosh 2r - sinh 2r cos phi, -sinh 2r sin phi], [., cosh 2r + sinh 2r cos phi]]`.
pub fn squeezed_covariance(params: SqueezeParams) -> Result<CovarianceState> {
    let (ch, sh) = ((2.0 * params.r).cosh(), (2.0 * params.r).sinh());
    let (sp, cp) = params.phi.sin_cos();
    CovarianceState::new(
        0.5 * (ch - sh * cp),
        -0.5 * sh * sp,
        0.5 * (ch + sh * cp),
    )
}

/// Correlation of the tilted squeezed vacuum, `gamma = -sinh(2r) sin(phi)`.
pub fn gamma_from_squeeze(params: SqueezeParams) -> f64 {
    -(2.0 * params.r).sinh() * params.phi.sin()
}

/// Covariance of the evolved packet at resonance. With `theta = omega t`,
/// `C = sin^2 + (gamma sin + cos)^2` and `K = gamma sin cos + cos 2 theta`:
/// `sxx = C/2`, `sxp = gamma K / 2`, `spp = (1 + gamma^2 K^2) / (2C)`.
pub fn evolved_covariance(spec: &WavepacketSpec, t: f64) -> Result<CovarianceState> {
    spec.require_resonance()?;
    finite("t", t)?;
    let theta = spec.omega() * t;
    let (s, c) = theta.sin_cos();
    let g = spec.gamma();
    let d = g * s + c;
    let aux = s * s + d * d;
    let k = g * s * c + (2.0 * theta).cos();
    CovarianceState::new(
        0.5 * aux,
        0.5 * g * k,
        (1.0 + g * g * k * k) / (2.0 * aux),
    )
}

/// Free evolution of the uncorrelated packet after `t / tau0`:
/// `1/2 [[1 + tau^2, tau], [tau, 1]]`.
pub fn free_covariance(t_over_tau: f64) -> Result<CovarianceState> {
    finite("t_over_tau", t_over_tau)?;
    let tau = t_over_tau;
    CovarianceState::new(0.5 * (1.0 + tau * tau), 0.5 * tau, 0.5)
}

/// `1 / (2 sqrt(det))`.
pub fn purity(cov: &CovarianceState) -> Result<f64> {
    let det = cov.det();
    if !(det > 0.0) {
        return Err(Error::NotPositiveDefinite { det });
    }
    Ok(0.5 / det.sqrt())
}

/// Gaussian Wigner function `exp[-1/2 r^T sigma^-1 r] / (2 pi sqrt(det))`.
pub fn wigner_gaussian(cov: &CovarianceState, x: f64, p: f64) -> Result<f64> {
    let det = cov.det();
    if !(det > 0.0) {
        return Err(Error::NotPositiveDefinite { det });
    }
    let [a, b, c] = cov.inverse();
    let (dx, dp) = (x - cov.d[0], p - cov.d[1]);
    let q = a * dx * dx + 2.0 * b * dx * dp + c * dp * dp;
    Ok((-0.5 * q).exp() / (2.0 * PI * det.sqrt()))
}

/// A Wigner function tabulated on an `n x n` grid over `[lo, hi]^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerGrid {
    pub axis: Vec<f64>,
    /// Row-major, `values[i * n + j] = W(axis[i], axis[j])` with `x` first.
    pub values: Vec<f64>,
}

impl WignerGrid {
    /// Trapezoid `∫∫ W dx dp`.
    pub fn integral(&self) -> f64 {
        let n = self.axis.len();
        if n < 2 {
            return 0.0;
        }
        let h = self.axis[1] - self.axis[0];
        let edge = |k: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                total += edge(i) * edge(j) * self.values[i * n + j];
            }
        }
        total * h * h
    }
}

pub fn wigner_grid(cov: &CovarianceState, lo: f64, hi: f64, n: usize) -> Result<WignerGrid> {
    finite("lo", lo)?;
    finite("hi", hi)?;
    if !(lo < hi) || n < 2 {
        return Err(Error::InvalidGrid(format!(
            "need lo < hi and at least 2 points, got [{lo}, {hi}] with {n}"
        )));
    }
    let axis: Vec<f64> = (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(n * n);
    for &x in &axis {
        for &p in &axis {
            values.push(wigner_gaussian(cov, x, p)?);
        }
    }
    Ok(WignerGrid { axis, values })
}

/// `W(x, p) = (1/pi) ∫ dy e^{2ipy} psi*(x + y) psi(x - y)` in dimensionless
/// units, by the trapezoid rule over the field's own samples.
///
/// The field grid must be uniform. Both `x ± y` land on samples only when
/// `x * sigma0` lies on a node or half-node of that grid, which is
/// therefore required; `y` then advances by one grid step.
pub fn wigner_from_wavefunction(field: &ComplexField, sigma0: f64, x: f64, p: f64) -> Result<f64> {
    finite("x", x)?;
    finite("p", p)?;
    finite("sigma0", sigma0)?;
    let n = field.xs.len();
    if n < 3 || field.values.len() != n {
        return Err(Error::InvalidGrid("field needs at least 3 samples".into()));
    }
    let h = (field.xs[n - 1] - field.xs[0]) / (n - 1) as f64;
    for (k, w) in field.xs.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::InvalidGrid(format!(
                "field grid is not uniform at index {}",
                k + 1
            )));
        }
    }
    let dy = h / sigma0;
    if p.abs() * dy > PI / 4.0 {
        return Err(Error::GridTooCoarse {
            p,
            product: p.abs() * dy,
        });
    }

    let half_steps = 2.0 * (x * sigma0 - field.xs[0]) / h;
    let k = half_steps.round();
    if (half_steps - k).abs() > 1e-6 || k < 0.0 || k > 2.0 * (n - 1) as f64 {
        return Err(Error::InvalidGrid(format!(
            "x = {x} is not on a node or half-node of the field grid"
        )));
    }
    let k = k as i64;
    let last = n as i64 - 1;
    // a + b = k, a - b = m, y = m h / 2
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    let mut m = -(k.min(2 * last - k));
    while m <= k.min(2 * last - k) {
        if (k + m) % 2 == 0 {
            let a = ((k + m) / 2) as usize;
            let b = ((k - m) / 2) as usize;
            let y = 0.5 * m as f64 * dy;
            let phase = num_complex::Complex64::from_polar(1.0, 2.0 * p * y);
            acc += phase * field.values[a].conj() * field.values[b];
        }
        m += 1;
    }
    // dy is dimensionless; psi is rescaled by sqrt(sigma0) on each factor
    Ok((acc * h / PI).re)
}
