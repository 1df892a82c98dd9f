//! Classical and quantum Fisher information for estimating the trap
//! frequency from position measurements, at resonance.
//!
//! Derivatives in `omega` are taken at fixed `t` through every `omega t`
//! product, with the length unit `sigma0` held fixed; the intrinsic
//! frequency follows `omega` so the packet stays resonant.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::Phasor;
use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;
use crate::oracle::GaussLegendre;
use crate::phase_space::{evolved_covariance, purity, CovarianceState};

/// Default relative finite-difference step, `h = 1e-5 * omega`.
pub const DEFAULT_H_REL: f64 = 1e-5;

/// Relative steps below this are round-off dominated.
pub const MIN_H_REL: f64 = 1e-9;

/// Relative mismatch between the closed-form CFI and the integral that is flagged.
pub const CFI_MISMATCH_TOL: f64 = 1e-4;

/// Purity above which the mixedness term of the QFI diverges.
pub const PURITY_DIVERGENCE_TOL: f64 = 1e-9;

/// Position likelihood `P(x|omega) = exp(-x^2/B^2) / (B sqrt(pi))` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodModel {
    pub spec: WavepacketSpec,
    pub t: f64,
}

impl LikelihoodModel {
    pub fn new(spec: WavepacketSpec, t: f64) -> Result<Self> {
        spec.require_resonance()?;
        finite("t", t)?;
        Ok(Self { spec, t })
    }

    /// Width as a function of the trap frequency, other things fixed.
    pub fn width_at(&self, omega: f64) -> f64 {
        let (s, c) = (omega * self.t).sin_cos();
        let d = self.spec.gamma() * s + c;
        self.spec.sigma0() * (s * s + d * d).sqrt()
    }

    pub fn density(&self, x: f64) -> f64 {
        density(self.width_at(self.spec.omega()), x)
    }
}

fn density(b: f64, x: f64) -> f64 {
    (-(x * x) / (b * b)).exp() / (b * PI.sqrt())
}

/// The unsimplified closed form
/// `t^2 gamma^2 (2 cos 2wt + gamma sin 2wt)^2 /
///  (8 sqrt 2 C^{9/2} [1 / (2 + gamma^2 - gamma^2 cos 2wt + 2 gamma sin 2wt)]^{5/2})`.
pub fn cfi_closed_form(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    spec.require_resonance()?;
    finite("t", t)?;
    let g = spec.gamma();
    let theta = spec.omega() * t;
    let (s2, c2) = (2.0 * theta).sin_cos();
    let aux = Phasor::new(spec, t).aux_c();
    let inner = 2.0 + g * g - g * g * c2 + 2.0 * g * s2;
    let numerator = t * t * g * g * (2.0 * c2 + g * s2).powi(2);
    if numerator == 0.0 {
        return Ok(0.0);
    }
    Ok(numerator / (8.0 * 2f64.sqrt() * aux.powf(4.5) * inner.recip().powf(2.5)))
}

/// `F = ∫ dx (∂_omega P)^2 / P` over `[-12B, 12B]`, with `∂_omega P` by
/// central differences of `P(x | omega ± h)` and Gauss-Legendre panels
/// doubled until the integral changes by at most `1e-8` relative.
pub fn cfi_numeric(model: &LikelihoodModel, h_omega: f64) -> Result<f64> {
    let omega = model.spec.omega();
    check_step(h_omega, omega)?;
    let b = model.width_at(omega);
    let (bp, bm) = (model.width_at(omega + h_omega), model.width_at(omega - h_omega));
    let rule = GaussLegendre::new(16)?;
    let integrand = |x: f64| {
        let p = density(b, x);
        if p == 0.0 {
            return 0.0;
        }
        let dp = (density(bp, x) - density(bm, x)) / (2.0 * h_omega);
        dp * dp / p
    };
    let l = 12.0 * b;
    // squared round-off floor of the difference quotient
    let atol = (1e3 * f64::EPSILON / h_omega).powi(2);
    let mut panels = 8;
    let mut last = rule.integrate(-l, l, panels, integrand);
    let mut change = f64::INFINITY;
    for _ in 0..10 {
        panels *= 2;
        let next = rule.integrate(-l, l, panels, integrand);
        let delta = (next - last).abs();
        change = delta / next.abs().max(f64::MIN_POSITIVE);
        last = next;
        if change <= 1e-8 || delta <= atol {
            return Ok(next);
        }
    }
    Err(Error::NotConverged { change })
}

fn check_step(h: f64, omega: f64) -> Result<()> {
    finite("h_omega", h)?;
    if !(h > 0.0) || h >= omega {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step must lie in (0, omega), got {h}"
        )));
    }
    if h < MIN_H_REL * omega {
        return Err(Error::StepTooSmall { h });
    }
    Ok(())
}

/// `2 (∂_omega B / B)^2`, the Fisher information of any centred Gaussian
/// likelihood, with `∂_omega B = t ∂_theta B` evaluated analytically.
pub fn cfi_gaussian_identity(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    spec.require_resonance()?;
    finite("t", t)?;
    let p = Phasor::new(spec, t);
    let g = spec.gamma();
    let d = g * p.s + p.c;
    let aux = p.s * p.s + d * d;
    // dC/dtheta = 2 gamma (gamma s c + cos 2 theta)
    let k = g * p.s * p.c + p.c * p.c - p.s * p.s;
    let dlogb = t * g * k / aux;
    Ok(2.0 * dlogb * dlogb)
}

/// `F_Q = t^2 gamma^2 (4 + gamma^2) / 2`.
pub fn qfi_closed_form(spec: &WavepacketSpec, t: f64) -> Result<f64> {
    spec.require_resonance()?;
    finite("t", t)?;
    let g2 = spec.gamma() * spec.gamma();
    Ok(0.5 * t * t * g2 * (4.0 + g2))
}

/// Which terms of the Gaussian QFI formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiOptions {
    /// Relative step `h / omega` for the central differences.
    pub h_rel: f64,
    /// Include `2 (∂ purity)^2 / (1 - purity^4)`; meaningless for pure states.
    pub mixedness: bool,
}

impl Default for QfiOptions {
    fn default() -> Self {
        Self {
            h_rel: DEFAULT_H_REL,
            mixedness: false,
        }
    }
}

/// Single-mode Gaussian QFI
/// `Tr[(σ^-1 ∂σ)^2] / (2 (1 + P^2)) + 2 (∂P)^2 / (1 - P^4) + 2 ∂dᵀ σ^-1 ∂d`,
/// `P` the purity. For a pure state the first denominator is 4. The
/// displacement is taken from the covariance family itself.
pub fn qfi_general(
    cov_fn: impl Fn(f64) -> Result<CovarianceState>,
    omega: f64,
    options: QfiOptions,
) -> Result<f64> {
    finite("omega", omega)?;
    let h = options.h_rel * omega;
    check_step(h, omega)?;
    let (c0, cp, cm) = (cov_fn(omega)?, cov_fn(omega + h)?, cov_fn(omega - h)?);
    let mu = purity(&c0)?;
    let [a, b, c] = c0.inverse();
    let ds = [
        (cp.sxx() - cm.sxx()) / (2.0 * h),
        (cp.sxp() - cm.sxp()) / (2.0 * h),
        (cp.spp() - cm.spp()) / (2.0 * h),
    ];
    // M = σ^-1 ∂σ
    let m00 = a * ds[0] + b * ds[1];
    let m01 = a * ds[1] + b * ds[2];
    let m10 = b * ds[0] + c * ds[1];
    let m11 = b * ds[1] + c * ds[2];
    let trace_sq = m00 * m00 + 2.0 * m01 * m10 + m11 * m11;
    let mut total = trace_sq / (2.0 * (1.0 + mu * mu));

    if options.mixedness {
        if mu > 1.0 - PURITY_DIVERGENCE_TOL {
            return Err(Error::PurityDivergence { purity: mu });
        }
        let dmu = (purity(&cp)? - purity(&cm)?) / (2.0 * h);
        total += 2.0 * dmu * dmu / (1.0 - mu.powi(4));
    }

    let (dp, dm) = (cp.displacement(), cm.displacement());
    let dd = [(dp[0] - dm[0]) / (2.0 * h), (dp[1] - dm[1]) / (2.0 * h)];
    total += 2.0 * (a * dd[0] * dd[0] + 2.0 * b * dd[0] * dd[1] + c * dd[1] * dd[1]);
    Ok(total)
}

/// QFI of the evolved resonant packet through [`qfi_general`].
pub fn qfi_evolved(spec: &WavepacketSpec, t: f64, options: QfiOptions) -> Result<f64> {
    spec.require_resonance()?;
    finite("t", t)?;
    let (units, gamma) = (spec.units(), spec.gamma());
    qfi_general(
        |w| evolved_covariance(&WavepacketSpec::new(w, w, gamma, units)?, t),
        spec.omega(),
        options,
    )
}

/// `1 / sqrt(n F)`.
pub fn crlb(information: f64, n_repetitions: u64) -> Result<f64> {
    finite("information", information)?;
    if n_repetitions == 0 {
        return Err(Error::InvalidArgument(
            "at least one repetition is required".into(),
        ));
    }
    if information < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Fisher information must be non-negative, got {information}"
        )));
    }
    if information == 0.0 {
        return Err(Error::ZeroInformation);
    }
    Ok(1.0 / (n_repetitions as f64 * information).sqrt())
}

/// Fisher information and bounds at one `(t, omega, gamma)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FisherReport {
    pub t: f64,
    pub gamma: f64,
    pub omega: f64,
    pub cfi_closed: f64,
    pub cfi_numeric: f64,
    pub qfi_closed: f64,
    pub qfi_general: f64,
    /// `1 / sqrt(QFI)`; `None` when the information vanishes.
    pub crlb_single_shot: Option<f64>,
    pub diagnostics: Vec<String>,
}

/// Classical- and quantum-limited standard deviations for `n` repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CramerRao {
    pub classical: f64,
    pub quantum: f64,
}

impl FisherReport {
    pub fn bounds(&self, n_repetitions: u64) -> Result<CramerRao> {
        Ok(CramerRao {
            classical: crlb(self.cfi_numeric, n_repetitions)?,
            quantum: crlb(self.qfi_general, n_repetitions)?,
        })
    }
}

pub fn fisher_report(spec: &WavepacketSpec, t: f64) -> Result<FisherReport> {
    let model = LikelihoodModel::new(*spec, t)?;
    let h = DEFAULT_H_REL * spec.omega();
    let cfi_closed = cfi_closed_form(spec, t)?;
    let cfi_num = cfi_numeric(&model, h)?;
    let qfi_closed = qfi_closed_form(spec, t)?;
    let qfi_gen = qfi_evolved(spec, t, QfiOptions::default())?;

    let mut diagnostics = Vec::new();
    let scale = cfi_num.abs().max(1e-12 * qfi_gen.abs());
    if scale > 0.0 && (cfi_closed - cfi_num).abs() > CFI_MISMATCH_TOL * scale {
        diagnostics.push(format!(
            "cfi_closed_mismatch: {:.3e} relative",
            (cfi_closed - cfi_num).abs() / scale
        ));
    }
    if cfi_num > qfi_gen * (1.0 + 1e-6) + 1e-12 {
        diagnostics.push("information_inequality_violated".into());
    }
    if qfi_closed > 0.0 && (qfi_closed - qfi_gen).abs() > 1e-6 * qfi_closed {
        diagnostics.push("qfi_closed_mismatch".into());
    }
    let crlb_single_shot = crlb(qfi_gen, 1).ok();
    if crlb_single_shot.is_none() {
        diagnostics.push("zero_information".into());
    }
    Ok(FisherReport {
        t,
        gamma: spec.gamma(),
        omega: spec.omega(),
        cfi_closed,
        cfi_numeric: cfi_num,
        qfi_closed,
        qfi_general: qfi_gen,
        crlb_single_shot,
        diagnostics,
    })
}

/// `Σ (∂P_i)^2 / P_i` over discrete outcomes.
pub fn discrete_cfi(probs: &[f64], dprobs: &[f64]) -> Result<f64> {
    if probs.len() != dprobs.len() {
        return Err(Error::LengthMismatch {
            left: probs.len(),
            right: dprobs.len(),
        });
    }
    let mut total = 0.0;
    for (index, (&p, &dp)) in probs.iter().zip(dprobs).enumerate() {
        if !(p > 0.0) {
            return Err(Error::NonPositiveProbability { index, value: p });
        }
        total += dp * dp / p;
    }
    Ok(total)
}

/// Outcome of the CFI-peak versus Gouy-sign-change comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coincidence {
    pub t_cfi_max: f64,
    /// Sign change of the principal Gouy phase nearest the CFI peak.
    pub t_mu_signchange: f64,
    pub separation: f64,
    pub ratio_max_cfi_over_qfi: f64,
    pub diagnostics: Vec<String>,
}

/// Samples per period used to bracket the CFI peak.
const COINCIDENCE_SAMPLES: usize = 400;

/// Locate the CFI maximum in `[t_lo, t_hi]` and the principal-Gouy sign
/// change nearest to it. Sign changes (zeros of `sin` and poles of `D`)
/// are searched a quarter period beyond either end of the window, so an
/// event sitting on the boundary is not missed.
pub fn cfi_gouy_coincidence(spec: &WavepacketSpec, t_lo: f64, t_hi: f64) -> Result<Coincidence> {
    spec.require_resonance()?;
    finite("t_lo", t_lo)?;
    finite("t_hi", t_hi)?;
    if !(t_lo < t_hi) {
        return Err(Error::EmptyWindow { lo: t_lo, hi: t_hi });
    }
    let h = DEFAULT_H_REL * spec.omega();
    let cfi_at = |t: f64| -> Result<f64> { cfi_numeric(&LikelihoodModel::new(*spec, t)?, h) };

    let n = ((t_hi - t_lo) / spec.period() * COINCIDENCE_SAMPLES as f64).ceil() as usize;
    let n = n.max(COINCIDENCE_SAMPLES);
    let mut best = (t_lo, f64::NEG_INFINITY);
    let mut best_k = 0;
    for k in 0..=n {
        let t = t_lo + (t_hi - t_lo) * k as f64 / n as f64;
        let f = cfi_at(t)?;
        if f > best.1 {
            best = (t, f);
            best_k = k;
        }
    }
    let mut diagnostics = Vec::new();
    if best.1 <= 0.0 {
        diagnostics.push("zero_information".into());
    }
    let step = (t_hi - t_lo) / n as f64;
    let (a, b) = (
        (t_lo + step * best_k.saturating_sub(1) as f64).max(t_lo),
        (t_lo + step * (best_k + 1) as f64).min(t_hi),
    );
    let t_peak = if best.1 > 0.0 {
        golden_max(|t| cfi_at(t).unwrap_or(f64::NEG_INFINITY), a, b)
    } else {
        best.0
    };
    let peak = cfi_at(t_peak)?.max(best.1);
    let qfi = qfi_evolved(spec, t_peak, QfiOptions::default())?;
    let ratio = if qfi > 0.0 { peak / qfi } else { 0.0 };

    let pad = 0.25 * spec.period();
    let events = gouy_sign_changes(spec, t_lo - pad, t_hi + pad)?;
    let t_mu = events
        .iter()
        .copied()
        .min_by(|x, y| (x - t_peak).abs().total_cmp(&(y - t_peak).abs()))
        .unwrap_or(f64::NAN);
    if events.is_empty() {
        diagnostics.push("no_gouy_sign_change".into());
    }
    Ok(Coincidence {
        t_cfi_max: t_peak,
        t_mu_signchange: t_mu,
        separation: (t_peak - t_mu).abs(),
        ratio_max_cfi_over_qfi: ratio,
        diagnostics,
    })
}

/// Instants in `[lo, hi]` where the principal Gouy phase changes sign:
/// zeros of `sin(omega t)` and zeros of the denominator `D`.
pub fn gouy_sign_changes(spec: &WavepacketSpec, lo: f64, hi: f64) -> Result<Vec<f64>> {
    finite("lo", lo)?;
    finite("hi", hi)?;
    let w = spec.omega();
    let mut out = Vec::new();
    let first = (lo * w / PI).ceil() as i64;
    let last = (hi * w / PI).floor() as i64;
    for k in first..=last {
        out.push(k as f64 * PI / w);
    }
    // D = gamma s + r c = 0  <=>  theta = atan2(-r, gamma) mod pi
    let r = w / spec.omega0();
    let base = (-r).atan2(spec.gamma());
    let first = ((lo * w - base) / PI).ceil() as i64;
    let last = ((hi * w - base) / PI).floor() as i64;
    for k in first..=last {
        out.push((base + k as f64 * PI) / w);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() <= 1e-10 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
