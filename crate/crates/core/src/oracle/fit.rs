use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use super::{trapezoid, ComplexField};
use crate::error::{Error, Result};
use crate::model::UnitSystem;

/// RMS residual of the log-magnitude fit above which a field is not Gaussian.
pub const GAUSSIAN_FIT_TOL: f64 = 1e-6;

/// Samples below this fraction of the peak density are left out of the fits.
const DENSITY_FLOOR: f64 = 1e-6;

/// Parameters recovered from a sampled Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFit {
    /// `B`, from `<x^2> = B^2 / 2`.
    pub width: f64,
    /// `u = 1/R`, from the quadratic phase coefficient `m u / (2 hbar)`.
    pub inv_curvature: f64,
    /// `-arg psi(0)`, as produced by the field.
    pub global_phase: f64,
    /// `global_phase` reduced to `(-pi/4, pi/4]`.
    pub mu_principal: f64,
    /// RMS residual of the quadratic fit to `ln |psi|`.
    pub residual: f64,
}

/// Read `(B, u, mu)` back from a sampled field.
pub fn fit_gaussian_params(field: &ComplexField, units: UnitSystem) -> Result<GaussianFit> {
    let n = field.xs.len();
    if n != field.values.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: field.values.len(),
        });
    }
    if n < 5 {
        return Err(Error::InvalidGrid(format!(
            "at least 5 samples are needed for a Gaussian fit, got {n}"
        )));
    }
    let density: Vec<f64> = field.values.iter().map(|v| v.norm_sqr()).collect();
    let peak = density.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::NotGaussian {
            residual: f64::INFINITY,
        });
    }
    let kept: Vec<usize> = (0..n).filter(|&k| density[k] >= DENSITY_FLOOR * peak).collect();
    if kept.len() < 5 {
        return Err(Error::InvalidGrid(
            "too few samples above the density floor".into(),
        ));
    }

    let scale = field.xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let xs: Vec<f64> = kept.iter().map(|&k| field.xs[k] / scale).collect();
    let log_mag: Vec<f64> = kept.iter().map(|&k| field.values[k].norm().ln()).collect();
    let mag_fit = quadratic_fit(&xs, &log_mag)?;
    let residual = rms_residual(&xs, &log_mag, &mag_fit);
    if !(residual <= GAUSSIAN_FIT_TOL) {
        return Err(Error::NotGaussian { residual });
    }

    // phase relative to the sample nearest the origin, unwrapped outward
    let centre = kept
        .iter()
        .enumerate()
        .min_by(|a, b| field.xs[*a.1].abs().total_cmp(&field.xs[*b.1].abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut phase = vec![0.0; kept.len()];
    phase[centre] = field.values[kept[centre]].arg();
    for i in centre + 1..kept.len() {
        phase[i] = unwrap_step(phase[i - 1], field.values[kept[i]].arg());
    }
    for i in (0..centre).rev() {
        phase[i] = unwrap_step(phase[i + 1], field.values[kept[i]].arg());
    }
    let phase_fit = quadratic_fit(&xs, &phase)?;

    let norm = trapezoid(&field.xs, |k| density[k]);
    let second = trapezoid(&field.xs, |k| field.xs[k] * field.xs[k] * density[k]);
    let width = (2.0 * second / norm).sqrt();

    let quad = phase_fit[2] / (scale * scale);
    let global_phase = -phase_fit[0];
    Ok(GaussianFit {
        width,
        inv_curvature: 2.0 * units.hbar() * quad / units.mass(),
        global_phase,
        mu_principal: reduce_quarter(global_phase),
        residual,
    })
}

fn unwrap_step(prev: f64, raw: f64) -> f64 {
    let turns = ((prev - raw) / (2.0 * PI)).round();
    raw + 2.0 * PI * turns
}

/// Reduce into `(-pi/4, pi/4]` modulo `pi/2`.
fn reduce_quarter(mu: f64) -> f64 {
    let r = mu - FRAC_PI_2 * (mu / FRAC_PI_2).round();
    if r <= -FRAC_PI_4 {
        r + FRAC_PI_2
    } else {
        r
    }
}

/// Least-squares `c0 + c1 x + c2 x^2`.
fn quadratic_fit(xs: &[f64], ys: &[f64]) -> Result<[f64; 3]> {
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (&x, &y) in xs.iter().zip(ys) {
        let row = [1.0, x, x * x];
        for i in 0..3 {
            b[i] += row[i] * y;
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    solve3(a, b).ok_or_else(|| Error::InvalidGrid("degenerate sample positions".into()))
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn rms_residual(xs: &[f64], ys: &[f64], c: &[f64; 3]) -> f64 {
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (y - (c[0] + c[1] * x + c[2] * x * x)).powi(2))
        .sum();
    (ss / xs.len() as f64).sqrt()
}
