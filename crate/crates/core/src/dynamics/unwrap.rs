use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::{gouy_continuous, principal_from, Phasor};
use crate::error::{finite, Error, Result};
use crate::model::WavepacketSpec;

/// Sampled Gouy phase on both branches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GouyTrace {
    pub times: Vec<f64>,
    pub principal: Vec<f64>,
    pub unwrapped: Vec<f64>,
    /// Instants where the denominator `D` crossed zero and `pi/2` was added.
    pub jump_times: Vec<f64>,
}

impl GouyTrace {
    /// Unwrapped phase gained between the first and last sample.
    pub fn accumulated(&self) -> f64 {
        match (self.unwrapped.first(), self.unwrapped.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }
}

/// Largest step that still resolves every branch event: `D` has two zeros
/// per `2 pi / omega`, so `pi / (8 omega)` never straddles two.
pub fn max_unwrap_step(spec: &WavepacketSpec) -> f64 {
    PI / (8.0 * spec.omega())
}

/// Unwrap the principal Gouy phase by continuity over ascending `times`.
///
/// The first sample is placed on the continuous branch (zero at `t = 0`);
/// afterwards `pi/2` is added whenever `D` changes sign between samples.
/// `D == 0` is classified with the non-negative side, which matches the
/// `±pi/4` value returned there by [`super::gouy_principal`].
pub fn gouy_unwrapped(spec: &WavepacketSpec, times: &[f64]) -> Result<GouyTrace> {
    let limit = max_unwrap_step(spec);
    for (i, &t) in times.iter().enumerate() {
        finite("t", t)?;
        if i > 0 {
            let step = t - times[i - 1];
            if step <= 0.0 {
                return Err(Error::NotAscending { index: i });
            }
            if step > limit * (1.0 + 1e-12) {
                return Err(Error::StepTooLarge {
                    index: i,
                    step,
                    limit,
                });
            }
        }
    }

    let n = times.len();
    let mut principal = Vec::with_capacity(n);
    let mut unwrapped = Vec::with_capacity(n);
    let mut jump_times = Vec::new();
    let Some(&t0) = times.first() else {
        return Ok(GouyTrace {
            times: Vec::new(),
            principal,
            unwrapped,
            jump_times,
        });
    };

    let first = Phasor::new(spec, t0);
    let mu0 = principal_from(&first);
    let start = gouy_continuous(spec, t0)?;
    let mut offset = ((start - mu0) / FRAC_PI_2).round() * FRAC_PI_2;
    let mut side = first.denominator() >= 0.0;
    principal.push(mu0);
    unwrapped.push(mu0 + offset);

    for w in times.windows(2) {
        let (ta, tb) = (w[0], w[1]);
        let p = Phasor::new(spec, tb);
        let now = p.denominator() >= 0.0;
        if now != side {
            offset += FRAC_PI_2;
            jump_times.push(locate_pole(spec, ta, tb));
            side = now;
        }
        let mu = principal_from(&p);
        principal.push(mu);
        unwrapped.push(mu + offset);
    }

    Ok(GouyTrace {
        times: times.to_vec(),
        principal,
        unwrapped,
        jump_times,
    })
}

/// Bisect the sign change of `D` inside `[a, b]`.
fn locate_pole(spec: &WavepacketSpec, mut a: f64, mut b: f64) -> f64 {
    let side = |t: f64| Phasor::new(spec, t).denominator() >= 0.0;
    let sa = side(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if side(m) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    b
}
