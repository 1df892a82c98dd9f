use super::{flag_cell, Cell, Dataset, Quantity, Scenario, SweepVariable};
use crate::dynamics::{self, max_unwrap_step};
use crate::error::Result;
use crate::estimation::{cfi_numeric, qfi_closed_form, LikelihoodModel, DEFAULT_H_REL};
use crate::model::WavepacketSpec;
use crate::phase_space::{evolved_covariance, wigner_gaussian};

/// Quantities in column order, with `mu_principal` swapped for
/// `mu_unwrapped` when the scenario asks for unwrapping.
fn effective_outputs(scenario: &Scenario) -> Vec<Quantity> {
    let mut out: Vec<Quantity> = Vec::new();
    for &q in &scenario.outputs {
        let q = if scenario.unwrap && q == Quantity::MuPrincipal {
            Quantity::MuUnwrapped
        } else {
            q
        };
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Evaluate every requested quantity at every sample.
///
/// A sample whose evaluation fails keeps its row: the affected cells are
/// left empty and the error kinds are listed in the trailing `flag` column.
pub fn run_sweep(scenario: &Scenario) -> Result<Dataset> {
    let outputs = effective_outputs(scenario);
    let mut columns = vec![scenario.sweep.variable.to_string()];
    for q in &outputs {
        columns.extend(q.columns().into_iter().map(String::from));
    }
    columns.push("flag".into());
    let mut data = Dataset::new("sweep", columns, scenario.echo());

    let values = scenario.sweep.values();
    let unwrapped = unwrapped_trace(scenario, &values);
    for (k, &v) in values.iter().enumerate() {
        let mut flags = Vec::new();
        let mut row = vec![Cell::Num(v)];
        let point = match scenario.sweep.variable {
            SweepVariable::T => Ok((scenario.spec, v)),
            SweepVariable::Omega => scenario.spec.with_omega(v).map(|s| (s, scenario.t)),
            SweepVariable::Gamma => scenario.spec.with_gamma(v).map(|s| (s, scenario.t)),
        };
        match point {
            Err(e) => {
                flags.push(e.kind().to_string());
                for q in &outputs {
                    row.extend(q.columns().iter().map(|_| Cell::Missing));
                }
            }
            Ok((spec, t)) => {
                for &q in &outputs {
                    let pre = unwrapped.as_ref().map(|u| u[k]);
                    match evaluate(&spec, t, q, pre) {
                        Ok(cells) => row.extend(cells),
                        Err(e) => {
                            let kind = e.kind().to_string();
                            if !flags.contains(&kind) {
                                flags.push(kind);
                            }
                            row.extend(q.columns().iter().map(|_| Cell::Missing));
                        }
                    }
                }
            }
        }
        row.push(flag_cell(&flags));
        data.push(row);
    }
    Ok(data)
}

/// For time sweeps that satisfy the step contract, the unwrapped phase
/// comes from tracking branch events along the samples.
fn unwrapped_trace(scenario: &Scenario, times: &[f64]) -> Option<Vec<f64>> {
    if scenario.sweep.variable != SweepVariable::T
        || !effective_outputs(scenario).contains(&Quantity::MuUnwrapped)
    {
        return None;
    }
    let step = (scenario.sweep.hi - scenario.sweep.lo) / (scenario.sweep.samples - 1) as f64;
    if step > max_unwrap_step(&scenario.spec) {
        return None;
    }
    dynamics::gouy_unwrapped(&scenario.spec, times)
        .ok()
        .map(|tr| tr.unwrapped)
}

fn evaluate(spec: &WavepacketSpec, t: f64, q: Quantity, unwrapped: Option<f64>) -> Result<Vec<Cell>> {
    let one = |v: f64| Ok(vec![Cell::Num(v)]);
    match q {
        Quantity::B => one(dynamics::width(spec, t)?),
        Quantity::U => one(dynamics::inv_curvature(spec, t)?),
        Quantity::MuPrincipal => one(dynamics::gouy_principal(spec, t)?),
        Quantity::MuUnwrapped => match unwrapped {
            Some(v) => one(v),
            None => one(dynamics::gouy_continuous(spec, t)?),
        },
        Quantity::GouyRate => one(dynamics::gouy_rate(spec, t)?),
        Quantity::Wigner => one(wigner_gaussian(&evolved_covariance(spec, t)?, 0.0, 0.0)?),
        Quantity::Cfi => {
            let model = LikelihoodModel::new(*spec, t)?;
            one(cfi_numeric(&model, DEFAULT_H_REL * spec.omega())?)
        }
        Quantity::Qfi => one(qfi_closed_form(spec, t)?),
        Quantity::Covariance => {
            let c = evolved_covariance(spec, t)?;
            Ok(vec![c.sxx().into(), c.sxp().into(), c.spp().into()])
        }
    }
}
