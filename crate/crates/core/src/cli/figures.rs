//! Frozen figure recipes. Each recipe yields one dataset per panel.
//!
//! | id   | trap                        | gamma            | axis                       |
//! |------|-----------------------------|------------------|----------------------------|
//! | fig1 | omega0 = 10, t = 1          | -1, 0, 1         | omega - omega0 in [-10, 30], 2001 pts |
//! | fig2 | omega = 0.1, omega0 = 1     | -1, 0, 1 / 0 / 1 | t in [0, 10] and [0, 70]   |
//! | fig3 | omega = 10, omega0 = 1      | -10, 0, 10       | t in [0, 2 pi / omega]     |
//! | fig4 | omega = omega0 = 1          | -1, 0, 1         | t in [0, 3 pi]             |
//! | fig5 | omega = omega0 = 1          | [-3, 3] grid     | t in [0, pi] grid          |
//! | fig6 | omega = omega0 = 1          | 0, 0.1, 0.5      | omega t in [0, 2 pi]       |
//! | fig7 | omega = omega0 = 1          | 1, 3             | omega t in [0, pi]         |
//! | figA | initial state               | -1, 0, 1         | (x, p) in [-4, 4]^2, 201^2 |

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Value};

use super::{flag_cell, Cell, Dataset, Format, SweepAxis, SweepVariable};
use crate::dynamics;
use crate::error::{Error, Result};
use crate::estimation::{cfi_numeric, qfi_closed_form, LikelihoodModel, DEFAULT_H_REL};
use crate::model::WavepacketSpec;
use crate::phase_space::{initial_covariance, wigner_grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    FigA,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::FigA,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::FigA => "figA",
        })
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FigureOptions {
    /// Gouy columns on the continuous branch instead of the principal one.
    pub unwrapped: bool,
    /// Also emit the parametric CFI-versus-phase panel with the `gamma = 3`
    /// curve scaled by 1/9.
    pub fig7c_rescale: bool,
}

/// One curve per gamma against a shared axis.
struct CurvePanel<'a> {
    name: String,
    axis: SweepAxis,
    axis_name: &'static str,
    gammas: &'a [f64],
    quantity: &'static str,
    echo: Value,
}

impl CurvePanel<'_> {
    fn run(
        &self,
        point: impl Fn(f64, f64) -> Result<(WavepacketSpec, f64)>,
        eval: impl Fn(&WavepacketSpec, f64) -> Result<f64>,
    ) -> Dataset {
        let mut columns = vec![self.axis_name.to_string()];
        columns.extend(self.gammas.iter().map(|g| format!("{}_gamma_{g}", self.quantity)));
        columns.push("flag".into());
        let mut data = Dataset::new(self.name.clone(), columns, self.echo.clone());
        for x in self.axis.values() {
            let mut row = vec![Cell::Num(x)];
            let mut flags = Vec::new();
            for &g in self.gammas {
                match point(g, x).and_then(|(sp, t)| eval(&sp, t)) {
                    Ok(v) => row.push(Cell::Num(v)),
                    Err(e) => {
                        flags.push(format!("gamma={g}:{}", e.kind()));
                        row.push(Cell::Missing);
                    }
                }
            }
            row.push(flag_cell(&flags));
            data.push(row);
        }
        data
    }
}

fn axis(variable: SweepVariable, lo: f64, hi: f64, n: usize) -> SweepAxis {
    SweepAxis::new(variable, lo, hi, n).expect("recipe axes are valid")
}

fn phase_fn(unwrapped: bool) -> (&'static str, fn(&WavepacketSpec, f64) -> Result<f64>) {
    if unwrapped {
        ("mu_unwrapped", dynamics::gouy_continuous)
    } else {
        ("mu_principal", dynamics::gouy_principal)
    }
}

/// Datasets of one figure, in panel order.
pub fn figure_datasets(id: FigureId, options: FigureOptions) -> Result<Vec<Dataset>> {
    let (mu_name, mu) = phase_fn(options.unwrapped);
    let width = dynamics::width;
    let pi = std::f64::consts::PI;
    let natural = WavepacketSpec::natural;
    let tag = id.to_string();
    let echo = |panel: &str, extra: Value| {
        json!({ "figure": tag, "panel": panel, "phase_branch": mu_name, "recipe": extra })
    };
    let mut out = Vec::new();
    match id {
        FigureId::Fig1 => {
            let gammas = [-1.0, 0.0, 1.0];
            let params = json!({"omega0": 10.0, "t": 1.0, "gamma": gammas, "detuning": [-10.0, 30.0, 2001]});
            let point = |g: f64, det: f64| Ok((natural(10.0, 10.0 + det, g)?, 1.0));
            for (panel, q, f) in [("mu", mu_name, mu), ("width", "B", width as fn(&_, _) -> _)] {
                out.push(
                    CurvePanel {
                        name: format!("fig1_{panel}"),
                        axis: axis(SweepVariable::Omega, -10.0, 30.0, 2001),
                        axis_name: "detuning",
                        gammas: &gammas,
                        quantity: q,
                        echo: echo(panel, params.clone()),
                    }
                    .run(point, f),
                );
            }
        }
        FigureId::Fig2 => {
            let point = |g: f64, t: f64| Ok((natural(1.0, 0.1, g)?, t));
            let short = [-1.0, 0.0, 1.0];
            for (panel, q, f) in [("a_mu", mu_name, mu), ("b_width", "B", width as fn(&_, _) -> _)] {
                out.push(
                    CurvePanel {
                        name: format!("fig2{panel}"),
                        axis: axis(SweepVariable::T, 0.0, 10.0, 1001),
                        axis_name: "t",
                        gammas: &short,
                        quantity: q,
                        echo: echo(panel, json!({"omega": 0.1, "omega0": 1.0, "gamma": short, "t": [0.0, 10.0, 1001]})),
                    }
                    .run(point, f),
                );
            }
            for (panel, g) in [("c", 0.0), ("d", 1.0)] {
                let params = json!({"omega": 0.1, "omega0": 1.0, "gamma": g, "t": [0.0, 70.0, 7001]});
                let sp = natural(1.0, 0.1, g)?;
                out.push(time_table(
                    &format!("fig2{panel}"),
                    &sp,
                    axis(SweepVariable::T, 0.0, 70.0, 7001),
                    mu_name,
                    mu,
                    echo(panel, params),
                ));
            }
        }
        FigureId::Fig3 => {
            let gammas = [-10.0, 0.0, 10.0];
            let hi = 2.0 * pi / 10.0;
            let params = json!({"omega": 10.0, "omega0": 1.0, "gamma": gammas, "t": [0.0, hi, 2001]});
            let point = |g: f64, t: f64| Ok((natural(1.0, 10.0, g)?, t));
            for (panel, q, f) in [("mu", mu_name, mu), ("width", "B", width as fn(&_, _) -> _)] {
                out.push(
                    CurvePanel {
                        name: format!("fig3_{panel}"),
                        axis: axis(SweepVariable::T, 0.0, hi, 2001),
                        axis_name: "t",
                        gammas: &gammas,
                        quantity: q,
                        echo: echo(panel, params.clone()),
                    }
                    .run(point, f),
                );
            }
        }
        FigureId::Fig4 | FigureId::Fig6 => {
            let (gammas, hi, n, axis_name): (&[f64], f64, usize, &str) = if id == FigureId::Fig4 {
                (&[-1.0, 0.0, 1.0], 3.0 * pi, 1501, "t")
            } else {
                (&[0.0, 0.1, 0.5], 2.0 * pi, 1001, "omega_t")
            };
            let params = json!({"omega": 1.0, "omega0": 1.0, "gamma": gammas, axis_name: [0.0, hi, n]});
            let point = |g: f64, t: f64| Ok((natural(1.0, 1.0, g)?, t));
            for (panel, q, f) in [("mu", mu_name, mu), ("width", "B", width as fn(&_, _) -> _)] {
                out.push(
                    CurvePanel {
                        name: format!("{tag}_{panel}"),
                        axis: axis(SweepVariable::T, 0.0, hi, n),
                        axis_name,
                        gammas,
                        quantity: q,
                        echo: echo(panel, params.clone()),
                    }
                    .run(point, f),
                );
            }
        }
        FigureId::Fig5 => {
            let (ng, nt) = (121, 121);
            let gam = axis(SweepVariable::Gamma, -3.0, 3.0, ng);
            let times = axis(SweepVariable::T, 0.0, pi, nt);
            let params = json!({"omega": 1.0, "omega0": 1.0, "gamma": [-3.0, 3.0, ng], "t": [0.0, pi, nt]});
            for (panel, q, f) in [("mu", mu_name, mu), ("width", "B", width as fn(&_, _) -> _)] {
                let mut data = Dataset::new(
                    format!("fig5_{panel}"),
                    vec!["gamma".into(), "t".into(), q.into(), "flag".into()],
                    echo(panel, params.clone()),
                );
                for g in gam.values() {
                    let sp = natural(1.0, 1.0, g)?;
                    for t in times.values() {
                        let (cell, flag) = match f(&sp, t) {
                            Ok(v) => (Cell::Num(v), Cell::Missing),
                            Err(e) => (Cell::Missing, Cell::Text(e.kind().into())),
                        };
                        data.push(vec![g.into(), t.into(), cell, flag]);
                    }
                }
                out.push(data);
            }
        }
        FigureId::Fig7 => {
            let n = 401;
            let mut curves = Vec::new();
            for g in [1.0, 3.0] {
                let sp = natural(1.0, 1.0, g)?;
                let params = json!({"omega": 1.0, "omega0": 1.0, "gamma": g, "omega_t": [0.0, pi, n]});
                let mut data = Dataset::new(
                    format!("fig7_gamma_{g}"),
                    vec![
                        "omega_t".into(),
                        "cfi".into(),
                        "qfi".into(),
                        "mu_principal".into(),
                        "flag".into(),
                    ],
                    echo(&format!("gamma_{g}"), params),
                );
                for t in axis(SweepVariable::T, 0.0, pi, n).values() {
                    let mut flags = Vec::new();
                    let mut cell = |r: Result<f64>| match r {
                        Ok(v) => Cell::Num(v),
                        Err(e) => {
                            flags.push(e.kind().to_string());
                            Cell::Missing
                        }
                    };
                    let cfi = cell(
                        LikelihoodModel::new(sp, t)
                            .and_then(|m| cfi_numeric(&m, DEFAULT_H_REL * sp.omega())),
                    );
                    let qfi = cell(qfi_closed_form(&sp, t));
                    let mu_p = cell(dynamics::gouy_principal(&sp, t));
                    curves.push((g, mu_p.clone(), cfi.clone()));
                    data.push(vec![t.into(), cfi, qfi, mu_p, flag_cell(&flags)]);
                }
                out.push(data);
            }
            if options.fig7c_rescale {
                let mut data = Dataset::new(
                    "fig7c",
                    vec!["gamma".into(), "mu_principal".into(), "cfi_scaled".into()],
                    echo("c", json!({"gamma": [1.0, 3.0], "scale": {"1": 1.0, "3": 1.0 / 9.0}})),
                );
                for (g, mu_p, cfi) in curves {
                    let scale = if g == 3.0 { 1.0 / 9.0 } else { 1.0 };
                    let cfi = match cfi {
                        Cell::Num(v) => Cell::Num(v * scale),
                        other => other,
                    };
                    data.push(vec![g.into(), mu_p, cfi]);
                }
                out.push(data);
            }
        }
        FigureId::FigA => {
            for g in [-1.0, 0.0, 1.0] {
                let grid = wigner_grid(&initial_covariance(g)?, -4.0, 4.0, 201)?;
                let mut data = Dataset::new(
                    format!("figA_gamma_{g}"),
                    vec!["x".into(), "p".into(), "W".into()],
                    echo(&format!("gamma_{g}"), json!({"gamma": g, "grid": [-4.0, 4.0, 201]})),
                );
                let n = grid.axis.len();
                for i in 0..n {
                    for j in 0..n {
                        data.push(vec![
                            grid.axis[i].into(),
                            grid.axis[j].into(),
                            grid.values[i * n + j].into(),
                        ]);
                    }
                }
                out.push(data);
            }
        }
    }
    Ok(out)
}

/// Phase and width of one packet against time, with the width in units of sigma0.
fn time_table(
    name: &str,
    spec: &WavepacketSpec,
    axis: SweepAxis,
    mu_name: &str,
    mu: fn(&WavepacketSpec, f64) -> Result<f64>,
    echo: Value,
) -> Dataset {
    let mut data = Dataset::new(
        name,
        vec!["t".into(), mu_name.into(), "B".into(), "flag".into()],
        echo,
    );
    for t in axis.values() {
        let mut flags = Vec::new();
        let mut cell = |r: Result<f64>| match r {
            Ok(v) => Cell::Num(v),
            Err(e) => {
                flags.push(e.kind().to_string());
                Cell::Missing
            }
        };
        let a = cell(mu(spec, t));
        let b = cell(dynamics::width(spec, t));
        data.push(vec![t.into(), a, b, flag_cell(&flags)]);
    }
    data
}

/// Write every panel of a figure into `out_dir`, one file per panel.
pub fn emit_figure(
    id: FigureId,
    out_dir: &Path,
    format: Format,
    options: FigureOptions,
) -> Result<Vec<PathBuf>> {
    let datasets = figure_datasets(id, options)?;
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for d in datasets {
        let path = out_dir.join(format!("{}.{}", d.name, format.extension()));
        fs::write(&path, d.render(format))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(d: &Dataset, name: &str) -> Vec<f64> {
        d.numbers(name).unwrap().into_iter().flatten().collect()
    }

    #[test]
    fn ids_parse() {
        assert_eq!("fig3".parse::<FigureId>().unwrap(), FigureId::Fig3);
        assert_eq!("figa".parse::<FigureId>().unwrap(), FigureId::FigA);
        assert!("fig9".parse::<FigureId>().is_err());
    }

    #[test]
    fn fig3_uncorrelated_minimum() {
        let ds = figure_datasets(FigureId::Fig3, FigureOptions::default()).unwrap();
        let b = column(&ds[1], "B_gamma_0");
        let min = b.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min - 0.1).abs() < 1e-9, "{min}");
    }

    #[test]
    fn fig4_unwrapped_is_linear() {
        let opts = FigureOptions {
            unwrapped: true,
            ..FigureOptions::default()
        };
        let ds = figure_datasets(FigureId::Fig4, opts).unwrap();
        let t = column(&ds[0], "t");
        let mu = column(&ds[0], "mu_unwrapped_gamma_0");
        for (t, mu) in t.iter().zip(&mu) {
            assert!((mu - t / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fig1_keeps_invalid_frequency_row() {
        let ds = figure_datasets(FigureId::Fig1, FigureOptions::default()).unwrap();
        assert_eq!(ds[0].rows.len(), 2001);
        assert!(matches!(&ds[0].rows[0][4], Cell::Text(s) if s.contains("NonPositiveFrequency")));
    }

    #[test]
    fn fig7_rescaled_panel_is_optional() {
        assert_eq!(figure_datasets(FigureId::Fig7, FigureOptions::default()).unwrap().len(), 2);
        let opts = FigureOptions {
            fig7c_rescale: true,
            ..FigureOptions::default()
        };
        assert_eq!(figure_datasets(FigureId::Fig7, opts).unwrap().len(), 3);
    }
}
