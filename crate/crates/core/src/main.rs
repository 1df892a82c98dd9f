use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gouy_core::cli::{
    self, default_oracle_battery, emit_figure, exit, extrema_table, fisher_table, oracle_check,
    parse_scenario, run_sweep, wigner_table, Dataset, FigureId, FigureOptions, Format, OracleReport,
    SweepAxis, SweepVariable,
};
use gouy_core::oracle::QuadratureConfig;
use gouy_core::phase_space::{evolved_covariance, initial_covariance};
use gouy_core::{Error, Result, UnitSystem, WavepacketSpec};

/// Correlated Gaussian wavepackets in a harmonic trap: sweeps, figure
/// datasets, Fisher information and oracle self-checks.
#[derive(Debug, Parser)]
#[command(name = "gouy", version)]
struct Cli {
    /// Output encoding; `sweep` defaults to the scenario's `format` key,
    /// everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file (`figure`: output directory, default `.`). Stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report the Gouy phase on the continuous branch instead of the
    /// principal one.
    #[arg(long, global = true)]
    unwrapped: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a scenario file.
    ///
    /// Keys (one `key = value` per line, `#` starts a comment):
    /// omega0, omega, gamma (required);
    /// sweep = VAR, LO, HI, SAMPLES with VAR in t|omega|gamma (required);
    /// outputs = comma list from B, u, mu_principal, mu_unwrapped, gouy_rate,
    /// wigner, cfi, qfi, covariance (default: B, mu_principal);
    /// format = csv|json (default csv); unwrap = true|false (default false);
    /// hbar, mass (default 1); t = fixed time for omega/gamma sweeps (default 1).
    Sweep {
        /// Scenario file.
        scenario: PathBuf,
    },
    /// Write the datasets behind one figure (fig1..fig7, figA, or all).
    Figure {
        id: String,
        /// Also write the parametric CFI panel with the gamma = 3 curve scaled by 1/9.
        #[arg(long)]
        fig7c_rescale: bool,
    },
    /// Fisher information for estimating omega at resonance.
    Fisher {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0.0)]
        t_lo: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        t_hi: f64,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
    /// Gaussian Wigner function of the initial (t = 0) or evolved resonant packet.
    Wigner {
        #[command(flatten)]
        spec: SpecArgs,
        /// Evolution time; the packet must then be resonant.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 4.0)]
        hi: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
    },
    /// Compare the closed forms against direct propagator quadrature.
    /// Without --omega the built-in battery (12 specs x 3 times) runs.
    OracleCheck {
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gamma: f64,
        /// Comma-separated evaluation times.
        #[arg(long, value_delimiter = ',', default_values_t = [0.3, 1.1, 2.6])]
        times: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        panels: usize,
        #[arg(long, default_value_t = 32)]
        nodes_per_panel: usize,
        #[arg(long, default_value_t = 12.0)]
        cut_radius: f64,
    },
    /// Local extrema of the packet width in a time window.
    Extrema {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_negative_numbers = true)]
        t_lo: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_hi: f64,
    },
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    /// Trap frequency (defaults to omega0).
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
}

impl SpecArgs {
    fn build(&self) -> Result<WavepacketSpec> {
        WavepacketSpec::new(
            self.omega0,
            self.omega.unwrap_or(self.omega0),
            self.gamma,
            UnitSystem::new(self.hbar, self.mass)?,
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            cli::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: &Cli) -> Result<i32> {
    let format = cli.format.unwrap_or(Format::Csv);
    match &cli.command {
        Command::Sweep { scenario } => {
            let text = fs::read_to_string(scenario)?;
            let mut sc = parse_scenario(&text)?;
            sc.unwrap |= cli.unwrapped;
            let format = cli.format.unwrap_or(sc.format);
            emit(&run_sweep(&sc)?, format, cli)?;
        }
        Command::Figure { id, fig7c_rescale } => {
            let ids = if id.eq_ignore_ascii_case("all") {
                FigureId::ALL.to_vec()
            } else {
                vec![id.parse()?]
            };
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let options = FigureOptions {
                unwrapped: cli.unwrapped,
                fig7c_rescale: *fig7c_rescale,
            };
            for id in ids {
                for path in emit_figure(id, &dir, format, options)? {
                    eprintln!("wrote {}", path.display());
                }
            }
        }
        Command::Fisher {
            spec,
            t_lo,
            t_hi,
            samples,
        } => {
            let axis = SweepAxis::new(SweepVariable::T, *t_lo, *t_hi, *samples)?;
            emit(&fisher_table(&spec.build()?, axis)?, format, cli)?;
        }
        Command::Wigner {
            spec,
            t,
            lo,
            hi,
            n,
        } => {
            let sp = spec.build()?;
            let cov = if *t == 0.0 {
                initial_covariance(sp.gamma())?
            } else {
                evolved_covariance(&sp, *t)?
            };
            emit(&wigner_table(&cov, *lo, *hi, *n)?, format, cli)?;
        }
        Command::OracleCheck {
            omega0,
            omega,
            gamma,
            times,
            panels,
            nodes_per_panel,
            cut_radius,
        } => {
            let config = QuadratureConfig {
                cut_radius_in_widths: *cut_radius,
                panels: *panels,
                nodes_per_panel: *nodes_per_panel,
                ..QuadratureConfig::default()
            };
            let battery = match omega {
                Some(w) => vec![(WavepacketSpec::natural(*omega0, *w, *gamma)?, times.clone())],
                None => default_oracle_battery(),
            };
            let mut report = OracleReport { rows: Vec::new() };
            for (spec, ts) in &battery {
                report.append(oracle_check(spec, ts, &config)?);
            }
            emit(&report.to_dataset(&config), format, cli)?;
            if !report.passed() {
                eprintln!("oracle check failed: max L2 error {:e}", report.max_l2_error());
                return Ok(exit::CHECK_FAILED);
            }
        }
        Command::Extrema { spec, t_lo, t_hi } => {
            emit(&extrema_table(&spec.build()?, *t_lo, *t_hi)?, format, cli)?;
        }
    }
    Ok(exit::SUCCESS)
}

fn emit(data: &Dataset, format: Format, cli: &Cli) -> Result<()> {
    let text = data.render(format);
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(Error::from)?,
    }
    Ok(())
}
