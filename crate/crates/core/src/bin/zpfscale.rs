use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zpfscale::constants::{CosmologyContext, Overrides};
use zpfscale::dissipation::{
    kappa_from_solar_bound, n0_provenance, solar_budget, N0Mode, Scenario, DEFAULT_NS_BOUND,
};
use zpfscale::quantity::{Dimension, Quantity};
use zpfscale::report::{
    format_exact, format_sig, render_sweep, run_sweep, Format, Output, SweepSpec, Table,
};
use zpfscale::spectra::{horizon_injection_rate, power_law_amplitude_dim, Slope, SpectrumModel};
use zpfscale::transition::{
    finite_difference_sigma, monte_carlo_scale, transition_scale_numeric, transition_scale_with,
    TransitionResult,
};
use zpfscale::Error;

#[derive(Parser)]
#[command(
    name = "zpfscale",
    version,
    about = "Crossover scale between vacuum and turbulent zero-point spectra"
)]
struct Cli {
    /// Constant overrides, one `name = value [unit]` per line.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format (`spectrum` defaults to csv, everything else to table).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Significant figures for computed values.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=17))]
    sigfigs: u8,

    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum N0Arg {
    Paper,
    Computed,
}

impl From<N0Arg> for N0Mode {
    fn from(m: N0Arg) -> Self {
        match m {
            N0Arg::Paper => N0Mode::Paper,
            N0Arg::Computed => N0Mode::Computed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Boyer,
    Truncated,
    Powerlaw,
    Ms,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Observation window in days (default: `t` from the registry).
    #[arg(long)]
    window_days: Option<f64>,

    /// Radius of the local sphere in light minutes (default: `ell`).
    #[arg(long)]
    radius_lightminutes: Option<f64>,

    /// Which normalisation of the solar-mass count to use.
    #[arg(long, value_enum, default_value = "paper")]
    n0: N0Arg,
}

impl ScenarioArgs {
    fn scenario(&self, ctx: &CosmologyContext) -> Scenario {
        let mut s = Scenario::new(ctx, self.n0.into());
        if let Some(days) = self.window_days {
            s = s.with_window_days(days);
        }
        if let Some(lm) = self.radius_lightminutes {
            s = s.with_radius_lightminutes(lm);
        }
        s
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the constant registry and derived cosmological quantities.
    Constants,

    /// Transition scale for one slope and turbulence degree.
    Transition {
        #[arg(long)]
        slope: f64,
        #[arg(long)]
        kappa: f64,
        /// Relative uncertainty of kappa.
        #[arg(long, default_value_t = 0.0)]
        ekappa: f64,
        /// Also run a Monte Carlo check with this many samples.
        #[arg(long, value_name = "N")]
        mc: Option<usize>,
        /// Locate the crossover by root finding instead of the closed form.
        #[arg(long)]
        numeric: bool,
    },

    /// Transition scales over a grid of slopes and kappas.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        slopes: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        kappas: Vec<f64>,
        /// Columns: lambda0, sigma, k0, epsilon, N, Ns.
        #[arg(long, value_delimiter = ',', default_value = "lambda0,sigma,k0")]
        outputs: Vec<String>,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },

    /// Dissipation rate and solar-mass budget.
    Dissipation {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        slope: f64,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },

    /// Largest kappa compatible with a local dissipation bound.
    Bound {
        /// Solar masses per window allowed within the local sphere.
        #[arg(long, default_value_t = DEFAULT_NS_BOUND)]
        ns: f64,
        #[arg(long)]
        slope: f64,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },

    /// Tabulate a spectrum on a log-spaced wavenumber grid.
    Spectrum {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Slope of the power law.
        #[arg(long, default_value_t = 2.0)]
        slope: f64,
        /// Turbulence degree used to calibrate the power-law amplitude.
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        /// Power-law amplitude in SI units, J m^(-2-a); overrides --kappa.
        #[arg(long)]
        amplitude: Option<f64>,
        /// Truncation wavenumber in 1/m (default 2 pi / r_p).
        #[arg(long)]
        cutoff: Option<f64>,
        /// Adiabatic index for the compressible spectrum.
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Energy injection rate in W/m^3 (default: horizon injection rate).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Kolmogorov constant.
        #[arg(long, default_value_t = 1.0)]
        kolmogorov_c: f64,
        #[arg(long, default_value_t = 1e-6)]
        kmin: f64,
        #[arg(long, default_value_t = 1e6)]
        kmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

/// What a subcommand produced: text for stdout plus a failure to report
/// after printing, if any.
struct Outcome {
    text: String,
    error: Option<Error>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, error: None }
    }
}

fn load_context(path: Option<&PathBuf>) -> Result<CosmologyContext, (i32, String)> {
    let Some(path) = path else {
        return Ok(CosmologyContext::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| (2, format!("cannot read {}: {e}", path.display())))?;
    Overrides::parse(&text)
        .and_then(|o| CosmologyContext::with_overrides(&o))
        .map_err(|e| (e.exit_code(), e.to_string()))
}

fn kv(table: &mut Table, name: &str, value: String, unit: &str) {
    table.push(vec![name.to_string(), value, unit.to_string()]);
}

fn transition_rows(table: &mut Table, t: &TransitionResult, sig: usize) {
    kv(table, "lambda0", format_sig(t.lambda0, sig), "m");
    kv(table, "sigma", format_sig(t.sigma(), sig), "m");
    kv(table, "rel_sigma", format_sig(t.rel_sigma, sig), "");
    kv(table, "k0", format_sig(t.k0, sig), "1/m");
}

fn constants(ctx: &CosmologyContext, sig: usize) -> Table {
    let mut table = Table::new(["name", "value", "unit", "rel_sigma", "source"]);
    for c in ctx.registry().iter() {
        table.push(vec![
            c.name().to_string(),
            format_exact(c.quantity.value()),
            c.id.unit().to_string(),
            format_exact(c.quantity.rel_sigma()),
            c.source.clone(),
        ]);
    }
    let rho = ctx.critical_density();
    let r = ctx.hubble_radius();
    for (name, q, unit) in [("rho_crit", rho, "kg m^-3"), ("R", r, "m")] {
        table.push(vec![
            name.to_string(),
            format_sig(q.value(), sig),
            unit.to_string(),
            format_sig(q.rel_sigma(), sig),
            "derived".to_string(),
        ]);
    }
    table
}

fn run(cli: &Cli, ctx: &CosmologyContext) -> zpfscale::Result<Outcome> {
    let sig = cli.sigfigs as usize;
    let format = cli.format.map(Format::from).unwrap_or_default();
    match &cli.command {
        Command::Constants => Ok(constants(ctx, sig).render(format).into()),
        Command::Transition {
            slope,
            kappa,
            ekappa,
            mc,
            numeric,
        } => {
            let t = if *numeric {
                transition_scale_numeric(*slope, *kappa, *ekappa, ctx)?
            } else {
                transition_scale_with(*slope, *kappa, *ekappa, ctx)?
            };
            let mut table = Table::new(["quantity", "value", "unit"]);
            transition_rows(&mut table, &t, sig);
            for (name, c) in t.breakdown.entries() {
                kv(
                    &mut table,
                    &format!("rel_sigma_{name}"),
                    format_sig(c, sig),
                    "",
                );
            }
            let fd = finite_difference_sigma(*slope, *kappa, *ekappa, ctx)?;
            kv(&mut table, "rel_sigma_finite_diff", format_sig(fd, sig), "");
            if let Some(n) = mc {
                let m = monte_carlo_scale(*slope, *kappa, *ekappa, *n, cli.seed, ctx)?;
                kv(&mut table, "mc_mean", format_sig(m.mean, sig), "m");
                kv(&mut table, "mc_rel_sigma", format_sig(m.rel_sigma, sig), "");
                kv(&mut table, "mc_samples", m.samples.to_string(), "");
                kv(&mut table, "mc_rejections", m.rejections.to_string(), "");
            }
            let method = match t.method {
                zpfscale::transition::Method::ClosedForm => "closed form",
                zpfscale::transition::Method::NumericRoot => "numeric root",
            };
            table.note(format!("k0 from {method}"));
            Ok(table.render(format).into())
        }
        Command::Sweep {
            slopes,
            kappas,
            outputs,
            scenario,
        } => {
            let outputs = outputs
                .iter()
                .map(|o| o.trim().parse::<Output>())
                .collect::<zpfscale::Result<Vec<_>>>()?;
            let spec = SweepSpec {
                slopes: slopes.clone(),
                kappas: kappas.clone(),
                outputs,
                format,
                sigfigs: sig,
                scenario: Some(scenario.scenario(ctx)),
            };
            let rows = run_sweep(&spec, ctx)?;
            let text = render_sweep(&spec, &rows, ctx)?;
            let error = rows.iter().find_map(|r| r.values.as_ref().err().cloned());
            Ok(Outcome { text, error })
        }
        Command::Dissipation {
            kappa,
            slope,
            scenario,
        } => {
            let scenario = scenario.scenario(ctx);
            let b = solar_budget(*kappa, *slope, ctx, &scenario)?;
            let mut table = Table::new(["quantity", "value", "unit"]);
            kv(
                &mut table,
                "epsilon",
                format_sig(b.epsilon.value(), sig),
                "W m^-3",
            );
            kv(
                &mut table,
                "rel_sigma_epsilon",
                format_sig(b.epsilon.rel_sigma(), sig),
                "",
            );
            kv(&mut table, "N0", format_sig(b.n0, sig), "M_sun");
            kv(&mut table, "N", format_sig(b.n, sig), "M_sun");
            kv(&mut table, "Ns", format_sig(b.ns, sig), "M_sun");
            kv(&mut table, "window", format_sig(b.window_t, sig), "s");
            kv(&mut table, "ell", format_sig(b.ell, sig), "m");
            table.note(n0_provenance(ctx, &scenario)?);
            Ok(table.render(format).into())
        }
        Command::Bound {
            ns,
            slope,
            scenario,
        } => {
            let scenario = scenario.scenario(ctx);
            let b = kappa_from_solar_bound(*ns, *slope, ctx, &scenario)?;
            let mut table = Table::new(["quantity", "value", "unit"]);
            kv(&mut table, "Ns_bound", format_sig(b.ns_bound, sig), "M_sun");
            kv(&mut table, "kappa", format_sig(b.kappa, sig), "");
            transition_rows(&mut table, &b.transition, sig);
            table.note(n0_provenance(ctx, &scenario)?);
            Ok(table.render(format).into())
        }
        Command::Spectrum {
            model,
            slope,
            kappa,
            amplitude,
            cutoff,
            gamma,
            epsilon,
            kolmogorov_c,
            kmin,
            kmax,
            points,
        } => {
            let model = match model {
                ModelArg::Boyer => SpectrumModel::boyer(ctx),
                ModelArg::Truncated => SpectrumModel::truncated_boyer(ctx, *cutoff)?,
                ModelArg::Powerlaw => match amplitude {
                    Some(amp) => {
                        let dim = power_law_amplitude_dim(Slope::new(*slope)?);
                        SpectrumModel::power_law(Quantity::new(*amp, dim)?, *slope)?
                    }
                    None => SpectrumModel::calibrated_turbulence(*kappa, *slope, ctx)?,
                },
                ModelArg::Ms => {
                    let eps = match epsilon {
                        Some(e) => Quantity::new(*e, Dimension::new(-1, 1, -3))?,
                        None => horizon_injection_rate(ctx).quantity(),
                    };
                    SpectrumModel::moisseev_shivamoggi(
                        *gamma,
                        eps,
                        ctx.critical_density().quantity(),
                        ctx.c().quantity(),
                        *kolmogorov_c,
                    )?
                }
            };
            let grid = log_grid(*kmin, *kmax, *points)?;
            let mut table = Table::new(["k", "E"]);
            for k in grid {
                let e = model.evaluate(k)?;
                table.push(vec![format_sig(k, sig), format_sig(e.value(), sig)]);
            }
            Ok(table
                .render(cli.format.map(Format::from).unwrap_or(Format::Csv))
                .into())
        }
    }
}

fn log_grid(kmin: f64, kmax: f64, points: usize) -> zpfscale::Result<Vec<f64>> {
    if !(kmin > 0.0 && kmax > kmin && kmax.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < kmin < kmax, got kmin = {kmin}, kmax = {kmax}"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let (lo, hi) = (kmin.ln(), kmax.ln());
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                kmax
            } else {
                (lo + step * i as f64).exp()
            }
        })
        .collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match load_context(cli.config.as_ref()) {
        Ok(ctx) => ctx,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli, &ctx) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            match outcome.error {
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
