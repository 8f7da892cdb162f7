//! Python bindings: a `Cosmology` object carrying the constant set, with the
//! transition, uncertainty, spectrum, dissipation and sweep operations as
//! methods.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zpfscale::constants::{ConstantId, CosmologyContext, Overrides};
use zpfscale::dissipation::{
    kappa_from_count, kappa_from_solar_bound, n0_provenance, solar_budget, N0Mode, Scenario,
    DEFAULT_NS_BOUND,
};
use zpfscale::quantity::{Dimension, Quantity};
use zpfscale::report::{render_sweep, run_sweep, Format, Output, SweepSpec};
use zpfscale::spectra::{
    amplitude_from_kappa, horizon_injection_rate, power_law_amplitude_dim, Slope, SpectrumModel,
};
use zpfscale::transition::{self as tr, Method, TransitionResult};
use zpfscale::Error;

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        3 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for zpfscale::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

#[pyclass(name = "Transition", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyTransition {
    slope: f64,
    kappa: f64,
    /// Transition wavenumber, 1/m.
    k0: f64,
    /// Transition length, m.
    lambda0: f64,
    sigma: f64,
    rel_sigma: f64,
    /// Relative contribution of each input to `rel_sigma`.
    breakdown: BTreeMap<String, f64>,
    method: String,
}

impl From<TransitionResult> for PyTransition {
    fn from(t: TransitionResult) -> Self {
        PyTransition {
            slope: t.slope,
            kappa: t.kappa,
            k0: t.k0,
            lambda0: t.lambda0,
            sigma: t.sigma(),
            rel_sigma: t.rel_sigma,
            breakdown: t
                .breakdown
                .entries()
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            method: match t.method {
                Method::ClosedForm => "closed".into(),
                Method::NumericRoot => "numeric".into(),
            },
        }
    }
}

#[pymethods]
impl PyTransition {
    fn __repr__(&self) -> String {
        format!(
            "Transition(slope={}, kappa={:e}, lambda0={:.4e} m, sigma={:.3e} m)",
            self.slope, self.kappa, self.lambda0, self.sigma
        )
    }
}

#[pyclass(name = "MonteCarlo", frozen, get_all)]
struct PyMonteCarlo {
    mean: f64,
    rel_sigma: f64,
    samples: usize,
    rejections: usize,
}

#[pyclass(name = "Budget", frozen, get_all)]
struct PyBudget {
    slope: f64,
    kappa: f64,
    /// Dissipation rate, W/m^3.
    epsilon: f64,
    epsilon_rel_sigma: f64,
    n: f64,
    n0: f64,
    ns: f64,
    window_t: f64,
    ell: f64,
    n0_mode: String,
    note: String,
}

#[pyclass(name = "Bound", frozen, get_all)]
struct PyBound {
    ns_bound: f64,
    kappa: f64,
    n0: f64,
    n0_mode: String,
    transition: PyTransition,
    note: String,
}

/// Cosmological constant set with derived quantities.
///
/// `overrides` maps constant names (`c`, `G`, `hbar`, `H`, `M_sun`, `r_p`,
/// `t`, `ell`) to SI values; `e_<name>` keys set relative uncertainties.
/// `config` is the text of a `name = value [unit]` file.
#[pyclass(name = "Cosmology", frozen)]
struct PyCosmology {
    ctx: CosmologyContext,
}

fn parse_mode(mode: &str) -> PyResult<N0Mode> {
    mode.parse().py()
}

fn scenario(
    ctx: &CosmologyContext,
    n0: &str,
    window_days: Option<f64>,
    radius_lightminutes: Option<f64>,
) -> PyResult<Scenario> {
    let mut s = Scenario::new(ctx, parse_mode(n0)?);
    if let Some(d) = window_days {
        s = s.with_window_days(d);
    }
    if let Some(l) = radius_lightminutes {
        s = s.with_radius_lightminutes(l);
    }
    Ok(s)
}

#[pymethods]
impl PyCosmology {
    #[new]
    #[pyo3(signature = (overrides = None, config = None))]
    fn new(overrides: Option<BTreeMap<String, f64>>, config: Option<&str>) -> PyResult<Self> {
        let mut ov = match config {
            Some(text) => Overrides::parse(text).py()?,
            None => Overrides::new(),
        };
        for (key, value) in overrides.unwrap_or_default() {
            ov = match key.strip_prefix("e_") {
                Some(name) => ov.rel_sigma(name.parse::<ConstantId>().py()?, value),
                None => ov.value(key.parse::<ConstantId>().py()?, value),
            };
        }
        Ok(PyCosmology {
            ctx: CosmologyContext::with_overrides(&ov).py()?,
        })
    }

    /// `{name: (value, rel_sigma, unit, source)}` in SI units.
    fn constants(&self) -> BTreeMap<String, (f64, f64, String, String)> {
        self.ctx
            .registry()
            .iter()
            .map(|c| {
                (
                    c.name().to_string(),
                    (
                        c.quantity.value(),
                        c.quantity.rel_sigma(),
                        c.id.unit().to_string(),
                        c.source.clone(),
                    ),
                )
            })
            .collect()
    }

    /// Critical density `(value kg/m^3, rel_sigma)`.
    fn critical_density(&self) -> (f64, f64) {
        let q = self.ctx.critical_density();
        (q.value(), q.rel_sigma())
    }

    /// Hubble radius `(value m, rel_sigma)`.
    fn hubble_radius(&self) -> (f64, f64) {
        let q = self.ctx.hubble_radius();
        (q.value(), q.rel_sigma())
    }

    #[pyo3(signature = (slope, kappa, e_kappa = 0.0, numeric = false))]
    fn transition_scale(
        &self,
        slope: f64,
        kappa: f64,
        e_kappa: f64,
        numeric: bool,
    ) -> PyResult<PyTransition> {
        let t = if numeric {
            tr::transition_scale_numeric(slope, kappa, e_kappa, &self.ctx)
        } else {
            tr::transition_scale_with(slope, kappa, e_kappa, &self.ctx)
        };
        Ok(t.py()?.into())
    }

    #[pyo3(signature = (slope, kappa, e_kappa = 0.0))]
    fn finite_difference_sigma(&self, slope: f64, kappa: f64, e_kappa: f64) -> PyResult<f64> {
        tr::finite_difference_sigma(slope, kappa, e_kappa, &self.ctx).py()
    }

    #[pyo3(signature = (slope, kappa, n = 100_000, seed = 0, e_kappa = 0.0))]
    fn monte_carlo_scale(
        &self,
        slope: f64,
        kappa: f64,
        n: usize,
        seed: u64,
        e_kappa: f64,
    ) -> PyResult<PyMonteCarlo> {
        let m = tr::monte_carlo_scale(slope, kappa, e_kappa, n, seed, &self.ctx).py()?;
        Ok(PyMonteCarlo {
            mean: m.mean,
            rel_sigma: m.rel_sigma,
            samples: m.samples,
            rejections: m.rejections,
        })
    }

    fn log_form_scale(&self, slope: f64, kappa: f64) -> PyResult<f64> {
        tr::log_form_scale(slope, kappa, &self.ctx).py()
    }

    /// `(C1, C2)` of the logarithmic form.
    fn log_form_constants(&self) -> (f64, f64) {
        let k = tr::log_form_constants(&self.ctx);
        (k.c1, k.c2)
    }

    /// Calibrated power-law amplitude `(value, rel_sigma)` in J m^(-2-a).
    fn amplitude_from_kappa(&self, kappa: f64, slope: f64) -> PyResult<(f64, f64)> {
        let q = amplitude_from_kappa(kappa, slope, &self.ctx).py()?;
        Ok((q.value(), q.rel_sigma()))
    }

    /// Spectral energy density in J/m^2 at each wavenumber.
    ///
    /// `model` is `boyer`, `truncated`, `powerlaw` or `ms`.
    #[pyo3(signature = (model, ks, slope = 2.0, kappa = 1.0, amplitude = None, cutoff = None, gamma = 1.0, epsilon = None, kolmogorov_c = 1.0))]
    #[allow(clippy::too_many_arguments)]
    fn spectrum(
        &self,
        model: &str,
        ks: Vec<f64>,
        slope: f64,
        kappa: f64,
        amplitude: Option<f64>,
        cutoff: Option<f64>,
        gamma: f64,
        epsilon: Option<f64>,
        kolmogorov_c: f64,
    ) -> PyResult<Vec<f64>> {
        let ctx = &self.ctx;
        let m = match model {
            "boyer" => SpectrumModel::boyer(ctx),
            "truncated" => SpectrumModel::truncated_boyer(ctx, cutoff).py()?,
            "powerlaw" => match amplitude {
                Some(a) => {
                    let dim = power_law_amplitude_dim(Slope::new(slope).py()?);
                    SpectrumModel::power_law(Quantity::new(a, dim).py()?, slope).py()?
                }
                None => SpectrumModel::calibrated_turbulence(kappa, slope, ctx).py()?,
            },
            "ms" => {
                let eps = match epsilon {
                    Some(e) => Quantity::new(e, Dimension::new(-1, 1, -3)).py()?,
                    None => horizon_injection_rate(ctx).quantity(),
                };
                SpectrumModel::moisseev_shivamoggi(
                    gamma,
                    eps,
                    ctx.critical_density().quantity(),
                    ctx.c().quantity(),
                    kolmogorov_c,
                )
                .py()?
            }
            other => return Err(PyValueError::new_err(format!("unknown model `{other}`"))),
        };
        ks.into_iter()
            .map(|k| m.evaluate(k).map(|e| e.value()).py())
            .collect()
    }

    #[pyo3(signature = (kappa, slope, n0 = "paper", window_days = None, radius_lightminutes = None))]
    fn dissipation(
        &self,
        kappa: f64,
        slope: f64,
        n0: &str,
        window_days: Option<f64>,
        radius_lightminutes: Option<f64>,
    ) -> PyResult<PyBudget> {
        let s = scenario(&self.ctx, n0, window_days, radius_lightminutes)?;
        let b = solar_budget(kappa, slope, &self.ctx, &s).py()?;
        Ok(PyBudget {
            slope: b.slope,
            kappa: b.kappa,
            epsilon: b.epsilon.value(),
            epsilon_rel_sigma: b.epsilon.rel_sigma(),
            n: b.n,
            n0: b.n0,
            ns: b.ns,
            window_t: b.window_t,
            ell: b.ell,
            n0_mode: b.n0_mode.to_string(),
            note: n0_provenance(&self.ctx, &s).py()?,
        })
    }

    #[pyo3(signature = (slope, ns = DEFAULT_NS_BOUND, n0 = "paper", window_days = None, radius_lightminutes = None))]
    fn solar_bound(
        &self,
        slope: f64,
        ns: f64,
        n0: &str,
        window_days: Option<f64>,
        radius_lightminutes: Option<f64>,
    ) -> PyResult<PyBound> {
        let s = scenario(&self.ctx, n0, window_days, radius_lightminutes)?;
        let b = kappa_from_solar_bound(ns, slope, &self.ctx, &s).py()?;
        Ok(PyBound {
            ns_bound: b.ns_bound,
            kappa: b.kappa,
            n0: b.n0,
            n0_mode: b.n0_mode.to_string(),
            transition: b.transition.into(),
            note: n0_provenance(&self.ctx, &s).py()?,
        })
    }

    /// Renders a sweep over `slopes x kappas` as CSV or an aligned table.
    #[pyo3(signature = (slopes, kappas, outputs = None, format = "csv", sigfigs = 3, n0 = "paper"))]
    fn sweep(
        &self,
        slopes: Vec<f64>,
        kappas: Vec<f64>,
        outputs: Option<Vec<String>>,
        format: &str,
        sigfigs: usize,
        n0: &str,
    ) -> PyResult<String> {
        let outputs = match outputs {
            Some(list) => list
                .iter()
                .map(|o| o.parse::<Output>())
                .collect::<zpfscale::Result<_>>()
                .py()?,
            None => Output::DEFAULT.to_vec(),
        };
        let spec = SweepSpec {
            slopes,
            kappas,
            outputs,
            format: format.parse::<Format>().py()?,
            sigfigs: sigfigs.max(1),
            scenario: Some(scenario(&self.ctx, n0, None, None)?),
        };
        let rows = run_sweep(&spec, &self.ctx).py()?;
        render_sweep(&spec, &rows, &self.ctx).py()
    }

    fn __repr__(&self) -> String {
        format!(
            "Cosmology(H={:e} 1/s, G={:e})",
            self.ctx.hubble().value(),
            self.ctx.g().value()
        )
    }
}

#[pyfunction]
fn slope_from_gamma(gamma: f64) -> PyResult<f64> {
    zpfscale::spectra::slope_from_gamma(gamma).py()
}

#[pyfunction]
fn gamma_from_slope(slope: f64) -> PyResult<f64> {
    zpfscale::spectra::gamma_from_slope(slope).py()
}

#[pyfunction]
#[pyo3(signature = (slope, e_h = 0.15))]
fn sigma_approximation(slope: f64, e_h: f64) -> PyResult<f64> {
    tr::sigma_approximation(slope, e_h).py()
}

#[pyfunction(name = "kappa_from_count")]
fn py_kappa_from_count(n: f64, n0: f64, slope: f64) -> PyResult<f64> {
    kappa_from_count(n, n0, slope).py()
}

#[pyfunction]
fn historical_scale(kappa: f64) -> PyResult<f64> {
    tr::historical_kolmogorov_scale(kappa).py()
}

#[pymodule]
fn pyzpfscale(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCosmology>()?;
    m.add_class::<PyTransition>()?;
    m.add_class::<PyMonteCarlo>()?;
    m.add_class::<PyBudget>()?;
    m.add_class::<PyBound>()?;
    m.add_function(wrap_pyfunction!(slope_from_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_from_slope, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_approximation, m)?)?;
    m.add_function(wrap_pyfunction!(py_kappa_from_count, m)?)?;
    m.add_function(wrap_pyfunction!(historical_scale, m)?)?;
    m.add("PAPER_N0", zpfscale::dissipation::PAPER_N0)?;
    Ok(())
}
