//! Breakdown scale of vacuum correlations: the wavenumber `k0` where the
//! Boyer spectrum `hbar c k^3` meets the calibrated turbulence spectrum
//! `A k^-a`, and its uncertainty.
//!
//! The closed form is
//!
//! ```text
//! lambda0 = 2 pi [ 8 pi G hbar / (3 (a-1) kappa c^2 H) (c/H)^a ]^(1/(3+a))
//! ```
//!
//! and the same number is reachable three other ways: bisection on the two
//! spectra ([`numeric_crossover`]), the logarithmic form ([`log_form_scale`]),
//! and for the uncertainty, finite differences ([`finite_difference_sigma`])
//! and sampling ([`monte_carlo_scale`]).

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::constants::CosmologyContext;
use crate::error::{Error, Result};
use crate::quantity::{propagate_detailed, Dimension, Exponent, UncertainQuantity};
use crate::spectra::{Kappa, Slope, SpectrumModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    NumericRoot,
}

/// Contribution of each input to `sigma(lambda0) / lambda0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SigmaBreakdown {
    pub g: f64,
    pub c: f64,
    pub hbar: f64,
    pub h: f64,
    pub kappa: f64,
}

impl SigmaBreakdown {
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("G", self.g),
            ("c", self.c),
            ("hbar", self.hbar),
            ("H", self.h),
            ("kappa", self.kappa),
        ]
    }

    pub fn total(&self) -> f64 {
        self.entries()
            .iter()
            .map(|(_, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionResult {
    pub slope: f64,
    pub kappa: f64,
    /// 1/m
    pub k0: f64,
    /// m, always `2 pi / k0`
    pub lambda0: f64,
    pub rel_sigma: f64,
    pub breakdown: SigmaBreakdown,
    pub method: Method,
}

impl TransitionResult {
    /// Absolute standard uncertainty of `lambda0`, m.
    pub fn sigma(&self) -> f64 {
        self.lambda0 * self.rel_sigma
    }

    fn from_k0(slope: f64, kappa: f64, k0: f64, breakdown: SigmaBreakdown, method: Method) -> Self {
        TransitionResult {
            slope,
            kappa,
            k0,
            lambda0: TAU / k0,
            rel_sigma: breakdown.total(),
            breakdown,
            method,
        }
    }
}

/// Closed-form transition scale with `e_kappa = 0`.
pub fn transition_scale(a: f64, kappa: f64, ctx: &CosmologyContext) -> Result<TransitionResult> {
    transition_scale_with(a, kappa, 0.0, ctx)
}

/// Closed-form transition scale; `e_kappa` is the relative uncertainty
/// assigned to `kappa`.
pub fn transition_scale_with(
    a: f64,
    kappa: f64,
    e_kappa: f64,
    ctx: &CosmologyContext,
) -> Result<TransitionResult> {
    let (k0, breakdown) = closed_form_k0(a, kappa, e_kappa, ctx)?;
    Ok(TransitionResult::from_k0(
        a,
        kappa,
        k0,
        breakdown,
        Method::ClosedForm,
    ))
}

/// Transition scale with `k0` located by [`numeric_crossover`] instead of the
/// closed form. The uncertainty is still the first-order analytic one.
pub fn transition_scale_numeric(
    a: f64,
    kappa: f64,
    e_kappa: f64,
    ctx: &CosmologyContext,
) -> Result<TransitionResult> {
    let (_, breakdown) = closed_form_k0(a, kappa, e_kappa, ctx)?;
    let vac = SpectrumModel::boyer(ctx);
    let turb = SpectrumModel::calibrated_turbulence(kappa, a, ctx)?;
    let (lo, hi) = default_bracket(ctx);
    let k0 = numeric_crossover(&vac, &turb, lo, hi)?;
    Ok(TransitionResult::from_k0(
        a,
        kappa,
        k0,
        breakdown,
        Method::NumericRoot,
    ))
}

// k0^(3+a) = 3 (a-1) kappa c^2 H / (8 pi G hbar) (H/c)^a
fn closed_form_k0(
    a: f64,
    kappa: f64,
    e_kappa: f64,
    ctx: &CosmologyContext,
) -> Result<(f64, SigmaBreakdown)> {
    let slope = Slope::new(a)?;
    let kappa = Kappa::new(kappa)?;
    let p = slope.exponent();
    let outer = (Exponent::integer(3) + p).recip();
    let kappa_q = UncertainQuantity::new(kappa.value(), e_kappa, Dimension::DIMENSIONLESS)?;
    let terms = [
        (ctx.g(), -outer),
        (ctx.c(), (Exponent::integer(2) - p) * outer),
        (ctx.hbar(), -outer),
        (ctx.hubble(), (Exponent::ONE + p) * outer),
        (kappa_q, outer),
    ];
    let prop = propagate_detailed(&terms)?;
    let k0 = prop
        .result
        .scale((3.0 * (a - 1.0) / (8.0 * PI)).powf(outer.to_f64()))?;
    k0.quantity().expect_dim(Dimension::new(-1, 0, 0))?;
    let c = &prop.contributions;
    let breakdown = SigmaBreakdown {
        g: c[0],
        c: c[1],
        hbar: c[2],
        h: c[3],
        kappa: c[4],
    };
    Ok((k0.value(), breakdown))
}

/// Bisection bracket `[1/R, 2 pi / r_p]`, 1/m.
pub fn default_bracket(ctx: &CosmologyContext) -> (f64, f64) {
    (1.0 / ctx.hubble_radius().value(), ctx.planck_wavenumber())
}

/// Locates `E_vac(k) = E_turb(k)` by bisection in `ln k` on `[lo, hi]`,
/// to a relative width of 1e-13 in `k`.
///
/// `vac` is expected to increase and `turb` to decrease across the bracket.
pub fn numeric_crossover(
    vac: &SpectrumModel,
    turb: &SpectrumModel,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let gap = |ln_k: f64| -> Result<f64> {
        let k = ln_k.exp();
        let v = vac.evaluate(k)?.value();
        let t = turb.evaluate(k)?.value();
        Ok(match (v > 0.0, t > 0.0) {
            (true, true) => v.ln() - t.ln(),
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (false, false) => 0.0,
        })
    };
    let (mut x_lo, mut x_hi) = (lo.ln(), hi.ln());
    let f_lo = gap(x_lo)?;
    let f_hi = gap(x_hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoCrossing { lo, hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        if x_hi - x_lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (x_lo + x_hi);
        let f_mid = gap(mid)?;
        if f_mid == 0.0 {
            return Ok(mid.exp());
        }
        if (f_mid < 0.0) == lo_negative {
            x_lo = mid;
        } else {
            x_hi = mid;
        }
    }
    Ok((0.5 * (x_lo + x_hi)).exp())
}

/// `(a+1) e_H / (a+3)`: the Hubble-rate term alone, which dominates the
/// relative uncertainty for the default constants.
pub fn sigma_approximation(a: f64, e_h: f64) -> Result<f64> {
    Slope::new(a)?;
    Ok((a + 1.0) * e_h / (a + 3.0))
}

/// Constants of the logarithmic form: `C1 = ln(3 c^2 H / (8 pi G hbar))`
/// and `C2 = ln(H / c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFormConstants {
    pub c1: f64,
    pub c2: f64,
}

pub fn log_form_constants(ctx: &CosmologyContext) -> LogFormConstants {
    let c = ctx.c().value();
    let h = ctx.hubble().value();
    let g = ctx.g().value();
    let hbar = ctx.hbar().value();
    LogFormConstants {
        c1: (3.0 * c * c * h / (8.0 * PI * g * hbar)).ln(),
        c2: (h / c).ln(),
    }
}

/// `ln lambda0 = ln 2pi - [C1 + ln kappa + ln(a-1) + a C2] / (3+a)`, natural
/// logarithms throughout.
pub fn log_form_scale(a: f64, kappa: f64, ctx: &CosmologyContext) -> Result<f64> {
    let a = Slope::new(a)?.value();
    let kappa = Kappa::new(kappa)?.value();
    let LogFormConstants { c1, c2 } = log_form_constants(ctx);
    let bracket = c1 + kappa.ln() + (a - 1.0).ln() + a * c2;
    Ok((TAU.ln() - bracket / (3.0 + a)).exp())
}

/// Inputs of the closed form, as plain numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Inputs {
    g: f64,
    c: f64,
    hbar: f64,
    h: f64,
    kappa: f64,
}

impl Inputs {
    fn nominal(kappa: f64, ctx: &CosmologyContext) -> Self {
        Inputs {
            g: ctx.g().value(),
            c: ctx.c().value(),
            hbar: ctx.hbar().value(),
            h: ctx.hubble().value(),
            kappa,
        }
    }

    fn rel_sigmas(ctx: &CosmologyContext, e_kappa: f64) -> [f64; 5] {
        [
            ctx.g().rel_sigma(),
            ctx.c().rel_sigma(),
            ctx.hbar().rel_sigma(),
            ctx.hubble().rel_sigma(),
            e_kappa,
        ]
    }

    fn as_array(self) -> [f64; 5] {
        [self.g, self.c, self.hbar, self.h, self.kappa]
    }

    fn from_array(v: [f64; 5]) -> Self {
        Inputs {
            g: v[0],
            c: v[1],
            hbar: v[2],
            h: v[3],
            kappa: v[4],
        }
    }

    /// The closed form evaluated directly, m.
    fn lambda0(self, a: f64) -> f64 {
        let inner = 8.0 * PI * self.g * self.hbar
            / (3.0 * (a - 1.0) * self.kappa * self.c * self.c * self.h)
            * (self.c / self.h).powf(a);
        TAU * inner.powf(1.0 / (3.0 + a))
    }
}

/// Relative uncertainty of `lambda0` from `sum (d lambda0/dx_i * sigma_i)^2`,
/// with the derivatives taken by central differences of the closed form.
pub fn finite_difference_sigma(
    a: f64,
    kappa: f64,
    e_kappa: f64,
    ctx: &CosmologyContext,
) -> Result<f64> {
    Slope::new(a)?;
    Kappa::new(kappa)?;
    const STEP: f64 = 1e-6;
    let x0 = Inputs::nominal(kappa, ctx).as_array();
    let sigmas = Inputs::rel_sigmas(ctx, e_kappa);
    let lambda = Inputs::from_array(x0).lambda0(a);
    let mut var = 0.0;
    for i in 0..5 {
        let h = STEP * x0[i];
        let mut up = x0;
        let mut down = x0;
        up[i] += h;
        down[i] -= h;
        let deriv =
            (Inputs::from_array(up).lambda0(a) - Inputs::from_array(down).lambda0(a)) / (2.0 * h);
        let term = deriv * sigmas[i] * x0[i];
        var += term * term;
    }
    let rel = var.sqrt() / lambda;
    if rel.is_finite() {
        Ok(rel)
    } else {
        Err(Error::NonFinite("finite-difference sigma"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    /// Sample mean of `lambda0`, m.
    pub mean: f64,
    /// Sample standard deviation over the sample mean.
    pub rel_sigma: f64,
    pub samples: usize,
    /// Draws discarded because a sampled constant was not positive.
    pub rejections: usize,
}

/// Redraws allowed per sample before giving up.
pub const MAX_REJECTIONS_PER_SAMPLE: usize = 1000;

/// Samples every input independently as `x (1 + e z)`, `z ~ N(0, 1)`, and
/// evaluates the closed form per sample.
///
/// A draw that makes a constant non-positive is discarded and redrawn; the
/// number of redraws is reported. Sample `i` uses its own ChaCha8 stream
/// keyed by `(seed, i)`, so the result does not depend on thread scheduling.
pub fn monte_carlo_scale(
    a: f64,
    kappa: f64,
    e_kappa: f64,
    n: usize,
    seed: u64,
    ctx: &CosmologyContext,
) -> Result<MonteCarloResult> {
    Slope::new(a)?;
    Kappa::new(kappa)?;
    if n < 1000 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs at least 1000 samples, got {n}"
        )));
    }
    if !(e_kappa >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa uncertainty must be >= 0, got {e_kappa}"
        )));
    }
    let x0 = Inputs::nominal(kappa, ctx).as_array();
    let sigmas = Inputs::rel_sigmas(ctx, e_kappa);

    let draws: Vec<(f64, usize)> = (0..n)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let mut sample = [0.0; 5];
            let mut rejected = 0;
            for i in 0..5 {
                loop {
                    let z: f64 = rng.sample(StandardNormal);
                    let x = x0[i] * (1.0 + sigmas[i] * z);
                    if x > 0.0 {
                        sample[i] = x;
                        break;
                    }
                    rejected += 1;
                    if rejected > MAX_REJECTIONS_PER_SAMPLE {
                        return Err(Error::DegenerateSamples {
                            index,
                            limit: MAX_REJECTIONS_PER_SAMPLE,
                        });
                    }
                }
            }
            Ok((Inputs::from_array(sample).lambda0(a), rejected))
        })
        .collect::<Result<_>>()?;

    // Welford, in sample order
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut rejections = 0;
    for (count, &(x, rej)) in draws.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (count + 1) as f64;
        m2 += delta * (x - mean);
        rejections += rej;
    }
    let std = (m2 / (n - 1) as f64).sqrt();
    if !mean.is_finite() || !std.is_finite() {
        return Err(Error::NonFinite("Monte Carlo"));
    }
    Ok(MonteCarloResult {
        mean,
        rel_sigma: std / mean,
        samples: n,
        rejections,
    })
}

/// Earlier estimate `12 kappa^(-3/14)` m for the Kolmogorov slope, computed
/// with an older constant set.
pub fn historical_kolmogorov_scale(kappa: f64) -> Result<f64> {
    Ok(12.0 * Kappa::new(kappa)?.value().powf(-3.0 / 14.0))
}
