//! Vacuum and turbulence energy spectra, and calibration of the turbulence
//! amplitude from the cosmological energy budget.
//!
//! Every spectrum evaluates to an energy per unit volume per unit wavenumber
//! (J·m⁻²). Turbulence slopes are restricted to the open interval (1, 3):
//! at or below 1 the budget integral from `1/R` diverges, and anything
//! steeper than `k^-3` breaks locality of the cascade.

use std::f64::consts::PI;

use crate::constants::CosmologyContext;
use crate::error::{Error, Result};
use crate::quantity::{propagate, Dimension, Exponent, Quantity, UncertainQuantity};

/// Validated spectral slope `a`, 1 < a < 3.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Slope(f64);

impl Slope {
    pub fn new(a: f64) -> Result<Self> {
        if a > 1.0 && a < 3.0 {
            Ok(Slope(a))
        } else {
            Err(Error::SlopeOutOfRange(a))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The slope as an exact rational, for dimension bookkeeping.
    pub fn exponent(self) -> Exponent {
        Exponent::approximate(self.0).expect("slope is finite and bounded")
    }
}

/// Validated degree of turbulence, 0 < kappa <= 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Kappa(f64);

impl Kappa {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa > 0.0 && kappa <= 1.0 {
            Ok(Kappa(kappa))
        } else {
            Err(Error::KappaOutOfRange(kappa))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Slope of the Moisseev-Shivamoggi spectrum, `a = (5g - 1)/(3g - 1)`.
pub fn slope_from_gamma(gamma: f64) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::GammaOutOfRange(gamma));
    }
    let denom = 3.0 * gamma - 1.0;
    if denom == 0.0 {
        return Err(Error::PoleGamma);
    }
    if denom < 0.0 {
        return Err(Error::GammaOutOfRange(gamma));
    }
    Ok((5.0 * gamma - 1.0) / denom)
}

/// Inverse of [`slope_from_gamma`]: `g = (1 - a)/(5 - 3a)`.
///
/// Slopes below 5/3 give a negative index; the algebraic identity
/// `2g/(3g - 1) = a - 1` still holds for them.
pub fn gamma_from_slope(a: f64) -> Result<f64> {
    let slope = Slope::new(a)?;
    if slope.exponent() == Exponent::new(5, 3) {
        return Err(Error::KolmogorovPole);
    }
    Ok((1.0 - a) / (5.0 - 3.0 * a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumModel {
    /// `hbar c k^3`, the Lorentz-invariant vacuum spectrum.
    Boyer { hbar: Quantity, c: Quantity },
    /// Boyer spectrum cut to zero above `cutoff_k` (1/m).
    TruncatedBoyer {
        hbar: Quantity,
        c: Quantity,
        cutoff_k: f64,
    },
    /// `A k^-a`.
    PowerLawTurbulence { amplitude: Quantity, slope: f64 },
    /// `C [rho^(g-1) eps^(2g) c^-2 k^-(5g-1)]^(1/(3g-1))`.
    MoisseevShivamoggi {
        gamma: f64,
        epsilon: Quantity,
        rho: Quantity,
        c: Quantity,
        kolmogorov_c: f64,
    },
}

fn per_metre(k: f64) -> Result<Quantity> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::NonPositiveWavenumber(k));
    }
    Quantity::new(k, Dimension::new(-1, 0, 0))
}

/// Amplitude dimension of a `k^-a` spectrum: J m^(-2-a).
pub fn power_law_amplitude_dim(slope: Slope) -> Dimension {
    Dimension::spectral_density() * Dimension::length().pow(-slope.exponent())
}

impl SpectrumModel {
    pub fn boyer(ctx: &CosmologyContext) -> Self {
        SpectrumModel::Boyer {
            hbar: ctx.hbar().quantity(),
            c: ctx.c().quantity(),
        }
    }

    /// Truncated Boyer spectrum; the cutoff defaults to `2 pi / r_p`.
    pub fn truncated_boyer(ctx: &CosmologyContext, cutoff_k: Option<f64>) -> Result<Self> {
        let model = SpectrumModel::TruncatedBoyer {
            hbar: ctx.hbar().quantity(),
            c: ctx.c().quantity(),
            cutoff_k: cutoff_k.unwrap_or_else(|| ctx.planck_wavenumber()),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn power_law(amplitude: Quantity, slope: f64) -> Result<Self> {
        let model = SpectrumModel::PowerLawTurbulence { amplitude, slope };
        model.validate()?;
        Ok(model)
    }

    /// Power-law turbulence with the amplitude calibrated to `kappa rho c^2`.
    pub fn calibrated_turbulence(kappa: f64, a: f64, ctx: &CosmologyContext) -> Result<Self> {
        let amplitude = amplitude_from_kappa(kappa, a, ctx)?;
        Self::power_law(amplitude.quantity(), a)
    }

    pub fn moisseev_shivamoggi(
        gamma: f64,
        epsilon: Quantity,
        rho: Quantity,
        c: Quantity,
        kolmogorov_c: f64,
    ) -> Result<Self> {
        let model = SpectrumModel::MoisseevShivamoggi {
            gamma,
            epsilon,
            rho,
            c,
            kolmogorov_c,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectrumModel::Boyer { hbar, c } => {
                hbar.expect_dim(Dimension::new(2, 1, -1))?;
                c.expect_dim(Dimension::new(1, 0, -1))?;
            }
            SpectrumModel::TruncatedBoyer { hbar, c, cutoff_k } => {
                hbar.expect_dim(Dimension::new(2, 1, -1))?;
                c.expect_dim(Dimension::new(1, 0, -1))?;
                if !(cutoff_k > 0.0) || !cutoff_k.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "cutoff wavenumber must be positive, got {cutoff_k}"
                    )));
                }
            }
            SpectrumModel::PowerLawTurbulence { amplitude, slope } => {
                let slope = Slope::new(slope)?;
                amplitude.expect_dim(power_law_amplitude_dim(slope))?;
                if amplitude.value() < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "amplitude must be non-negative, got {}",
                        amplitude.value()
                    )));
                }
            }
            SpectrumModel::MoisseevShivamoggi {
                gamma,
                epsilon,
                rho,
                c,
                kolmogorov_c,
            } => {
                slope_from_gamma(gamma)?;
                epsilon.expect_dim(Dimension::new(-1, 1, -3))?;
                rho.expect_dim(Dimension::new(-3, 1, 0))?;
                c.expect_dim(Dimension::new(1, 0, -1))?;
                if !(epsilon.value() > 0.0 && rho.value() > 0.0 && c.value() > 0.0) {
                    return Err(Error::InvalidParameter(
                        "epsilon, rho and c must be positive".into(),
                    ));
                }
                if !(kolmogorov_c > 0.0) || !kolmogorov_c.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "Kolmogorov constant must be positive, got {kolmogorov_c}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Spectral energy density at wavenumber `k` (1/m), in J·m⁻².
    pub fn evaluate(&self, k: f64) -> Result<Quantity> {
        self.validate()?;
        let kq = per_metre(k)?;
        match *self {
            SpectrumModel::Boyer { hbar, c } => hbar.mul(c)?.mul(kq.power(3.into())?),
            SpectrumModel::TruncatedBoyer { hbar, c, cutoff_k } => {
                let e = hbar.mul(c)?.mul(kq.power(3.into())?)?;
                if k > cutoff_k {
                    e.scale(0.0)
                } else {
                    Ok(e)
                }
            }
            SpectrumModel::PowerLawTurbulence { amplitude, slope } => {
                let a = Slope::new(slope)?;
                amplitude.mul(kq.power(-a.exponent())?)
            }
            SpectrumModel::MoisseevShivamoggi {
                gamma,
                epsilon,
                rho,
                c,
                kolmogorov_c,
            } => {
                // evaluated in log space: for large gamma the bracketed powers
                // overflow long before the result does
                let g = Exponent::approximate(gamma)?;
                let one = Exponent::ONE;
                let outer = (Exponent::integer(3) * g - one).recip();
                let parts = [
                    (rho, (g - one) * outer, gamma - 1.0),
                    (epsilon, Exponent::integer(2) * g * outer, 2.0 * gamma),
                    (c, Exponent::integer(-2) * outer, -2.0),
                    (
                        kq,
                        -(Exponent::integer(5) * g - one) * outer,
                        1.0 - 5.0 * gamma,
                    ),
                ];
                let scale = 3.0 * gamma - 1.0;
                let mut dim = Dimension::DIMENSIONLESS;
                let mut log_value = 0.0;
                for (q, p, numeric) in parts {
                    dim = dim * q.dim().pow(p);
                    log_value += (numeric / scale) * q.value().ln();
                }
                Quantity::new(kolmogorov_c * log_value.exp(), dim)
            }
        }
    }
}

/// Total turbulent energy density `kappa rho c^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBudget {
    pub kappa: f64,
    pub total: UncertainQuantity,
}

impl EnergyBudget {
    pub fn new(kappa: f64, ctx: &CosmologyContext) -> Result<Self> {
        let kappa = Kappa::new(kappa)?.value();
        let total = propagate(&[
            (ctx.critical_density(), Exponent::ONE),
            (ctx.c(), Exponent::integer(2)),
        ])?
        .scale(kappa)?;
        Ok(EnergyBudget { kappa, total })
    }
}

/// `(3 / 8 pi) G^-1 c^(3-a) H^(1+a)`, i.e. `rho c^2 R^(1-a)` written in the
/// independent constants so that the shared `H` dependence of `rho` and `R`
/// is propagated correctly.
fn rho_c2_r_pow(slope: Slope, ctx: &CosmologyContext) -> Result<UncertainQuantity> {
    let a = slope.exponent();
    propagate(&[
        (ctx.g(), Exponent::integer(-1)),
        (ctx.c(), Exponent::integer(3) - a),
        (ctx.hubble(), Exponent::ONE + a),
    ])?
    .scale(3.0 / (8.0 * PI))
}

/// `A = (a - 1) kappa rho c^2 R^(1-a)`, the amplitude for which
/// `int_{1/R}^inf A k^-a dk = kappa rho c^2`.
pub fn amplitude_from_kappa(
    kappa: f64,
    a: f64,
    ctx: &CosmologyContext,
) -> Result<UncertainQuantity> {
    let slope = Slope::new(a)?;
    let kappa = Kappa::new(kappa)?;
    rho_c2_r_pow(slope, ctx)?.scale((a - 1.0) * kappa.value())
}

/// Closed form of `int_{1/R}^inf A k^-a dk = A R^(a-1) / (a - 1)`, J·m⁻³.
pub fn budget_roundtrip(amplitude: Quantity, a: f64, ctx: &CosmologyContext) -> Result<Quantity> {
    let slope = Slope::new(a)?;
    amplitude.expect_dim(power_law_amplitude_dim(slope))?;
    let r = ctx.hubble_radius().quantity();
    amplitude
        .mul(r.power(slope.exponent() - Exponent::ONE)?)?
        .scale(1.0 / (a - 1.0))
}

/// Energy injection rate from horizon growth, `3 rho c^3 / R`, W·m⁻³.
pub fn horizon_injection_rate(ctx: &CosmologyContext) -> UncertainQuantity {
    // 3 rho c^3 / R = (9 / 8 pi) G^-1 c^2 H^3
    propagate(&[
        (ctx.g(), Exponent::integer(-1)),
        (ctx.c(), Exponent::integer(2)),
        (ctx.hubble(), Exponent::integer(3)),
    ])
    .and_then(|q| q.scale(9.0 / (8.0 * PI)))
    .expect("registry constants are positive")
}

/// Amplitude of the spectrum obtained by feeding the horizon injection rate
/// into the Moisseev-Shivamoggi form (with `C = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonAmplitude {
    /// `rho c^2 R^(1-a)`, numerical coefficients dropped.
    pub reduced: UncertainQuantity,
    /// The dropped coefficient `3^(2g/(3g-1)) = 3^(a-1)`.
    pub prefactor: f64,
}

impl HorizonAmplitude {
    /// `prefactor * reduced`, the amplitude without any approximation.
    pub fn exact(&self) -> Result<UncertainQuantity> {
        self.reduced.scale(self.prefactor)
    }
}

pub fn horizon_spectrum_amplitude(a: f64, ctx: &CosmologyContext) -> Result<HorizonAmplitude> {
    let slope = Slope::new(a)?;
    Ok(HorizonAmplitude {
        reduced: rho_c2_r_pow(slope, ctx)?,
        prefactor: 3f64.powf(a - 1.0),
    })
}
