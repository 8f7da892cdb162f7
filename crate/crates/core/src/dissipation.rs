//! Energy dissipation implied by a turbulence degree `kappa`, expressed as
//! solar-mass equivalents, and the inverse: the largest `kappa` allowed by
//! an assumed ceiling on local dissipation.
//!
//! `N0 = rho c R^2 t / M` has two modes. `Paper` uses the published
//! `N0 = 1e57` (for a one-day window); `Computed` evaluates the expression
//! from the registry, which gives about 2e9 for the default constants. The
//! published downstream numbers only follow from the former.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::constants::CosmologyContext;
use crate::error::{Error, Result};
use crate::quantity::{propagate, Exponent, UncertainQuantity};
use crate::spectra::{Kappa, Slope};
use crate::transition::{transition_scale, TransitionResult};
use crate::units;

/// Published value of `N0` for a one-day window.
pub const PAPER_N0: f64 = 1e57;

/// Default ceiling on local dissipation: one solar mass over the Sun's
/// ~1e12-day lifetime, per day.
pub const DEFAULT_NS_BOUND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum N0Mode {
    #[default]
    Paper,
    Computed,
}

impl FromStr for N0Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(N0Mode::Paper),
            "computed" => Ok(N0Mode::Computed),
            other => Err(Error::InvalidParameter(format!(
                "N0 mode must be `paper` or `computed`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for N0Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            N0Mode::Paper => "paper",
            N0Mode::Computed => "computed",
        })
    }
}

/// Window length, comparison radius and `N0` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    /// s
    pub window_t: f64,
    /// m
    pub ell: f64,
    pub n0_mode: N0Mode,
}

impl Scenario {
    /// Window and radius from the registry (`t`, `ell`).
    pub fn new(ctx: &CosmologyContext, n0_mode: N0Mode) -> Self {
        Scenario {
            window_t: ctx.window().value(),
            ell: ctx.reference_radius().value(),
            n0_mode,
        }
    }

    pub fn with_window_days(mut self, days: f64) -> Self {
        self.window_t = days * units::SECONDS_PER_DAY;
        self
    }

    pub fn with_radius_lightminutes(mut self, minutes: f64) -> Self {
        self.ell = minutes * units::LIGHT_MINUTE;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.window_t > 0.0) || !self.window_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "window must be positive, got {} s",
                self.window_t
            )));
        }
        if !(self.ell > 0.0) || !self.ell.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {} m",
                self.ell
            )));
        }
        Ok(())
    }
}

/// `rho c R^2 t / M`, evaluated from the registry. `H` cancels, leaving
/// `3 c^3 t / (8 pi G M)`.
pub fn computed_n0(ctx: &CosmologyContext, window_t: f64) -> f64 {
    let rho = ctx.critical_density().value();
    let c = ctx.c().value();
    let r = ctx.hubble_radius().value();
    rho * c * r * r * window_t / ctx.solar_mass().value()
}

/// `N0` under the chosen convention. The published value is scaled
/// linearly when the window differs from one day.
pub fn n0(ctx: &CosmologyContext, scenario: &Scenario) -> Result<f64> {
    scenario.validate()?;
    Ok(match scenario.n0_mode {
        N0Mode::Paper => PAPER_N0 * scenario.window_t / units::SECONDS_PER_DAY,
        N0Mode::Computed => computed_n0(ctx, scenario.window_t),
    })
}

/// One-line note stating which `N0` was used and what the other mode gives.
pub fn n0_provenance(ctx: &CosmologyContext, scenario: &Scenario) -> Result<String> {
    let used = n0(ctx, scenario)?;
    let computed = computed_n0(ctx, scenario.window_t);
    Ok(match scenario.n0_mode {
        N0Mode::Paper => format!(
            "N0 mode paper: N0 = {used:.3e} (published 1e57 per day); \
             rho*c*R^2*t/M from the loaded constants gives {computed:.3e}"
        ),
        N0Mode::Computed => format!(
            "N0 mode computed: N0 = rho*c*R^2*t/M = {computed:.3e}; \
             the published value is 1e57 per day"
        ),
    })
}

/// `rho c^3 R^-1 [(a-1) kappa]^(1/(a-1))`, W·m⁻³.
pub fn dissipation_rate(kappa: f64, a: f64, ctx: &CosmologyContext) -> Result<UncertainQuantity> {
    let slope = Slope::new(a)?;
    let kappa = Kappa::new(kappa)?;
    // rho c^3 / R = (3 / 8 pi) G^-1 c^2 H^3
    let base = propagate(&[
        (ctx.g(), Exponent::integer(-1)),
        (ctx.c(), Exponent::integer(2)),
        (ctx.hubble(), Exponent::integer(3)),
    ])?;
    let factor = ((slope.value() - 1.0) * kappa.value()).powf(1.0 / (slope.value() - 1.0));
    base.scale(3.0 / (8.0 * PI) * factor)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationBudget {
    pub slope: f64,
    pub kappa: f64,
    pub epsilon: UncertainQuantity,
    /// Solar masses annihilated per window over a Hubble volume `R^3`.
    pub n: f64,
    pub n0: f64,
    /// `n` rescaled to a sphere of radius `ell`.
    pub ns: f64,
    pub window_t: f64,
    pub ell: f64,
    pub n0_mode: N0Mode,
}

pub fn solar_budget(
    kappa: f64,
    a: f64,
    ctx: &CosmologyContext,
    scenario: &Scenario,
) -> Result<DissipationBudget> {
    let epsilon = dissipation_rate(kappa, a, ctx)?;
    let n0 = n0(ctx, scenario)?;
    let n = n0 * ((a - 1.0) * kappa).powf(1.0 / (a - 1.0));
    let ns = rescaled_count(n, scenario.ell, ctx)?;
    Ok(DissipationBudget {
        slope: a,
        kappa,
        epsilon,
        n,
        n0,
        ns,
        window_t: scenario.window_t,
        ell: scenario.ell,
        n0_mode: scenario.n0_mode,
    })
}

/// `N (ell / R)^3`.
pub fn rescaled_count(n: f64, ell: f64, ctx: &CosmologyContext) -> Result<f64> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {ell}"
        )));
    }
    Ok(n * (ell / ctx.hubble_radius().value()).powi(3))
}

/// `kappa = (N / N0)^(a-1) / (a-1)`.
pub fn kappa_from_count(n: f64, n0: f64, a: f64) -> Result<f64> {
    let a = Slope::new(a)?.value();
    if !(n > 0.0 && n0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "counts must be positive, got N = {n}, N0 = {n0}"
        )));
    }
    Ok((n / n0).powf(a - 1.0) / (a - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarBound {
    pub ns_bound: f64,
    pub kappa: f64,
    pub n0: f64,
    pub n0_mode: N0Mode,
    pub transition: TransitionResult,
}

/// Largest `kappa` whose local dissipation within `ell` stays below
/// `ns_bound` solar masses per window, and the resulting transition scale.
pub fn kappa_from_solar_bound(
    ns_bound: f64,
    a: f64,
    ctx: &CosmologyContext,
    scenario: &Scenario,
) -> Result<SolarBound> {
    let a = Slope::new(a)?.value();
    if !(ns_bound > 0.0) || !ns_bound.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dissipation bound must be positive, got {ns_bound}"
        )));
    }
    let n0 = n0(ctx, scenario)?;
    let volume_ratio = (ctx.hubble_radius().value() / scenario.ell).powi(3);
    let kappa = (ns_bound / n0 * volume_ratio).powf(a - 1.0) / (a - 1.0);
    let transition = transition_scale(a, kappa, ctx)?;
    Ok(SolarBound {
        ns_bound,
        kappa,
        n0,
        n0_mode: scenario.n0_mode,
        transition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::Dimension;
    use crate::spectra::{amplitude_from_kappa, gamma_from_slope};

    fn ctx() -> CosmologyContext {
        CosmologyContext::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn rate_at_slope_two() {
        let c = ctx();
        let eps = dissipation_rate(1.0, 2.0, &c).unwrap();
        let rho = c.critical_density().value();
        let direct = rho * c.c().value().powi(3) / c.hubble_radius().value();
        assert!(rel(eps.value(), direct) < 1e-14);
        assert!((eps.value() - 2.48e-27).abs() < 0.01e-27, "{}", eps.value());
        assert_eq!(eps.dim(), Dimension::new(-1, 1, -3));
    }

    #[test]
    fn rate_vanishes_with_kappa() {
        let c = ctx();
        let mut last = f64::INFINITY;
        for kappa in [1e-2, 1e-5, 1e-10, 1e-20] {
            let e = dissipation_rate(kappa, 1.8, &c).unwrap().value();
            assert!(e < last);
            last = e;
        }
        assert!(last < 1e-50, "{last}");
    }

    // inverts A = [rho^(g-1) eps^(2g) c^-2]^(1/(3g-1)) for eps, in logs
    fn eps_from_amplitude(a: f64, kappa: f64, c: &CosmologyContext) -> f64 {
        let g = gamma_from_slope(a).unwrap();
        let amp = amplitude_from_kappa(kappa, a, c).unwrap().value();
        let rho = c.critical_density().value();
        let cv = c.c().value();
        (((3.0 * g - 1.0) * amp.ln() - (g - 1.0) * rho.ln() + 2.0 * cv.ln()) / (2.0 * g)).exp()
    }

    #[test]
    fn rate_matches_spectrum_inversion() {
        let c = ctx();
        for a in [1.2, 1.5, 1.7, 1.8, 2.0, 2.5] {
            for kappa in [1.0, 1e-5, 1e-17] {
                let oracle = eps_from_amplitude(a, kappa, &c);
                let rate = dissipation_rate(kappa, a, &c).unwrap().value();
                assert!(rel(rate, oracle) < 1e-9, "a={a} kappa={kappa}");
            }
        }
    }

    #[test]
    fn paper_mode_counts() {
        let c = ctx();
        let s = Scenario::new(&c, N0Mode::Paper);
        let b = solar_budget(1e-5, 1.7, &c, &s).unwrap();
        assert_eq!(b.n0, 1e57);
        assert!((b.n.log10() - 49.0).abs() < 0.7, "{}", b.n);
        assert!((b.ns.log10() - 5.0).abs() < 0.5, "{}", b.ns);
        let b = solar_budget(1e-5, 1.8, &c, &s).unwrap();
        assert!((b.ns.log10() - 6.0).abs() < 0.5, "{}", b.ns);
    }

    #[test]
    fn computed_mode_n0() {
        let c = ctx();
        let s = Scenario::new(&c, N0Mode::Computed);
        let b = solar_budget(1e-5, 1.7, &c, &s).unwrap();
        assert!(rel(b.n0, 2e9) < 0.2, "{}", b.n0);
        let closed = 3.0 * c.c().value().powi(3) * 86400.0
            / (8.0 * PI * c.g().value() * c.solar_mass().value());
        assert!(rel(b.n0, closed) < 1e-12);
    }

    #[test]
    fn budget_invariants() {
        let c = ctx();
        for mode in [N0Mode::Paper, N0Mode::Computed] {
            let s = Scenario::new(&c, mode)
                .with_window_days(3.0)
                .with_radius_lightminutes(2.0);
            let b = solar_budget(0.01, 2.2, &c, &s).unwrap();
            assert_eq!(b.ns, b.n * (b.ell / c.hubble_radius().value()).powi(3));
            let a1 = 2.2f64 - 1.0;
            assert_eq!(b.n, b.n0 * (a1 * 0.01).powf(1.0 / a1));
            assert_eq!(b.window_t, 3.0 * 86400.0);
            assert_eq!(b.ell, 2.0 * units::LIGHT_MINUTE);
        }
        let paper3 = n0(&c, &Scenario::new(&c, N0Mode::Paper).with_window_days(3.0)).unwrap();
        assert!(rel(paper3, 3e57) < 1e-15);
        assert!(n0(&c, &Scenario::new(&c, N0Mode::Paper).with_window_days(0.0)).is_err());
    }

    #[test]
    fn count_inversion_roundtrip() {
        let c = ctx();
        let s = Scenario::new(&c, N0Mode::Paper);
        for a in [1.3, 1.7, 2.0, 2.8] {
            for kappa in [1.0, 0.3, 1e-5, 1e-12] {
                let b = solar_budget(kappa, a, &c, &s).unwrap();
                let back = kappa_from_count(b.n, b.n0, a).unwrap();
                assert!(rel(back, kappa) < 1e-12, "a={a} kappa={kappa}");
            }
        }
        assert_eq!(kappa_from_count(5.0, 5.0, 2.0).unwrap(), 1.0);
        assert!(
            kappa_from_count(1.0, 2.0, 1.8).unwrap() < kappa_from_count(1.5, 2.0, 1.8).unwrap()
        );
        assert!(kappa_from_count(0.0, 2.0, 1.8).is_err());
        assert_eq!(
            kappa_from_count(1.0, 2.0, 3.0),
            Err(Error::SlopeOutOfRange(3.0))
        );
    }

    #[test]
    fn rescaled_count_identity() {
        let c = ctx();
        let r = c.hubble_radius().value();
        assert_eq!(rescaled_count(42.0, r, &c).unwrap(), 42.0);
        // N = 1e49 exactly lands at 1.7e4; the quoted 1e5 is an order of magnitude
        let ns = rescaled_count(1e49, 8.0 * units::LIGHT_MINUTE, &c).unwrap();
        assert!((ns.log10() - 5.0).abs() <= 1.0, "{ns}");
        assert!(rescaled_count(1.0, 0.0, &c).is_err());
    }

    #[test]
    fn solar_bound_values() {
        let c = ctx();
        let s = Scenario::new(&c, N0Mode::Paper);
        let b = kappa_from_solar_bound(DEFAULT_NS_BOUND, 1.7, &c, &s).unwrap();
        assert!(
            b.kappa / 9e-18 < 2.0 && 9e-18 / b.kappa < 2.0,
            "{}",
            b.kappa
        );
        assert!(
            rel(b.transition.lambda0, 67e3) < 0.15,
            "{}",
            b.transition.lambda0
        );
        let b = kappa_from_solar_bound(DEFAULT_NS_BOUND, 1.8, &c, &s).unwrap();
        assert!(
            b.kappa / 2e-20 < 3.0 && 2e-20 / b.kappa < 3.0,
            "{}",
            b.kappa
        );
        assert!(
            rel(b.transition.lambda0, 630e3) < 0.15,
            "{}",
            b.transition.lambda0
        );
    }

    #[test]
    fn solar_bound_scaling() {
        let c = ctx();
        let s = Scenario::new(&c, N0Mode::Paper);
        for a in [1.7, 1.8, 2.0] {
            let one = kappa_from_solar_bound(1e-12, a, &c, &s).unwrap();
            let two = kappa_from_solar_bound(2e-12, a, &c, &s).unwrap();
            assert!(rel(two.kappa / one.kappa, 2f64.powf(a - 1.0)) < 1e-12);
            assert!(two.transition.lambda0 < one.transition.lambda0);
        }
        assert!(kappa_from_solar_bound(0.0, 1.7, &c, &s).is_err());
        // the computed N0 is so small that the bound admits kappa > 1
        let computed = Scenario::new(&c, N0Mode::Computed);
        assert!(matches!(
            kappa_from_solar_bound(1e-12, 1.7, &c, &computed),
            Err(Error::KappaOutOfRange(_))
        ));
    }

    #[test]
    fn provenance_mentions_both_values() {
        let c = ctx();
        let note = n0_provenance(&c, &Scenario::new(&c, N0Mode::Paper)).unwrap();
        assert!(
            note.contains("1.000e57") && note.contains("2.103e9"),
            "{note}"
        );
        let note = n0_provenance(&c, &Scenario::new(&c, N0Mode::Computed)).unwrap();
        assert!(note.contains("computed") && note.contains("1e57"), "{note}");
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("paper".parse::<N0Mode>().unwrap(), N0Mode::Paper);
        assert_eq!("computed".parse::<N0Mode>().unwrap(), N0Mode::Computed);
        assert!("other".parse::<N0Mode>().is_err());
    }
}
