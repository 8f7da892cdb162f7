//! Physical constant registry and the cosmological quantities derived from it.
//!
//! Defaults are the 2006 CODATA values for `c`, `G` and `hbar`, the Chandra
//! estimate of the Hubble rate (77 km/s/Mpc, taken as 2.49e-18 1/s), a solar
//! mass of 1.98e30 kg, a one-day budget window and a reference radius of
//! 8 light-minutes. Any of them can be overridden at load time, either
//! programmatically through [`Overrides`] or from a small config file:
//!
//! ```text
//! # name = value [unit]
//! H = 70 km/s/Mpc
//! e_H = 0.02        # relative standard uncertainty of H
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quantity::{propagate, Dimension, Exponent, UncertainQuantity};
use crate::units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstantId {
    SpeedOfLight,
    Gravitation,
    ReducedPlanck,
    Hubble,
    SolarMass,
    PlanckLength,
    Window,
    Radius,
}

impl ConstantId {
    pub const ALL: [ConstantId; 8] = [
        ConstantId::SpeedOfLight,
        ConstantId::Gravitation,
        ConstantId::ReducedPlanck,
        ConstantId::Hubble,
        ConstantId::SolarMass,
        ConstantId::PlanckLength,
        ConstantId::Window,
        ConstantId::Radius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstantId::SpeedOfLight => "c",
            ConstantId::Gravitation => "G",
            ConstantId::ReducedPlanck => "hbar",
            ConstantId::Hubble => "H",
            ConstantId::SolarMass => "M_sun",
            ConstantId::PlanckLength => "r_p",
            ConstantId::Window => "t",
            ConstantId::Radius => "ell",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            ConstantId::SpeedOfLight => Dimension::new(1, 0, -1),
            ConstantId::Gravitation => Dimension::new(3, -1, -2),
            ConstantId::ReducedPlanck => Dimension::new(2, 1, -1),
            ConstantId::Hubble => Dimension::new(0, 0, -1),
            ConstantId::SolarMass => Dimension::mass(),
            ConstantId::PlanckLength | ConstantId::Radius => Dimension::length(),
            ConstantId::Window => Dimension::time(),
        }
    }

    /// SI unit label used in listings.
    pub fn unit(self) -> &'static str {
        match self {
            ConstantId::SpeedOfLight => "m s^-1",
            ConstantId::Gravitation => "m^3 kg^-1 s^-2",
            ConstantId::ReducedPlanck => "J s",
            ConstantId::Hubble => "s^-1",
            ConstantId::SolarMass => "kg",
            ConstantId::PlanckLength | ConstantId::Radius => "m",
            ConstantId::Window => "s",
        }
    }

    fn default_entry(self) -> (f64, f64, &'static str) {
        match self {
            ConstantId::SpeedOfLight => (units::SPEED_OF_LIGHT, 0.0, "CODATA 2006 (exact)"),
            ConstantId::Gravitation => (6.674_28e-11, 1e-4, "CODATA 2006"),
            ConstantId::ReducedPlanck => (1.054_571_628e-34, 5e-5, "CODATA 2006"),
            ConstantId::Hubble => (2.49e-18, 0.15, "Chandra X-ray, 77 km/s/Mpc"),
            ConstantId::SolarMass => (units::SOLAR_MASS, 0.0, "nominal solar mass"),
            ConstantId::PlanckLength => (1.616e-35, 5e-5, "CODATA 2006"),
            ConstantId::Window => (units::SECONDS_PER_DAY, 0.0, "budget window, 1 day"),
            ConstantId::Radius => (
                8.0 * units::LIGHT_MINUTE,
                0.0,
                "reference radius, 8 light-minutes",
            ),
        }
    }
}

impl FromStr for ConstantId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstantId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::BadOverride(format!("unknown constant `{s}`")))
    }
}

impl fmt::Display for ConstantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalConstant {
    pub id: ConstantId,
    pub quantity: UncertainQuantity,
    pub source: String,
}

impl PhysicalConstant {
    pub fn name(&self) -> &'static str {
        self.id.name()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum OverrideKind {
    Value(f64),
    RelSigma(f64),
}

/// Pending changes applied by [`load_registry`]. Later entries win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    entries: Vec<(ConstantId, OverrideKind)>,
}

impl Overrides {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets a value in SI units.
    pub fn value(mut self, id: ConstantId, si_value: f64) -> Self {
        self.entries.push((id, OverrideKind::Value(si_value)));
        self
    }

    pub fn rel_sigma(mut self, id: ConstantId, rel_sigma: f64) -> Self {
        self.entries.push((id, OverrideKind::RelSigma(rel_sigma)));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses the `name = value [unit]` config format. `e_<name> = x` sets a
    /// relative uncertainty. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Overrides::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cfg_err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let (name, rhs) = line
                .split_once('=')
                .ok_or_else(|| cfg_err("expected `name = value [unit]`".into()))?;
            let name = name.trim();
            let rhs = rhs.trim();
            let (number, unit) = match rhs.split_once(char::is_whitespace) {
                Some((n, u)) => (n, u.trim()),
                None => (rhs, ""),
            };
            let number: f64 = number
                .parse()
                .map_err(|_| cfg_err(format!("cannot parse number `{number}`")))?;

            if let Some(base) = name.strip_prefix("e_") {
                let id: ConstantId = base.parse().map_err(|e: Error| cfg_err(e.to_string()))?;
                if !unit.is_empty() {
                    return Err(cfg_err(format!(
                        "relative uncertainty `{name}` takes no unit"
                    )));
                }
                out = out.rel_sigma(id, number);
            } else {
                let id: ConstantId = name.parse().map_err(|e: Error| cfg_err(e.to_string()))?;
                let (factor, dim) =
                    units::lookup(unit).ok_or_else(|| cfg_err(format!("unknown unit `{unit}`")))?;
                // a bare number is taken as SI
                if !unit.is_empty() && dim != id.dimension() {
                    return Err(cfg_err(format!(
                        "unit `{unit}` has dimension {dim}, `{name}` needs {}",
                        id.dimension()
                    )));
                }
                out = out.value(id, number * factor);
            }
        }
        Ok(out)
    }
}

/// Immutable set of named constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantRegistry {
    constants: Vec<PhysicalConstant>,
}

impl ConstantRegistry {
    pub fn get(&self, id: ConstantId) -> &PhysicalConstant {
        // constants are stored in ConstantId::ALL order
        &self.constants[id as usize]
    }

    pub fn quantity(&self, id: ConstantId) -> UncertainQuantity {
        self.get(id).quantity
    }

    pub fn value(&self, id: ConstantId) -> f64 {
        self.get(id).quantity.value()
    }

    pub fn rel_sigma(&self, id: ConstantId) -> f64 {
        self.get(id).quantity.rel_sigma()
    }

    pub fn by_name(&self, name: &str) -> Option<&PhysicalConstant> {
        self.constants.iter().find(|c| c.name() == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PhysicalConstant> {
        self.constants.iter()
    }
}

impl Default for ConstantRegistry {
    fn default() -> Self {
        load_registry(None).expect("default registry is valid")
    }
}

pub fn load_registry(overrides: Option<&Overrides>) -> Result<ConstantRegistry> {
    let mut constants: Vec<PhysicalConstant> = ConstantId::ALL
        .into_iter()
        .map(|id| {
            let (value, rel, source) = id.default_entry();
            PhysicalConstant {
                id,
                quantity: UncertainQuantity::new(value, rel, id.dimension())
                    .expect("default constant is finite"),
                source: source.to_string(),
            }
        })
        .collect();

    for (id, kind) in overrides.map(|o| o.entries.as_slice()).unwrap_or(&[]) {
        let slot = &mut constants[*id as usize];
        let q = slot.quantity;
        slot.quantity = match *kind {
            OverrideKind::Value(v) => {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::BadOverride(format!(
                        "`{id}` must be positive and finite, got {v}"
                    )));
                }
                UncertainQuantity::new(v, q.rel_sigma(), q.dim())?
            }
            OverrideKind::RelSigma(e) => {
                if !(e >= 0.0) || !e.is_finite() {
                    return Err(Error::BadOverride(format!(
                        "uncertainty of `{id}` must be finite and >= 0, got {e}"
                    )));
                }
                q.with_rel_sigma(e)?
            }
        };
        slot.source = "override".to_string();
    }
    Ok(ConstantRegistry { constants })
}

/// A registry plus the cosmological quantities derived from it. The derived
/// values are always recomputed from the registry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CosmologyContext {
    registry: ConstantRegistry,
}

impl CosmologyContext {
    pub fn new(registry: ConstantRegistry) -> Self {
        CosmologyContext { registry }
    }

    pub fn with_overrides(overrides: &Overrides) -> Result<Self> {
        Ok(Self::new(load_registry(Some(overrides))?))
    }

    pub fn registry(&self) -> &ConstantRegistry {
        &self.registry
    }

    pub fn c(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::SpeedOfLight)
    }

    pub fn g(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::Gravitation)
    }

    pub fn hbar(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::ReducedPlanck)
    }

    pub fn hubble(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::Hubble)
    }

    pub fn solar_mass(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::SolarMass)
    }

    pub fn planck_length(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::PlanckLength)
    }

    pub fn window(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::Window)
    }

    pub fn reference_radius(&self) -> UncertainQuantity {
        self.registry.quantity(ConstantId::Radius)
    }

    /// rho_crit = 3 H^2 / (8 pi G), kg m^-3.
    pub fn critical_density(&self) -> UncertainQuantity {
        propagate(&[
            (self.hubble(), Exponent::integer(2)),
            (self.g(), Exponent::integer(-1)),
        ])
        .and_then(|q| q.scale(3.0 / (8.0 * PI)))
        .expect("registry constants are positive")
    }

    /// R = c / H, m.
    pub fn hubble_radius(&self) -> UncertainQuantity {
        propagate(&[
            (self.c(), Exponent::ONE),
            (self.hubble(), Exponent::integer(-1)),
        ])
        .expect("registry constants are positive")
    }

    /// Vacuum cutoff wavenumber 2 pi / r_p, 1/m.
    pub fn planck_wavenumber(&self) -> f64 {
        2.0 * PI / self.planck_length().value()
    }
}
