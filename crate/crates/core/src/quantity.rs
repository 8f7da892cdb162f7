//! Dimensioned values with exact rational dimension bookkeeping and
//! first-order relative-uncertainty propagation.
//!
//! Only the three mechanical base dimensions (length, mass, time) occur in
//! the formulas handled here; every other SI base exponent is implicitly
//! zero. All values are stored in SI base units.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Largest denominator used when turning a floating-point exponent into a
/// rational one.
const MAX_DENOMINATOR: i128 = 1_000_000;

/// An exact rational exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Ratio<i128>);

impl Exponent {
    pub const ZERO: Exponent = Exponent(Ratio::new_raw(0, 1));
    pub const ONE: Exponent = Exponent(Ratio::new_raw(1, 1));

    /// `numer / denom`, reduced. Panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        Exponent(Ratio::new(numer as i128, denom as i128))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(Ratio::from_integer(n as i128))
    }

    /// Best rational approximation with denominator at most 10^6.
    ///
    /// Decimal inputs such as `1.7` come back as `17/10`, and `5.0 / 3.0`
    /// comes back as `5/3`.
    pub fn approximate(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite("exponent"));
        }
        if x.abs() > 1e12 {
            return Err(Error::InvalidParameter(format!(
                "exponent {x} is too large to track exactly"
            )));
        }
        // continued fraction convergents
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut rest = x;
        let mut best = Ratio::from_integer(x.round() as i128);
        for _ in 0..64 {
            let a = rest.floor();
            let ai = a as i128;
            let p2 = ai * p1 + p0;
            let q2 = ai * q1 + q0;
            if q2 > MAX_DENOMINATOR {
                break;
            }
            best = Ratio::new(p2, q2);
            let err = (x - p2 as f64 / q2 as f64).abs();
            if err <= f64::EPSILON * x.abs().max(1.0) {
                break;
            }
            let frac = rest - a;
            if frac == 0.0 {
                break;
            }
            rest = 1.0 / frac;
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
        }
        Ok(Exponent(best))
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(self) -> Self {
        Exponent(self.0.abs())
    }

    pub fn recip(self) -> Self {
        Exponent(self.0.recip())
    }

    pub fn numer(self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(self) -> i128 {
        *self.0.denom()
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::integer(n)
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 - rhs.0)
    }
}

impl Mul for Exponent {
    type Output = Exponent;
    fn mul(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 * rhs.0)
    }
}

impl Div for Exponent {
    type Output = Exponent;
    fn div(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 / rhs.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Exponents over length, mass and time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension {
    pub length: Exponent,
    pub mass: Exponent,
    pub time: Exponent,
}

impl Dimension {
    pub const DIMENSIONLESS: Dimension = Dimension {
        length: Exponent::ZERO,
        mass: Exponent::ZERO,
        time: Exponent::ZERO,
    };

    pub fn new(length: i64, mass: i64, time: i64) -> Self {
        Dimension {
            length: length.into(),
            mass: mass.into(),
            time: time.into(),
        }
    }

    pub fn length() -> Self {
        Self::new(1, 0, 0)
    }

    pub fn mass() -> Self {
        Self::new(0, 1, 0)
    }

    pub fn time() -> Self {
        Self::new(0, 0, 1)
    }

    /// kg·m²·s⁻²
    pub fn energy() -> Self {
        Self::new(2, 1, -2)
    }

    /// Spectral energy density, J·m⁻² (energy per volume per wavenumber).
    pub fn spectral_density() -> Self {
        Self::new(0, 1, -2)
    }

    pub fn is_dimensionless(&self) -> bool {
        *self == Self::DIMENSIONLESS
    }

    pub fn pow(self, p: Exponent) -> Self {
        Dimension {
            length: self.length * p,
            mass: self.mass * p,
            time: self.time * p,
        }
    }
}

impl Mul for Dimension {
    type Output = Dimension;
    fn mul(self, rhs: Dimension) -> Dimension {
        Dimension {
            length: self.length + rhs.length,
            mass: self.mass + rhs.mass,
            time: self.time + rhs.time,
        }
    }
}

impl Div for Dimension {
    type Output = Dimension;
    fn div(self, rhs: Dimension) -> Dimension {
        Dimension {
            length: self.length - rhs.length,
            mass: self.mass - rhs.mass,
            time: self.time - rhs.time,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return write!(f, "1");
        }
        let mut first = true;
        for (sym, e) in [("kg", self.mass), ("m", self.length), ("s", self.time)] {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == Exponent::ONE {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Mul,
    Div,
    Add,
    Sub,
}

/// A finite SI value with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    value: f64,
    dim: Dimension,
}

fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn raise(value: f64, p: Exponent) -> Result<f64> {
    if p.is_zero() {
        return Ok(1.0);
    }
    let out = if p.is_integer() && p.numer().abs() <= i32::MAX as i128 {
        value.powi(p.numer() as i32)
    } else if value < 0.0 {
        return Err(Error::NegativeBase {
            base: value,
            exponent: p.to_f64(),
        });
    } else {
        value.powf(p.to_f64())
    };
    finite(out, "power")
}

#[allow(clippy::should_implement_trait)]
impl Quantity {
    pub fn new(value: f64, dim: Dimension) -> Result<Self> {
        Ok(Quantity {
            value: finite(value, "quantity")?,
            dim,
        })
    }

    pub fn dimensionless(value: f64) -> Result<Self> {
        Self::new(value, Dimension::DIMENSIONLESS)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn combine(self, rhs: Quantity, op: Op) -> Result<Quantity> {
        let (value, dim) = match op {
            Op::Mul => (self.value * rhs.value, self.dim * rhs.dim),
            Op::Div => (self.value / rhs.value, self.dim / rhs.dim),
            Op::Add | Op::Sub => {
                if self.dim != rhs.dim {
                    return Err(Error::DimensionMismatch {
                        left: Box::new(self.dim),
                        right: Box::new(rhs.dim),
                    });
                }
                let v = if op == Op::Add {
                    self.value + rhs.value
                } else {
                    self.value - rhs.value
                };
                (v, self.dim)
            }
        };
        Ok(Quantity {
            value: finite(value, "combine")?,
            dim,
        })
    }

    pub fn mul(self, rhs: Quantity) -> Result<Quantity> {
        self.combine(rhs, Op::Mul)
    }

    pub fn div(self, rhs: Quantity) -> Result<Quantity> {
        self.combine(rhs, Op::Div)
    }

    pub fn add(self, rhs: Quantity) -> Result<Quantity> {
        self.combine(rhs, Op::Add)
    }

    pub fn sub(self, rhs: Quantity) -> Result<Quantity> {
        self.combine(rhs, Op::Sub)
    }

    pub fn scale(self, factor: f64) -> Result<Quantity> {
        Self::new(self.value * factor, self.dim)
    }

    pub fn power(self, p: Exponent) -> Result<Quantity> {
        Ok(Quantity {
            value: raise(self.value, p)?,
            dim: self.dim.pow(p),
        })
    }

    /// Fails with `DimensionMismatch` unless the dimension is `expected`.
    pub fn expect_dim(self, expected: Dimension) -> Result<Quantity> {
        if self.dim == expected {
            Ok(self)
        } else {
            Err(Error::DimensionMismatch {
                left: Box::new(self.dim),
                right: Box::new(expected),
            })
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim.is_dimensionless() {
            write!(f, "{:e}", self.value)
        } else {
            write!(f, "{:e} {}", self.value, self.dim)
        }
    }
}

/// A value carrying a relative standard uncertainty `sigma / |value|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertainQuantity {
    value: f64,
    rel_sigma: f64,
    dim: Dimension,
}

impl UncertainQuantity {
    pub fn new(value: f64, rel_sigma: f64, dim: Dimension) -> Result<Self> {
        if !(rel_sigma >= 0.0) || !rel_sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "relative uncertainty must be finite and >= 0, got {rel_sigma}"
            )));
        }
        Ok(UncertainQuantity {
            value: finite(value, "uncertain quantity")?,
            rel_sigma,
            dim,
        })
    }

    pub fn exact(q: Quantity) -> Self {
        UncertainQuantity {
            value: q.value,
            rel_sigma: 0.0,
            dim: q.dim,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn rel_sigma(&self) -> f64 {
        self.rel_sigma
    }

    /// Absolute standard uncertainty.
    pub fn sigma(&self) -> f64 {
        self.value.abs() * self.rel_sigma
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn quantity(&self) -> Quantity {
        Quantity {
            value: self.value,
            dim: self.dim,
        }
    }

    pub fn with_rel_sigma(self, rel_sigma: f64) -> Result<Self> {
        Self::new(self.value, rel_sigma, self.dim)
    }

    /// Multiplies by an exact dimensionless factor; relative uncertainty is
    /// unchanged.
    pub fn scale(self, factor: f64) -> Result<Self> {
        Self::new(self.value * factor, self.rel_sigma, self.dim)
    }
}

impl From<Quantity> for UncertainQuantity {
    fn from(q: Quantity) -> Self {
        UncertainQuantity::exact(q)
    }
}

impl fmt::Display for UncertainQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rel. sigma {:e})", self.quantity(), self.rel_sigma)
    }
}

/// Result of [`propagate_detailed`]: the combined value and each input's
/// contribution `|p_i| * e_i` to the output relative uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagated {
    pub result: UncertainQuantity,
    pub contributions: Vec<f64>,
}

/// First-order propagation through `prod v_i^p_i` for uncorrelated inputs:
/// `e_out^2 = sum (p_i * e_i)^2`.
pub fn propagate(terms: &[(UncertainQuantity, Exponent)]) -> Result<UncertainQuantity> {
    propagate_detailed(terms).map(|p| p.result)
}

pub fn propagate_detailed(terms: &[(UncertainQuantity, Exponent)]) -> Result<Propagated> {
    let mut value = 1.0;
    let mut dim = Dimension::DIMENSIONLESS;
    let mut contributions = Vec::with_capacity(terms.len());
    for (q, p) in terms {
        value *= raise(q.value, *p)?;
        dim = dim * q.dim.pow(*p);
        contributions.push(p.abs().to_f64() * q.rel_sigma);
    }
    let rel_sigma = contributions.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok(Propagated {
        result: UncertainQuantity::new(finite(value, "propagate")?, rel_sigma, dim)?,
        contributions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metres(v: f64) -> Quantity {
        Quantity::new(v, Dimension::length()).unwrap()
    }

    fn seconds(v: f64) -> Quantity {
        Quantity::new(v, Dimension::time()).unwrap()
    }

    #[test]
    fn multiply_adds_exponents() {
        let q = metres(2.0).mul(metres(3.0)).unwrap();
        assert_eq!(q.value(), 6.0);
        assert_eq!(q.dim(), Dimension::new(2, 0, 0));
    }

    #[test]
    fn add_rejects_mismatched_dimensions() {
        let err = metres(1.0).add(seconds(1.0)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        assert_eq!(metres(1.0).add(metres(2.0)).unwrap().value(), 3.0);
        assert_eq!(metres(1.0).sub(metres(2.0)).unwrap().value(), -1.0);
    }

    #[test]
    fn divide_subtracts_exponents() {
        let area = Quantity::new(6.0, Dimension::new(2, 0, 0)).unwrap();
        let t2 = Quantity::new(2.0, Dimension::new(0, 0, 2)).unwrap();
        let q = area.div(t2).unwrap();
        assert_eq!(q.value(), 3.0);
        assert_eq!(q.dim(), Dimension::new(2, 0, -2));
    }

    #[test]
    fn overflow_is_reported() {
        let big = metres(1e300);
        assert_eq!(big.mul(big).unwrap_err(), Error::NonFinite("combine"));
        assert!(Quantity::dimensionless(f64::NAN).is_err());
        assert!(metres(1.0).div(metres(0.0)).is_err());
    }

    #[test]
    fn fractional_power() {
        let q = Quantity::new(4.0, Dimension::new(2, 0, 0))
            .unwrap()
            .power(Exponent::new(1, 2))
            .unwrap();
        assert_eq!(q.value(), 2.0);
        assert_eq!(q.dim(), Dimension::length());
    }

    #[test]
    fn zero_power_is_dimensionless_one() {
        let q = Quantity::new(-7.5, Dimension::new(1, 1, -2))
            .unwrap()
            .power(Exponent::ZERO)
            .unwrap();
        assert_eq!(q.value(), 1.0);
        assert!(q.dim().is_dimensionless());
    }

    #[test]
    fn negative_base_rejected_for_fractional_power() {
        let err = metres(-1.0).power(Exponent::new(1, 2)).unwrap_err();
        assert!(matches!(err, Error::NegativeBase { .. }));
        // integer powers of negatives are fine
        assert_eq!(
            metres(-2.0).power(Exponent::integer(3)).unwrap().value(),
            -8.0
        );
    }

    #[test]
    fn approximate_recovers_simple_fractions() {
        assert_eq!(Exponent::approximate(1.7).unwrap(), Exponent::new(17, 10));
        assert_eq!(
            Exponent::approximate(5.0 / 3.0).unwrap(),
            Exponent::new(5, 3)
        );
        assert_eq!(Exponent::approximate(-0.25).unwrap(), Exponent::new(-1, 4));
        assert_eq!(Exponent::approximate(2.0).unwrap(), Exponent::integer(2));
        assert_eq!(
            Exponent::approximate(1e6).unwrap(),
            Exponent::integer(1_000_000)
        );
        let pi = Exponent::approximate(std::f64::consts::PI).unwrap();
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-11);
        assert!(Exponent::approximate(f64::INFINITY).is_err());
    }

    #[test]
    fn display_formats() {
        assert_eq!(Dimension::new(2, 1, -2).to_string(), "kg m^2 s^-2");
        assert_eq!(Dimension::DIMENSIONLESS.to_string(), "1");
        assert_eq!(
            Dimension::length().pow(Exponent::new(-7, 10)).to_string(),
            "m^-7/10"
        );
    }

    #[test]
    fn propagate_single_input_scales_by_exponent() {
        let x = UncertainQuantity::new(3.0, 0.01, Dimension::length()).unwrap();
        let out = propagate(&[(x, Exponent::integer(2))]).unwrap();
        assert!((out.rel_sigma() - 0.02).abs() < 1e-15);
        assert_eq!(out.value(), 9.0);
        assert_eq!(out.dim(), Dimension::new(2, 0, 0));
    }

    #[test]
    fn propagate_two_equal_inputs() {
        let x = UncertainQuantity::new(3.0, 0.05, Dimension::length()).unwrap();
        let y = UncertainQuantity::new(2.0, 0.05, Dimension::time()).unwrap();
        let out = propagate(&[(x, Exponent::ONE), (y, Exponent::ONE)]).unwrap();
        assert!((out.rel_sigma() - 0.05 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn propagate_exact_inputs_stay_exact() {
        let x = UncertainQuantity::exact(metres(3.0));
        let y = UncertainQuantity::exact(seconds(2.0));
        let out = propagate(&[(x, Exponent::new(1, 3)), (y, Exponent::integer(-2))]).unwrap();
        assert_eq!(out.rel_sigma(), 0.0);
    }

    #[test]
    fn propagate_rejects_negative_base() {
        let x = UncertainQuantity::new(-3.0, 0.1, Dimension::length()).unwrap();
        assert!(matches!(
            propagate(&[(x, Exponent::new(1, 2))]),
            Err(Error::NegativeBase { .. })
        ));
    }

    #[test]
    fn negative_uncertainty_rejected() {
        assert!(UncertainQuantity::new(1.0, -0.1, Dimension::length()).is_err());
        assert!(UncertainQuantity::new(1.0, f64::NAN, Dimension::length()).is_err());
    }
}
