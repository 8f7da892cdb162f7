//! Conversions for the non-SI units accepted at the I/O boundary.

use crate::quantity::Dimension;

/// Exact speed of light used for length units defined via light travel time.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
pub const SECONDS_PER_DAY: f64 = 86_400.0;
pub const SECONDS_PER_MINUTE: f64 = 60.0;
/// Julian year.
pub const SECONDS_PER_YEAR: f64 = 365.25 * SECONDS_PER_DAY;
pub const LIGHT_MINUTE: f64 = SPEED_OF_LIGHT * SECONDS_PER_MINUTE;
pub const LIGHT_YEAR: f64 = SPEED_OF_LIGHT * SECONDS_PER_YEAR;
/// 1 Mpc taken as 3.26e6 light years.
pub const MEGAPARSEC: f64 = 3.26e6 * LIGHT_YEAR;
pub const SOLAR_MASS: f64 = 1.98e30;

/// Looks up a unit string, returning its SI scale factor and dimension.
/// Whitespace and `·`/`*` separators inside the unit are ignored.
pub fn lookup(unit: &str) -> Option<(f64, Dimension)> {
    let key: String = unit
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '·' && *c != '*')
        .collect();
    let d = Dimension::new;
    let entry = match key.as_str() {
        "" | "1" => (1.0, Dimension::DIMENSIONLESS),
        "m" => (1.0, d(1, 0, 0)),
        "km" => (1e3, d(1, 0, 0)),
        "lightminute" | "lightminutes" | "lmin" => (LIGHT_MINUTE, d(1, 0, 0)),
        "ly" | "lightyear" | "lightyears" => (LIGHT_YEAR, d(1, 0, 0)),
        "Mpc" => (MEGAPARSEC, d(1, 0, 0)),
        "s" => (1.0, d(0, 0, 1)),
        "min" => (SECONDS_PER_MINUTE, d(0, 0, 1)),
        "day" | "days" => (SECONDS_PER_DAY, d(0, 0, 1)),
        "yr" | "year" | "years" => (SECONDS_PER_YEAR, d(0, 0, 1)),
        "kg" => (1.0, d(0, 1, 0)),
        "Msun" | "solarmass" | "solarmasses" | "solar_mass" => (SOLAR_MASS, d(0, 1, 0)),
        "m/s" | "ms^-1" => (1.0, d(1, 0, -1)),
        "km/s" => (1e3, d(1, 0, -1)),
        "1/s" | "s^-1" | "Hz" => (1.0, d(0, 0, -1)),
        "km/s/Mpc" | "kms^-1Mpc^-1" => (1e3 / MEGAPARSEC, d(0, 0, -1)),
        "Js" => (1.0, d(2, 1, -1)),
        "Nm^2kg^-2" | "Nm^2/kg^2" | "m^3kg^-1s^-2" | "m^3/(kgs^2)" => (1.0, d(3, -1, -2)),
        _ => return None,
    };
    Some(entry)
}
