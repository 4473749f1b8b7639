//! Physical constants (CODATA 2018) and unit conversions.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Ordinary frequency in MHz to angular frequency in rad/s.
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz * 1e6
}

/// Angular frequency in rad/s to ordinary frequency in MHz.
pub fn angular_to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e6)
}

/// Vacuum wavelength to angular frequency.
pub fn wavelength_to_angular(lambda: f64) -> f64 {
    2.0 * PI * C / lambda
}

/// A van der Waals coefficient quoted as an ordinary frequency times a volume,
/// kHz um^3, converted to rad/s m^3.
pub fn c3_khz_um3_to_si(c3: f64) -> f64 {
    2.0 * PI * 1e3 * c3 * 1e-18
}

pub fn c3_si_to_khz_um3(c3: f64) -> f64 {
    c3 / (2.0 * PI * 1e3 * 1e-18)
}
