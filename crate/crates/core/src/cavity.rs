//! Fabry-Perot cavity formed by two identical lossless fiber Bragg gratings.

use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::error::{Error, Result};

/// Largest `|Theta(omega_p) - m pi|` for which the first-order expansion of
/// the round-trip phase is accepted.
pub const EXPANSION_LIMIT: f64 = 0.3;

/// Grating pair and cavity geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    /// `|R|`, amplitude reflection coefficient of each grating.
    pub reflectivity: f64,
    /// `phi_R`, phase of `R`.
    pub reflection_phase: f64,
    /// Mirror separation `L`, m.
    pub length: f64,
    /// Resonance order `m`; only `m mod 4` affects the standing wave.
    pub resonance_order: i64,
    /// `omega_c`, rad/s.
    pub resonance_frequency: f64,
}

impl CavitySpec {
    pub fn from_power_reflectivity(power_reflectivity: f64, length: f64, resonance_frequency: f64) -> Result<Self> {
        let spec = Self {
            reflectivity: power_reflectivity.sqrt(),
            reflection_phase: 0.0,
            length,
            resonance_order: 0,
            resonance_frequency,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_order(mut self, m: i64) -> Self {
        self.resonance_order = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.reflectivity > 0.0 && self.reflectivity < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "grating reflectivity |R| must lie in (0, 1), got {}",
                self.reflectivity
            )));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::InvalidParameter(format!("cavity length must be positive, got {}", self.length)));
        }
        if !(self.resonance_frequency > 0.0 && self.resonance_frequency.is_finite()) {
            return Err(Error::InvalidParameter("cavity resonance frequency must be positive".into()));
        }
        Ok(())
    }

    pub fn power_reflectivity(&self) -> f64 {
        self.reflectivity * self.reflectivity
    }

    /// `|T|^2 = 1 - |R|^2` for lossless gratings.
    pub fn power_transmissivity(&self) -> f64 {
        1.0 - self.power_reflectivity()
    }

    /// `F = pi |R| / (1 - |R|^2)`.
    pub fn finesse(&self) -> f64 {
        PI * self.reflectivity / self.power_transmissivity()
    }
}

/// Even resonance order closest to `beta L / pi`.
pub fn nearest_even_order(beta: f64, length: f64) -> i64 {
    2 * (beta * length / (2.0 * PI)).round() as i64
}

/// Classical probe injected through one grating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    /// `omega_p`, rad/s.
    pub probe_frequency: f64,
    /// `P_in`, W.
    pub input_power: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.input_power >= 0.0 && self.input_power.is_finite()) {
            return Err(Error::InvalidParameter(format!("input power must be >= 0, got {}", self.input_power)));
        }
        if !(self.probe_frequency > 0.0) {
            return Err(Error::InvalidParameter("probe frequency must be positive".into()));
        }
        Ok(())
    }
}

/// Cavity quantities entering the master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub kappa: f64,
    pub eta: f64,
    pub finesse: f64,
    /// `Delta_c = omega_p - omega_c`.
    pub detuning_cavity: f64,
}

impl CavityParams {
    pub fn new(spec: &CavitySpec, drive: &DriveSpec, group_velocity: f64) -> Self {
        Self {
            kappa: damping_rate(spec, group_velocity),
            eta: pumping_rate(spec, drive, group_velocity),
            finesse: spec.finesse(),
            detuning_cavity: drive.probe_frequency - spec.resonance_frequency,
        }
    }
}

/// Transmitted fraction `P_out / P_in` of the empty cavity, Lorentzian in
/// `omega_p - omega_c`.
///
/// Outside the first-order regime the ratio is still computed and returned
/// inside [`Error::ExpansionDomain`].
pub fn transmission(spec: &CavitySpec, group_velocity: f64, probe_frequency: f64) -> Result<f64> {
    let t2 = spec.power_transmissivity();
    let phase_offset = spec.length / group_velocity * (probe_frequency - spec.resonance_frequency);
    let ratio = t2 * t2 / (t2 * t2 + 4.0 * spec.power_reflectivity() * phase_offset * phase_offset);
    if phase_offset.abs() > EXPANSION_LIMIT {
        return Err(Error::ExpansionDomain {
            phase_offset: phase_offset.abs(),
            ratio,
        });
    }
    Ok(ratio)
}

/// `kappa = (1 - |R|^2) v_g / (|R| L)`.
pub fn damping_rate(spec: &CavitySpec, group_velocity: f64) -> f64 {
    spec.power_transmissivity() * group_velocity / (spec.reflectivity * spec.length)
}

/// `eta = sqrt((1 - |R|^2) v_g P_in / (2 |R| L hbar omega_p))`.
pub fn pumping_rate(spec: &CavitySpec, drive: &DriveSpec, group_velocity: f64) -> f64 {
    (spec.power_transmissivity() * group_velocity * drive.input_power
        / (2.0 * spec.reflectivity * spec.length * HBAR * drive.probe_frequency))
        .sqrt()
}

/// `n = eta^2 / (kappa^2/4 + Delta_c^2)`.
pub fn empty_cavity_photon_number(params: &CavityParams) -> f64 {
    params.eta * params.eta / (0.25 * params.kappa * params.kappa + params.detuning_cavity * params.detuning_cavity)
}

/// `P_out = hbar omega_p kappa N / 2`.
pub fn transmitted_power(kappa: f64, probe_frequency: f64, n_cav: f64) -> f64 {
    0.5 * HBAR * probe_frequency * kappa * n_cav
}
