//! Position-dependent atom-cavity parameters: coupling, surface-shifted
//! transition frequency and decay rate.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::cavity::{CavitySpec, DriveSpec};
use crate::constants::{c3_khz_um3_to_si, mhz_to_angular, wavelength_to_angular, C, EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::fiber_modes::{guided_decay_rate, FiberSpec, GuidedModeSolution};

/// Closest approach to the fiber surface for which the van der Waals shift is
/// evaluated, m.
pub const SURFACE_CUTOFF: f64 = 5e-9;

/// Two-level atom with a sigma+ transition dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec {
    /// `omega_0`, free-space transition frequency, rad/s.
    pub bare_frequency: f64,
    /// `gamma_0`, free-space decay rate, rad/s.
    pub natural_linewidth: f64,
    /// `C_3g`, rad/s m^3.
    pub c3_ground: f64,
    /// `C_3e`, rad/s m^3.
    pub c3_excited: f64,
}

impl AtomSpec {
    /// Only the `q = +1` spherical component of the dipole is nonzero.
    pub const DIPOLE_COMPONENT: i8 = 1;

    /// Cesium D2 cycling transition, 852 nm, 5.25 MHz linewidth.
    pub fn cesium_d2() -> Self {
        Self {
            bare_frequency: wavelength_to_angular(852e-9),
            natural_linewidth: mhz_to_angular(5.25),
            c3_ground: c3_khz_um3_to_si(1.56),
            c3_excited: c3_khz_um3_to_si(3.09),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bare_frequency > 0.0 && self.natural_linewidth > 0.0) {
            return Err(Error::InvalidParameter(
                "atomic frequency and linewidth must be positive".into(),
            ));
        }
        if !(self.c3_ground >= 0.0 && self.c3_excited >= 0.0) {
            return Err(Error::InvalidParameter("van der Waals coefficients must be >= 0".into()));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI * C / self.bare_frequency
    }

    /// Dipole matrix element from `gamma_0 = omega_0^3 d^2 / (3 pi eps0 hbar c^3)`, C m.
    pub fn dipole_magnitude(&self) -> f64 {
        (3.0 * PI * EPSILON_0 * HBAR * C.powi(3) * self.natural_linewidth / self.bare_frequency.powi(3)).sqrt()
    }
}

/// Atom position in cylindrical coordinates around the fiber axis.
///
/// The distance to the surface is stored directly so that `r - a` carries no
/// rounding from the subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPosition {
    pub core_radius: f64,
    /// `r - a`, m.
    pub surface_distance: f64,
    pub azimuth: f64,
    /// `z`, m, measured from the cavity center.
    pub axial: f64,
}

impl AtomPosition {
    pub fn new(fiber: &FiberSpec, surface_distance: f64, axial: f64) -> Result<Self> {
        if !(surface_distance >= 0.0 && surface_distance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "atom must sit outside the fiber, got r - a = {surface_distance}"
            )));
        }
        Ok(Self {
            core_radius: fiber.core_radius,
            surface_distance,
            azimuth: 0.0,
            axial,
        })
    }

    /// `r`, distance from the fiber axis.
    pub fn radial(&self) -> f64 {
        self.core_radius + self.surface_distance
    }
}

/// `cos(x + m pi / 2)` with `m` reduced mod 4 before it meets floating point.
fn shifted_cos(x: f64, m: i64) -> f64 {
    match m.rem_euclid(4) {
        0 => x.cos(),
        1 => -x.sin(),
        2 => -x.cos(),
        _ => x.sin(),
    }
}

/// Standing-wave factor `cos(beta_c z + m pi / 2)`.
pub fn standing_wave(mode: &GuidedModeSolution, cavity: &CavitySpec, z: f64) -> f64 {
    shifted_cos(mode.propagation_constant * z, cavity.resonance_order)
}

/// Axial position of the first antinode (z >= 0) of the standing wave.
pub fn first_antinode(mode: &GuidedModeSolution, cavity: &CavitySpec) -> f64 {
    if cavity.resonance_order.rem_euclid(2) == 0 {
        0.0
    } else {
        FRAC_PI_2 / mode.propagation_constant
    }
}

/// `G = sqrt(omega_c d^2 / (eps0 hbar L)) |e_{-1}(r)| cos(beta_c z + m pi/2)`,
/// with `mode` solved at the cavity resonance.
pub fn coupling_g(mode: &GuidedModeSolution, cavity: &CavitySpec, atom: &AtomSpec, pos: &AtomPosition) -> f64 {
    coupling_amplitude(mode, cavity, atom, pos.radial()) * standing_wave(mode, cavity, pos.axial)
}

/// Antinode value of `G` at radius `r`.
pub fn coupling_amplitude(mode: &GuidedModeSolution, cavity: &CavitySpec, atom: &AtomSpec, r: f64) -> f64 {
    let d = atom.dipole_magnitude();
    (cavity.resonance_frequency * d * d / (EPSILON_0 * HBAR * cavity.length)).sqrt() * mode.mode_profile(r).e_minus()
}

/// Shift of the transition frequency by the flat-surface potentials
/// `V_a = -C_3a / (r - a)^3`: `-(C_3e - C_3g) / (r - a)^3`, rad/s.
pub fn vdw_shift(atom: &AtomSpec, pos: &AtomPosition) -> Result<f64> {
    let d = pos.surface_distance;
    // 1e-9 slack keeps scan grids that start exactly at the cutoff valid.
    if d < SURFACE_CUTOFF * (1.0 - 1e-9) {
        return Err(Error::SurfaceCutoff {
            distance: d,
            cutoff: SURFACE_CUTOFF,
        });
    }
    Ok(-(atom.c3_excited - atom.c3_ground) / d.powi(3))
}

/// `Delta_a = omega_p - omega_a(r)`.
pub fn detuning_atom(drive: &DriveSpec, atom: &AtomSpec, pos: &AtomPosition) -> Result<f64> {
    Ok(drive.probe_frequency - atom.bare_frequency - vdw_shift(atom, pos)?)
}

/// `gamma = gamma_gyd(r) + gamma_rad` with `gamma_rad` taken as `gamma_0`;
/// `mode` is solved at the atomic frequency.
pub fn total_decay_rate(mode: &GuidedModeSolution, atom: &AtomSpec, r: f64) -> f64 {
    guided_decay_rate(mode, atom, r) + atom.natural_linewidth
}
