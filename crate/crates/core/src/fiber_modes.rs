//! Fundamental HE11 mode of a step-index fiber.
//!
//! The profile follows the usual hybrid-mode expressions: ordinary Bessel
//! functions `J_n(h r)` in the core and modified Bessel functions `K_n(q r)`
//! in the cladding, with `h = sqrt(n1^2 k^2 - beta^2)` and
//! `q = sqrt(beta^2 - n2^2 k^2)`. Profiles are normalized so that
//! `int dphi int n^2(r) |e|^2 r dr = 1`.

use std::f64::consts::{PI, SQRT_2};

use crate::atom_field::AtomSpec;
use crate::constants::{C, EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::special::{bessel_j, bessel_j1_prime, bessel_k, bessel_k1_prime};

/// Cutoff of the first higher-order modes (first zero of `J_0`).
pub const SINGLE_MODE_CUTOFF: f64 = 2.405;

const SCAN_POINTS: usize = 2000;
const FD_RELATIVE_STEP: f64 = 1e-6;
const DECAY_LENGTHS: f64 = 20.0;
const NORMALIZATION_TOL: f64 = 1e-13;

/// Step-index fiber geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSpec {
    /// Core radius `a`, m.
    pub core_radius: f64,
    pub core_index: f64,
    pub clad_index: f64,
}

impl FiberSpec {
    /// Silica nanofiber in vacuum.
    pub fn silica_nanofiber(core_radius: f64) -> Self {
        Self {
            core_radius,
            core_index: 1.45,
            clad_index: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.core_radius > 0.0 && self.core_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "core radius must be positive, got {}",
                self.core_radius
            )));
        }
        if !(self.clad_index >= 1.0 && self.core_index > self.clad_index) {
            return Err(Error::InvalidParameter(format!(
                "need n1 > n2 >= 1, got n1 = {}, n2 = {}",
                self.core_index, self.clad_index
            )));
        }
        Ok(())
    }

    /// Normalized frequency `V = k a sqrt(n1^2 - n2^2)`.
    pub fn v_parameter(&self, omega: f64) -> f64 {
        omega / C * self.core_radius * self.numerical_aperture()
    }

    fn numerical_aperture(&self) -> f64 {
        (self.core_index.powi(2) - self.clad_index.powi(2)).sqrt()
    }

    /// Core and cladding parameters `u = h a`, `w = q a` at effective index `n_eff`.
    fn uw(&self, ka: f64, n_eff: f64) -> (f64, f64) {
        let u = ka * (self.core_index.powi(2) - n_eff * n_eff).sqrt();
        let w = ka * (n_eff * n_eff - self.clad_index.powi(2)).sqrt();
        (u, w)
    }

    /// HE11 eigenvalue equation written as `lhs / rhs - 1`.
    fn he11_residual(&self, ka: f64, n_eff: f64) -> f64 {
        let (u, w) = self.uw(ka, n_eff);
        let jr = bessel_j1_prime(u) / (u * bessel_j(1, u));
        let kr = bessel_k1_prime(w) / (w * bessel_k(1, w));
        let lhs = (jr + kr) * (self.core_index.powi(2) * jr + self.clad_index.powi(2) * kr);
        let rhs = n_eff * n_eff * (1.0 / (u * u) + 1.0 / (w * w)).powi(2);
        lhs / rhs - 1.0
    }

    /// Effective index `beta / k` of the HE11 mode.
    fn effective_index(&self, omega: f64) -> Result<f64> {
        let ka = omega / C * self.core_radius;
        let (lo, hi) = (self.clad_index, self.core_index);
        let f = |n: f64| self.he11_residual(ka, n);

        let grid: Vec<f64> = (0..SCAN_POINTS)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / SCAN_POINTS as f64)
            .collect();
        let values: Vec<f64> = grid.iter().map(|&n| f(n)).collect();
        // The fundamental mode is the root with the largest effective index.
        let bracket = (0..SCAN_POINTS - 1).rev().find(|&i| {
            values[i].is_finite() && values[i + 1].is_finite() && values[i].signum() != values[i + 1].signum()
        });
        let i = bracket.ok_or(Error::NoGuidedMode)?;
        let (mut a, mut b) = (grid[i], grid[i + 1]);
        let (mut fa, mut fb) = (values[i], values[i + 1]);

        while (b - a) > 1e-10 * a {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }

        // Secant polish, kept inside the bracket.
        let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
        for _ in 0..20 {
            if f1 == f0 {
                break;
            }
            let x2 = (x1 - f1 * (x1 - x0) / (f1 - f0)).clamp(a, b);
            let step = (x2 - x1).abs();
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = f(x2);
            if step <= 1e-14 * x1 || f1 == 0.0 {
                break;
            }
        }
        Ok(if f1.abs() <= f0.abs() { x1 } else { x0 })
    }
}

/// Solved HE11 mode at one angular frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct GuidedModeSolution {
    pub fiber: FiberSpec,
    pub angular_frequency: f64,
    /// Propagation constant `beta`, rad/m.
    pub propagation_constant: f64,
    /// `d beta / d omega`, s/m, by centered finite difference.
    pub beta_derivative: f64,
    /// `1 / beta'`, m/s.
    pub group_velocity: f64,
    h: f64,
    q: f64,
    s: f64,
    amplitude: f64,
}

/// Magnitudes of the cylindrical profile components of the reference mode
/// `(f, l) = (+, +)`, in m^-1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub e_r: f64,
    pub e_phi: f64,
    pub e_z: f64,
}

impl ModeProfile {
    /// `|e_{-1}| = (|e_r| + |e_phi|) / sqrt(2)`, the component a sigma+
    /// transition couples to.
    pub fn e_minus(&self) -> f64 {
        (self.e_r + self.e_phi) / SQRT_2
    }

    /// `|e_{+1}| = (|e_r| - |e_phi|) / sqrt(2)`.
    pub fn e_plus(&self) -> f64 {
        (self.e_r - self.e_phi) / SQRT_2
    }

    /// `|e_{-l}|` for rotation index `l = +1` or `l = -1`.
    pub fn spherical_for_rotation(&self, l: i8) -> f64 {
        if l > 0 {
            self.e_minus()
        } else {
            self.e_plus().abs()
        }
    }

    pub fn intensity(&self) -> f64 {
        self.e_r * self.e_r + self.e_phi * self.e_phi + self.e_z * self.e_z
    }
}

/// Solves the HE11 dispersion relation at `omega` and builds the normalized
/// mode profile.
pub fn solve_dispersion(spec: FiberSpec, omega: f64) -> Result<GuidedModeSolution> {
    spec.validate()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!("angular frequency must be positive, got {omega}")));
    }
    let v = spec.v_parameter(omega);
    if v >= SINGLE_MODE_CUTOFF {
        return Err(Error::MultiMode { v });
    }

    let k = omega / C;
    let n_eff = spec.effective_index(omega)?;
    let beta = n_eff * k;

    let dw = FD_RELATIVE_STEP * omega;
    let beta_up = spec.effective_index(omega + dw)? * (omega + dw) / C;
    let beta_down = spec.effective_index(omega - dw)? * (omega - dw) / C;
    let beta_derivative = (beta_up - beta_down) / (2.0 * dw);

    let ka = k * spec.core_radius;
    let (u, w) = spec.uw(ka, n_eff);
    let s = (1.0 / (u * u) + 1.0 / (w * w))
        / (bessel_j1_prime(u) / (u * bessel_j(1, u)) + bessel_k1_prime(w) / (w * bessel_k(1, w)));

    let mut sol = GuidedModeSolution {
        fiber: spec,
        angular_frequency: omega,
        propagation_constant: beta,
        beta_derivative,
        group_velocity: 1.0 / beta_derivative,
        h: u / spec.core_radius,
        q: w / spec.core_radius,
        s,
        amplitude: 1.0,
    };
    let norm = sol.normalization_integral();
    sol.amplitude = 1.0 / norm.sqrt();
    Ok(sol)
}

impl GuidedModeSolution {
    pub fn wavenumber(&self) -> f64 {
        self.angular_frequency / C
    }

    /// Evanescent decay constant `q` outside the core, 1/m.
    pub fn decay_constant(&self) -> f64 {
        self.q
    }

    /// Normalized residual of the HE11 equation at the stored `beta`.
    pub fn dispersion_residual(&self) -> f64 {
        let k = self.wavenumber();
        self.fiber
            .he11_residual(k * self.fiber.core_radius, self.propagation_constant / k)
    }

    /// Profile component magnitudes at radial distance `r >= 0` from the axis.
    pub fn mode_profile(&self, r: f64) -> ModeProfile {
        debug_assert!(r >= 0.0);
        let a = self.fiber.core_radius;
        let (h, q, s, beta) = (self.h, self.q, self.s, self.propagation_constant);
        let (e_r, e_phi, e_z) = if r < a {
            let ua = h * a;
            let k1 = bessel_k(1, q * a);
            let j1 = bessel_j(1, ua);
            let scale = q * k1 / (h * j1);
            let (j0r, j1r, j2r) = (bessel_j(0, h * r), bessel_j(1, h * r), bessel_j(2, h * r));
            (
                scale * ((1.0 - s) * j0r - (1.0 + s) * j2r),
                scale * ((1.0 - s) * j0r + (1.0 + s) * j2r),
                2.0 * q * k1 / (beta * j1) * j1r,
            )
        } else {
            let x = q * r;
            let (k0, k1, k2) = (bessel_k(0, x), bessel_k(1, x), bessel_k(2, x));
            (
                (1.0 - s) * k0 + (1.0 + s) * k2,
                (1.0 - s) * k0 - (1.0 + s) * k2,
                2.0 * q / beta * k1,
            )
        };
        ModeProfile {
            e_r: self.amplitude * e_r.abs(),
            e_phi: self.amplitude * e_phi.abs(),
            e_z: self.amplitude * e_z.abs(),
        }
    }

    /// `int_0^{2pi} dphi int_0^inf n^2 |e|^2 r dr` for the current amplitude.
    pub fn normalization_integral(&self) -> f64 {
        let a = self.fiber.core_radius;
        let n1sq = self.fiber.core_index.powi(2);
        let n2sq = self.fiber.clad_index.powi(2);
        let inner = integrate(|r| n1sq * self.mode_profile(r).intensity() * r, 0.0, a, NORMALIZATION_TOL);
        let outer = integrate(
            |r| n2sq * self.mode_profile(r).intensity() * r,
            a,
            a + DECAY_LENGTHS / self.q,
            NORMALIZATION_TOL,
        );
        2.0 * PI * (inner + outer)
    }
}

/// Rate of spontaneous emission into the guided modes at distance `r` from
/// the fiber axis, summed over propagation direction and polarization
/// rotation, for a sigma+ dipole.
pub fn guided_decay_rate(sol: &GuidedModeSolution, atom: &AtomSpec, r: f64) -> f64 {
    let profile = sol.mode_profile(r);
    let d = atom.dipole_magnitude();
    let mut sum = 0.0;
    for _f in [1i8, -1] {
        for l in [1i8, -1] {
            // |d . e^{(f,l)}| = d |e_{-l}| for q = +1
            sum += (d * profile.spherical_for_rotation(l)).powi(2);
        }
    }
    atom.bare_frequency / (2.0 * EPSILON_0 * HBAR * sol.group_velocity) * sum
}
