//! Weak-drive approximation: closed forms for the stationary moments and the
//! moment equations they come from.
//!
//! To lowest order in the drive the atom stays in its ground state, so
//! `<a sz> = -<a>` and `<a+ a sz> = -<a+ a>`; with these substitutions the
//! equations for `<a>` and `<s>` close and are solved exactly.

use crate::error::{Error, Result};
use crate::liouvillian::{DensityMatrix, SystemParams};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Stationary weak-drive moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakDriveSolution {
    /// `<a>`.
    pub mean_field: C64,
    /// `<s>`.
    pub coherence: C64,
    pub n_cav: f64,
    pub p_e: f64,
    /// `<a+ s + a s+>`.
    pub cross_sym: f64,
    /// `<a+ s - a s+>`, purely imaginary.
    pub cross_asym: C64,
    /// `D = G^2 + kappa gamma / 4 - Dc Da - i (Dc gamma + Da kappa) / 2`.
    pub denominator: C64,
}

/// `D` of the linear response.
pub fn denominator(p: &SystemParams) -> C64 {
    C64::new(
        p.g * p.g + 0.25 * p.kappa * p.gamma - p.delta_c * p.delta_a,
        -0.5 * (p.delta_c * p.gamma + p.delta_a * p.kappa),
    )
}

pub fn weak_drive_solution(p: &SystemParams) -> Result<WeakDriveSolution> {
    p.validate()?;
    let d = denominator(p);
    let scale = p.max_rate();
    if d.norm() <= 1e-12 * scale * scale {
        return Err(Error::DegenerateDenominator(d.norm()));
    }
    let mean_field = -(p.eta / d) * C64::new(-0.5 * p.gamma, p.delta_a);
    let coherence = -(p.eta * p.g) / d;
    let d2 = d.norm_sqr();
    let eta2 = p.eta * p.eta;
    Ok(WeakDriveSolution {
        mean_field,
        coherence,
        n_cav: eta2 * (p.delta_a * p.delta_a + 0.25 * p.gamma * p.gamma) / d2,
        p_e: eta2 * p.g * p.g / d2,
        cross_sym: -eta2 * p.g * p.gamma / d2,
        cross_asym: C64::new(0.0, -2.0 * eta2 * p.g * p.delta_a / d2),
        denominator: d,
    })
}

/// `|D|^2` written out in real and imaginary parts.
fn denominator_sq_expanded(p: &SystemParams) -> f64 {
    let re = p.g * p.g + 0.25 * p.kappa * p.gamma - p.delta_c * p.delta_a;
    let im = 0.5 * (p.delta_c * p.gamma + p.delta_a * p.kappa);
    re * re + im * im
}

/// Closed-form cavity photon number in the weak-drive limit.
pub fn photon_number_closed_form(p: &SystemParams) -> f64 {
    p.eta * p.eta * (p.delta_a * p.delta_a + 0.25 * p.gamma * p.gamma) / denominator_sq_expanded(p)
}

/// Closed-form excited-state population in the weak-drive limit.
pub fn excitation_closed_form(p: &SystemParams) -> f64 {
    p.eta * p.eta * p.g * p.g / denominator_sq_expanded(p)
}

/// Cavity detunings of the two normal-mode resonances when `Delta_a =
/// Delta_c - Delta_vdW`: `Delta_vdW/2 -+ sqrt(G^2 + kappa gamma/4 + Delta_vdW^2/4)`.
pub fn rabi_peak_positions(g: f64, kappa: f64, gamma: f64, vdw_shift: f64) -> (f64, f64) {
    let half = 0.5 * vdw_shift;
    let root = (g * g + 0.25 * kappa * gamma + half * half).sqrt();
    (half - root, half + root)
}

/// Moments entering the truncated hierarchy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub a: C64,
    pub a_dag: C64,
    pub sigma: C64,
    pub sigma_dag: C64,
    /// `<a sz>`.
    pub a_sz: C64,
    /// `<a+ a>`.
    pub n: C64,
    /// `<s+ s>`.
    pub pe: C64,
    /// `<a+ s + a s+>`.
    pub cross_sym: C64,
    /// `<a+ s - a s+>`.
    pub cross_asym: C64,
    /// `<a+ a sz>`.
    pub n_sz: C64,
}

impl Moments {
    /// Expectation values `Tr(O rho)`; `rho` need not be normalized.
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let b = rho.basis();
        let a = b.annihilation();
        let s = b.lowering();
        let sz = b.sigma_z();
        let a_dag = a.adjoint();
        let s_dag = s.adjoint();
        let ad_s = a_dag.mul(&s);
        let a_sd = a.mul(&s_dag);
        let num = a_dag.mul(&a);
        Self {
            a: rho.expectation(&a),
            a_dag: rho.expectation(&a_dag),
            sigma: rho.expectation(&s),
            sigma_dag: rho.expectation(&s_dag),
            a_sz: rho.expectation(&a.mul(&sz)),
            n: rho.expectation(&num),
            pe: rho.expectation(&s_dag.mul(&s)),
            cross_sym: rho.expectation(&ad_s) + rho.expectation(&a_sd),
            cross_asym: rho.expectation(&ad_s) - rho.expectation(&a_sd),
            n_sz: rho.expectation(&num.mul(&sz)),
        }
    }

    /// Weak-drive moments with the ground-state factorization applied.
    pub fn linearized(w: &WeakDriveSolution) -> Self {
        Self {
            a: w.mean_field,
            a_dag: w.mean_field.conj(),
            sigma: w.coherence,
            sigma_dag: w.coherence.conj(),
            a_sz: -w.mean_field,
            n: C64::new(w.n_cav, 0.0),
            pe: C64::new(w.p_e, 0.0),
            cross_sym: C64::new(w.cross_sym, 0.0),
            cross_asym: w.cross_asym,
            n_sz: C64::new(-w.n_cav, 0.0),
        }
    }
}

/// Time derivatives of the six tracked moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentDerivatives {
    pub a: C64,
    pub sigma: C64,
    pub n: C64,
    pub pe: C64,
    pub cross_sym: C64,
    pub cross_asym: C64,
}

impl MomentDerivatives {
    pub fn max_abs(&self) -> f64 {
        [self.a, self.sigma, self.n, self.pe, self.cross_sym, self.cross_asym]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm()))
    }
}

/// Right-hand sides of the moment equations.
pub fn moment_derivatives(p: &SystemParams, m: &Moments) -> MomentDerivatives {
    let delta = p.atom_cavity_detuning();
    let half_sum = 0.5 * (p.kappa + p.gamma);
    MomentDerivatives {
        a: I * p.delta_c * m.a + p.g * m.sigma - 0.5 * p.kappa * m.a + p.eta,
        sigma: I * p.delta_a * m.sigma + p.g * m.a_sz - 0.5 * p.gamma * m.sigma,
        n: p.g * m.cross_sym - p.kappa * m.n + p.eta * (m.a_dag + m.a),
        pe: -p.g * m.cross_sym - p.gamma * m.pe,
        cross_sym: I * delta * m.cross_asym + 2.0 * p.g * (m.n_sz + m.pe) - half_sum * m.cross_sym
            + p.eta * (m.sigma + m.sigma_dag),
        cross_asym: I * delta * m.cross_sym - half_sum * m.cross_asym + p.eta * (m.sigma - m.sigma_dag),
    }
}

/// How far a state is from the ground-state factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizationResiduals {
    /// `|<a sz> + <a>|`.
    pub a_sz: f64,
    /// `|<a+ a sz> + <a+ a>|`.
    pub n_sz: f64,
}

pub fn linearization_check(rho: &DensityMatrix) -> LinearizationResiduals {
    let m = Moments::from_density(rho);
    LinearizationResiduals {
        a_sz: (m.a_sz + m.a).norm(),
        n_sz: (m.n_sz + m.n).norm(),
    }
}
