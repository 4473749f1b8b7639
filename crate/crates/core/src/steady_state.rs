//! Stationary solution and time propagation of the master equation.

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::cavity::transmitted_power;
use crate::error::{Error, Result};
use crate::liouvillian::{Basis, DensityMatrix, Liouvillian, SystemParams};
use crate::C64;

/// Relative change tolerated between truncations `n_max` and `n_max + 2`.
pub const TRUNCATION_TOL: f64 = 1e-6;
/// Largest Hilbert-space dimension the adaptive truncation will try.
pub const MAX_DIM: usize = 40;
/// Below this photon number `g2` is reported as undefined.
pub const G2_MIN_PHOTONS: f64 = 1e-12;

// A stationary state whose scaled residual exceeds this is treated as a
// failed solve.
const RESIDUAL_LIMIT: f64 = 1e-8;
// Steps per inverse fastest rate in `propagate` when no step is given.
const DEFAULT_STEP_FRACTION: f64 = 0.01;

/// How the photon-number truncation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Fixed(usize),
    /// Start from the empty-cavity estimate and grow until observables change
    /// by less than [`TRUNCATION_TOL`] between `n_max` and `n_max + 2`.
    Adaptive,
}

/// Observables of one density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// `N_cav = <a+ a>`.
    pub n_cav: f64,
    /// `<a+ a+ a a> / <a+ a>^2`, `None` when `N_cav` is negligible.
    pub g2: Option<f64>,
    /// `P_e = <s+ s>`.
    pub p_e: f64,
    /// `<a>`.
    pub mean_field: C64,
    /// `<s>`.
    pub coherence: C64,
}

impl Observables {
    pub fn g2(&self) -> Result<f64> {
        self.g2.ok_or(Error::G2Undefined { n_cav: self.n_cav })
    }

    /// Output power through the far grating, W.
    pub fn transmitted_power(&self, kappa: f64, probe_frequency: f64) -> f64 {
        transmitted_power(kappa, probe_frequency, self.n_cav)
    }

    /// `|<a+ a> - |<a>|^2| / <a+ a>`; zero for a coherent cavity field.
    pub fn factorization_gap(&self) -> f64 {
        (self.n_cav - self.mean_field.norm_sqr()).abs() / self.n_cav
    }
}

/// Converged stationary state.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    pub observables: Observables,
    pub n_max: usize,
    /// `max |L rho| / (||L|| max |rho|)`.
    pub residual: f64,
}

/// Reads the standard observables off a density matrix.
pub fn observables_from(rho: &DensityMatrix) -> Observables {
    let basis = rho.basis();
    let trace = rho.trace().re;
    let mut n_cav = 0.0;
    let mut pairs = 0.0;
    let mut p_e = 0.0;
    let mut mean_field = C64::new(0.0, 0.0);
    let mut coherence = C64::new(0.0, 0.0);
    for n in 0..=basis.n_max {
        let nf = n as f64;
        for excited in [false, true] {
            let i = basis.index(excited, n);
            let pop = rho.get(i, i).re;
            n_cav += nf * pop;
            pairs += nf * (nf - 1.0) * pop;
            if excited {
                p_e += pop;
            }
            if n > 0 {
                mean_field += nf.sqrt() * rho.get(i, basis.index(excited, n - 1));
            }
        }
        coherence += rho.get(basis.index(true, n), basis.index(false, n));
    }
    let scale = 1.0 / trace;
    let n_cav = n_cav * scale;
    Observables {
        n_cav,
        g2: (n_cav > G2_MIN_PHOTONS).then(|| pairs * scale / (n_cav * n_cav)),
        p_e: p_e * scale,
        mean_field: mean_field * scale,
        coherence: coherence * scale,
    }
}

/// Stationary density matrix `L rho = 0`, `Tr rho = 1`.
pub fn solve_steady(params: &SystemParams, truncation: Truncation) -> Result<SteadyState> {
    params.validate()?;
    if !(params.kappa > 0.0 && params.gamma > 0.0) {
        return Err(Error::InvalidParameter(
            "a unique steady state needs kappa > 0 and gamma > 0".into(),
        ));
    }
    match truncation {
        Truncation::Fixed(n_max) => solve_fixed(params, n_max),
        Truncation::Adaptive => solve_adaptive(params),
    }
}

/// Initial truncation: ten times the empty-cavity photon number plus four.
pub fn initial_truncation(params: &SystemParams) -> usize {
    let n_bar = params.eta * params.eta / (0.25 * params.kappa * params.kappa + params.delta_c * params.delta_c);
    (10.0 * n_bar).ceil() as usize + 4
}

fn solve_adaptive(params: &SystemParams) -> Result<SteadyState> {
    let mut n_max = initial_truncation(params);
    if 2 * (n_max + 3) > MAX_DIM {
        return Err(Error::TruncationNotConverged { n_max });
    }
    let mut coarse = solve_fixed(params, n_max)?;
    while 2 * (n_max + 3) <= MAX_DIM {
        let fine = solve_fixed(params, n_max + 2)?;
        if converged(&coarse.observables, &fine.observables) {
            return Ok(fine);
        }
        coarse = fine;
        n_max += 2;
    }
    Err(Error::TruncationNotConverged { n_max })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TRUNCATION_TOL * a.abs().max(b.abs()) + 1e-14
}

fn converged(a: &Observables, b: &Observables) -> bool {
    let g2 = match (a.g2, b.g2) {
        (Some(x), Some(y)) => close(x, y),
        (None, None) => true,
        _ => false,
    };
    g2 && close(a.n_cav, b.n_cav) && close(a.p_e, b.p_e)
}

fn solve_fixed(params: &SystemParams, n_max: usize) -> Result<SteadyState> {
    let liouvillian = Liouvillian::new(params, n_max)?;
    let basis = liouvillian.basis;
    let d = basis.dim();
    let mut m = liouvillian.matrix();
    // The rows of L are linearly dependent (trace preservation); the first is
    // swapped for the normalization Tr rho = 1.
    for col in 0..d * d {
        m[(0, col)] = C64::new(0.0, 0.0);
    }
    for j in 0..d {
        m[(0, j + d * j)] = C64::new(1.0, 0.0);
    }
    let mut rhs = Mat::<C64>::zeros(d * d, 1);
    rhs[(0, 0)] = C64::new(1.0, 0.0);
    let x = m.as_ref().partial_piv_lu().solve(&rhs);
    let v: Vec<C64> = (0..d * d).map(|k| x[(k, 0)]).collect();
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSystem);
    }

    let mut rho = DensityMatrix::from_vec(basis, &v);
    rho.hermitize();
    let trace = rho.trace().re;
    for z in rho.data.iter_mut() {
        *z /= trace;
    }
    let residual = scaled_residual(&liouvillian, &rho);
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(Error::SingularSystem);
    }
    Ok(SteadyState {
        observables: observables_from(&rho),
        rho,
        n_max,
        residual,
    })
}

/// `max |L rho| / (||L|| max |rho|)` with the operator-form generator.
pub fn scaled_residual(liouvillian: &Liouvillian, rho: &DensityMatrix) -> f64 {
    liouvillian.apply(rho).max_abs() / (liouvillian.norm_bound() * rho.max_abs())
}

/// Default RK4 step: a hundredth of the inverse fastest rate.
pub fn default_step(params: &SystemParams) -> f64 {
    DEFAULT_STEP_FRACTION / params.max_rate()
}

/// Integrates `drho/dt = L rho` from `rho0` over `[0, t_final]` with
/// classical fourth-order Runge-Kutta.
pub fn propagate(params: &SystemParams, rho0: &DensityMatrix, t_final: f64, dt: Option<f64>) -> Result<DensityMatrix> {
    let mut out = rho0.clone();
    propagate_with(params, rho0, t_final, dt, |_, rho| out = rho.clone())?;
    Ok(out)
}

/// As [`propagate`], calling `observe(t, rho)` after every step.
pub fn propagate_with<F: FnMut(f64, &DensityMatrix)>(
    params: &SystemParams,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: Option<f64>,
    mut observe: F,
) -> Result<()> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_final must be >= 0, got {t_final}")));
    }
    let liouvillian = Liouvillian::new(params, rho0.n_max)?;
    let requested = dt.unwrap_or_else(|| default_step(params));
    if !(requested > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {requested}")));
    }
    let product = requested * liouvillian.norm_bound();
    if product > 1.0 {
        return Err(Error::StepTooLarge { dt: requested, product });
    }
    let steps = (t_final / requested).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let mut rho = rho0.clone();
    for step in 1..=steps {
        let k1 = liouvillian.apply(&rho);
        let k2 = liouvillian.apply(&rho.axpy(0.5 * h, &k1));
        let k3 = liouvillian.apply(&rho.axpy(0.5 * h, &k2));
        let k4 = liouvillian.apply(&rho.axpy(h, &k3));
        for (((x, a), (b, c)), d) in rho.data.iter_mut().zip(&k1.data).zip(k2.data.iter().zip(&k3.data)).zip(&k4.data) {
            *x += h / 6.0 * (a + 2.0 * b + 2.0 * c + d);
        }
        observe(step as f64 * h, &rho);
    }
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part of `rho`.
pub fn min_eigenvalue(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()[0]
}

/// Vacuum with the atom in the ground state.
pub fn ground_state(n_max: usize) -> Result<DensityMatrix> {
    Ok(DensityMatrix::basis_state(Basis::new(n_max)?, false, 0))
}
