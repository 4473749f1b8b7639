mod common;

use common::*;
use fbg_cqed::analytic::{
    excitation_closed_form, linearization_check, moment_derivatives, photon_number_closed_form,
    weak_drive_solution, Moments,
};
use fbg_cqed::liouvillian::SystemParams;
use fbg_cqed::steady_state::{solve_steady, Truncation};

fn base(eta: f64) -> SystemParams {
    SystemParams { g: 1.7, gamma: 1.2, kappa: 2.5, eta, delta_a: 0.6, delta_c: -0.3 }
}

fn gap(eta: f64) -> f64 {
    let p = base(eta);
    let exact = solve_steady(&p, Truncation::Adaptive).unwrap().observables;
    let w = weak_drive_solution(&p).unwrap();
    ((exact.n_cav - w.n_cav) / exact.n_cav).abs().max(((exact.p_e - w.p_e) / exact.p_e).abs())
}

#[test]
fn weak_drive_limit_is_approached_quadratically() {
    let (g1, g2) = (gap(1e-2), gap(1e-3));
    assert!(g2 < 1e-5, "{g2}");
    let ratio = g1 / g2;
    assert!((ratio / 100.0 - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn exact_moments_are_stationary() {
    let mut r = rng(21);
    for _ in 0..10 {
        let p = random_params(&mut r);
        let ss = solve_steady(&p, Truncation::Adaptive).unwrap();
        let d = moment_derivatives(&p, &Moments::from_density(&ss.rho));
        assert!(d.max_abs() < 1e-8, "{}", d.max_abs());
    }
}

#[test]
fn linearization_residuals_vanish_with_drive() {
    let weak = linearization_check(&solve_steady(&base(1e-3), Truncation::Adaptive).unwrap().rho);
    let strong = linearization_check(&solve_steady(&base(0.5), Truncation::Adaptive).unwrap().rho);
    assert!(weak.a_sz < 1e-8 && weak.n_sz < 1e-10);
    assert!(strong.a_sz > 1e-3 && strong.n_sz > 1e-3);
}

#[test]
fn closed_forms_match_solution() {
    let mut r = rng(22);
    for _ in 0..50 {
        let p = random_params(&mut r);
        let w = weak_drive_solution(&p).unwrap();
        assert!((w.n_cav - photon_number_closed_form(&p)).abs() <= 1e-12 * w.n_cav);
        assert!((w.p_e - excitation_closed_form(&p)).abs() <= 1e-12 * w.p_e.max(1e-300));
        let m = Moments::linearized(&w);
        let d = moment_derivatives(&p, &m);
        let scale = p.max_rate() * (w.mean_field.norm() + w.coherence.norm() + p.eta.abs());
        assert!(d.max_abs() <= 1e-12 * scale, "{} vs {scale}", d.max_abs());
    }
}
