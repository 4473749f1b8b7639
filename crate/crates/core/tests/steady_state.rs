mod common;

use common::*;
use fbg_cqed::liouvillian::{Basis, DensityMatrix, SystemParams};
use fbg_cqed::steady_state::{
    ground_state, initial_truncation, min_eigenvalue, observables_from, propagate, propagate_with, solve_steady,
    Truncation,
};
use fbg_cqed::Error;

#[test]
fn free_decay_of_excited_atom() {
    let p = SystemParams { g: 0.0, gamma: 1.3, kappa: 0.8, eta: 0.0, delta_a: 0.4, delta_c: -0.2 };
    let rho0 = DensityMatrix::basis_state(Basis::new(2).unwrap(), true, 0);
    let mut worst = 0.0f64;
    propagate_with(&p, &rho0, 5.0, None, |t, rho| {
        let pe = observables_from(rho).p_e;
        worst = worst.max((pe - (-p.gamma * t).exp()).abs());
    })
    .unwrap();
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn vacuum_rabi_oscillation() {
    let g = 0.9;
    let p = SystemParams { g, gamma: 0.0, kappa: 0.0, eta: 0.0, delta_a: 0.0, delta_c: 0.0 };
    let rho0 = DensityMatrix::basis_state(Basis::new(3).unwrap(), true, 0);
    let mut worst = 0.0f64;
    propagate_with(&p, &rho0, 10.0, Some(2e-3), |t, rho| {
        let o = observables_from(rho);
        worst = worst.max((o.p_e - (g * t).cos().powi(2)).abs());
        worst = worst.max((o.n_cav - (g * t).sin().powi(2)).abs());
    })
    .unwrap();
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn propagation_keeps_trace_and_hermiticity() {
    let mut r = rng(11);
    for _ in 0..5 {
        let p = random_params(&mut r);
        let rho = propagate(&p, &random_density(&mut r, 5, 5), 2.0, None).unwrap();
        assert!((rho.trace() - 1.0).norm() < 1e-10);
        assert!(rho.hermiticity_defect() < 1e-12);
    }
}

#[test]
fn propagation_reaches_steady_state() {
    let p = SystemParams { g: 1.2, gamma: 1.0, kappa: 2.0, eta: 0.5, delta_a: 0.3, delta_c: -0.4 };
    let direct = solve_steady(&p, Truncation::Fixed(7)).unwrap();
    let evolved = propagate(&p, &ground_state(7).unwrap(), 40.0, None).unwrap();
    assert!(max_diff(&evolved, &direct.rho) < 1e-6);
}

#[test]
fn steady_states_are_positive() {
    let mut r = rng(12);
    for _ in 0..20 {
        let p = random_params(&mut r);
        let ss = solve_steady(&p, Truncation::Adaptive).unwrap();
        assert!(min_eigenvalue(&ss.rho) > -1e-10);
        assert!((ss.rho.trace() - 1.0).norm() < 1e-13);
        assert!(ss.observables.p_e >= -1e-14 && ss.observables.p_e <= 0.5 + 1e-12);
    }
}

#[test]
fn adaptive_truncation_is_converged() {
    let p = SystemParams { g: 2.0, gamma: 1.0, kappa: 3.0, eta: 1.2, delta_a: 0.0, delta_c: 0.0 };
    let ss = solve_steady(&p, Truncation::Adaptive).unwrap();
    assert!(ss.n_max >= initial_truncation(&p));
    let bigger = solve_steady(&p, Truncation::Fixed(ss.n_max + 2)).unwrap().observables;
    assert!((ss.observables.n_cav / bigger.n_cav - 1.0).abs() < 1e-6);
    assert!((ss.observables.g2.unwrap() / bigger.g2.unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn strongly_coupled_atom_blocks_resonant_transmission() {
    let empty = SystemParams { g: 0.0, gamma: 1.0, kappa: 1.0, eta: 1e-3, delta_a: 0.0, delta_c: 0.0 };
    let coupled = SystemParams { g: 5.0, ..empty };
    let n0 = solve_steady(&empty, Truncation::Adaptive).unwrap().observables.n_cav;
    let n1 = solve_steady(&coupled, Truncation::Adaptive).unwrap().observables.n_cav;
    // Weak-drive suppression factor (kappa gamma / 4)^2 / (G^2 + kappa gamma / 4)^2.
    let factor = (0.25f64 / 25.25).powi(2);
    assert!((n1 / n0 / factor - 1.0).abs() < 0.02);
}

#[test]
fn errors() {
    let p = SystemParams { g: 1.0, gamma: 1.0, kappa: 1.0, eta: 0.1, delta_a: 0.0, delta_c: 0.0 };
    assert_eq!(solve_steady(&p, Truncation::Fixed(0)).unwrap_err(), Error::TruncationTooSmall(0));
    let nan = SystemParams { g: f64::NAN, ..p };
    assert!(matches!(solve_steady(&nan, Truncation::Adaptive), Err(Error::InvalidParameter(_))));
    assert!(matches!(propagate(&p, &ground_state(3).unwrap(), -1.0, None), Err(Error::InvalidParameter(_))));
}
