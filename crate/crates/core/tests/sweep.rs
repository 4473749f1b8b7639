use fbg_cqed::sweep::{
    builtin_scenario, builtin_scenarios, local_maxima, local_minima, run_scenario, Scan, ScanAxis, SolverPath,
    SCENARIO_NAMES,
};
use fbg_cqed::Error;

#[test]
fn nine_predefined_scenarios() {
    let all = builtin_scenarios();
    assert_eq!(all.len(), 9);
    assert_eq!(all.iter().map(|s| s.name.as_str()).collect::<Vec<_>>(), SCENARIO_NAMES);
}

#[test]
fn length_override_reproduces_short_cavity_scenario() {
    let mut s = builtin_scenario("fig3").unwrap();
    s.cavity.length = 1e-3;
    s.name = "fig8".into();
    assert_eq!(s, builtin_scenario("fig8").unwrap());
}

#[test]
fn failed_points_are_recorded_in_order() {
    // At 100 pW the resonant points need more photons than the truncation
    // allows; the far-detuned ones do not.
    let mut s = builtin_scenario("fig5").unwrap();
    s.drive.input_power = 100e-12;
    s.scan.points = 9;
    let res = run_scenario(&s).unwrap();
    assert_eq!(res.coords(), s.scan.coordinates());
    let errors: Vec<_> = res.points.iter().map(|p| p.error()).collect();
    assert!(errors[0].is_none() && errors[8].is_none());
    assert!(matches!(errors[4], Some(Error::TruncationNotConverged { .. })));
    assert!(res.points[4].params.is_some());
}

#[test]
fn radial_scan_inside_cutoff_is_rejected() {
    let mut s = builtin_scenario("fig3").unwrap();
    s.scan = Scan { axis: ScanAxis::Radial, start: 1e-9, stop: 9e-9, points: 5 };
    assert!(matches!(run_scenario(&s), Err(Error::InvalidParameter(_))));
    s.scan.start = 5e-9;
    assert!(run_scenario(&s).is_ok());
}

#[test]
fn axial_scan_is_periodic() {
    let mut s = builtin_scenario("fig4").unwrap();
    let period = s.scan.stop;
    s.scan.points = 9;
    let first = run_scenario(&s).unwrap();
    s.scan.start += period;
    s.scan.stop += period;
    let second = run_scenario(&s).unwrap();
    for (a, b) in first.points.iter().zip(&second.points) {
        let (x, y) = (a.exact_ok().unwrap(), b.exact_ok().unwrap());
        assert!((x.n_cav - y.n_cav).abs() <= 1e-8 * x.n_cav);
        assert!((x.p_e - y.p_e).abs() <= 1e-8 * x.p_e.max(1e-12));
        assert!((x.g2.unwrap() - y.g2.unwrap()).abs() <= 1e-8);
        let (ga, gb) = (a.params.unwrap().params.g, b.params.unwrap().params.g);
        assert!((ga * ga - gb * gb).abs() <= 1e-8 * first.points[0].params.unwrap().params.g.powi(2));
    }
}

#[test]
fn runs_are_deterministic() {
    let mut s = builtin_scenario("fig6").unwrap();
    s.scan.points = 16;
    let a = run_scenario(&s).unwrap();
    let b = run_scenario(&s).unwrap();
    assert_eq!(a.points, b.points);
}

#[test]
fn no_nan_outside_undefined_g2() {
    let res = run_scenario(&builtin_scenario("fig3").unwrap()).unwrap();
    for p in &res.points {
        let o = p.exact_ok().unwrap();
        assert!(o.n_cav.is_finite() && o.p_e.is_finite() && o.p_out.is_finite());
        assert!(o.g2.is_none_or(f64::is_finite));
    }
}

#[test]
fn invalid_scenario_is_rejected() {
    let mut s = builtin_scenario("fig3").unwrap();
    s.fiber.core_radius = 400e-9;
    assert!(matches!(run_scenario(&s), Err(Error::MultiMode { .. })));
    let mut s = builtin_scenario("fig3").unwrap();
    s.scan.points = 0;
    assert!(run_scenario(&s).is_err());
}

#[test]
fn radial_profile_extrema_ordering() {
    let res = run_scenario(&builtin_scenario("fig2").unwrap()).unwrap();
    assert_eq!(res.failures(), 0);
    let n_min = local_minima(&res.exact_series(|o| o.n_cav));
    let pe_max = local_maxima(&res.exact_series(|o| o.p_e));
    assert_eq!(n_min.len(), 1);
    assert_eq!(pe_max.len(), 1);
    assert!(n_min[0].0 < pe_max[0].0);
}

#[test]
fn axial_profile_follows_standing_wave() {
    let mut s = builtin_scenario("fig4").unwrap();
    s.scan.points = 41;
    let res = run_scenario(&s).unwrap();
    let n: Vec<f64> = res.exact_series(|o| o.n_cav).into_iter().map(|p| p.1).collect();
    let (imin, _) = n.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let (imax, _) = n.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!(imin == 0 || imin == 40);
    assert_eq!(imax, 20);
}

#[test]
fn analytic_path_has_no_g2() {
    let mut s = builtin_scenario("fig5").unwrap();
    s.solver = SolverPath::Analytic;
    s.scan.points = 7;
    let res = run_scenario(&s).unwrap();
    assert!(res.points.iter().all(|p| p.exact.is_none()));
    assert!(res.points.iter().all(|p| p.analytic_ok().unwrap().g2.is_none()));
    assert!(res.points.iter().all(|p| p.analytic_ok().unwrap().n_max.is_none()));
}

#[test]
fn output_power_matches_photon_number() {
    let mut s = builtin_scenario("fig5").unwrap();
    s.scan.points = 5;
    let res = run_scenario(&s).unwrap();
    for p in &res.points {
        let o = p.exact_ok().unwrap();
        let pp = p.params.unwrap();
        let hbar = 1.054571817e-34;
        assert!((o.p_out / (0.5 * hbar * pp.probe_frequency * res.kappa * o.n_cav) - 1.0).abs() < 1e-12);
    }
}
