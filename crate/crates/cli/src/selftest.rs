//! Quick invariant checks run by `fbgsim selftest`.

use fbg_cqed::analytic::{moment_derivatives, Moments};
use fbg_cqed::fiber_modes::solve_dispersion;
use fbg_cqed::liouvillian::{Basis, DensityMatrix, Liouvillian, SystemParams};
use fbg_cqed::steady_state::{ground_state, min_eigenvalue, propagate, solve_steady, Truncation};
use fbg_cqed::sweep::{builtin_scenario, run_scenario, Setup};
use fbg_cqed::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        pass: value <= limit,
        detail: format!("{value:.3e} (limit {limit:.0e})"),
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams {
        g: rng.random_range(-3.0..3.0),
        gamma: rng.random_range(0.1..3.0),
        kappa: rng.random_range(0.1..5.0),
        eta: rng.random_range(-1.0..1.0),
        delta_a: rng.random_range(-4.0..4.0),
        delta_c: rng.random_range(-4.0..4.0),
    }
}

/// Normalized positive state with photon numbers up to `n_support`.
fn random_density(rng: &mut ChaCha8Rng, n_max: usize, n_support: usize) -> DensityMatrix {
    let basis = Basis::new(n_max).expect("n_max >= 1");
    let d = basis.dim();
    let mut a = vec![C64::new(0.0, 0.0); d * d];
    for excited in [false, true] {
        for n in 0..=n_support {
            let i = basis.index(excited, n);
            for k in 0..d {
                a[i * d + k] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
    }
    let mut rho = DensityMatrix::zeros(basis);
    for i in 0..d {
        for j in 0..d {
            rho.data[i * d + j] = (0..d).map(|k| a[i * d + k] * a[j * d + k].conj()).sum();
        }
    }
    let tr = rho.trace().re;
    rho.data.iter_mut().for_each(|z| *z /= tr);
    rho
}

fn mode_normalization() -> Check {
    let s = builtin_scenario("fig3").expect("predefined");
    match solve_dispersion(s.fiber, s.atom.bare_frequency) {
        Ok(m) => check("guided mode normalization", (m.normalization_integral() - 1.0).abs(), 1e-10),
        Err(e) => Check {
            name: "guided mode normalization",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn generator_forms(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_params(rng);
        let l = Liouvillian::new(&p, 3).expect("valid parameters");
        let rho = random_density(rng, 3, 3);
        let op = l.apply(&rho).to_vec();
        let m = l.matrix();
        let v = rho.to_vec();
        for (i, want) in op.iter().enumerate() {
            let got: C64 = (0..v.len()).map(|k| m[(i, k)] * v[k]).sum();
            worst = worst.max((got - want).norm() / l.norm_bound());
        }
    }
    check("operator and Kronecker generators agree", worst, 1e-12)
}

fn trace_preservation(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_params(rng);
        let l = Liouvillian::new(&p, 4).expect("valid parameters");
        worst = worst.max(l.apply(&random_density(rng, 4, 4)).trace().norm() / l.norm_bound());
    }
    check("generator is trace free", worst, 1e-13)
}

fn moment_equations(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_params(rng);
        let l = Liouvillian::new(&p, 6).expect("valid parameters");
        let rho = random_density(rng, 6, 3);
        let direct = Moments::from_density(&l.apply(&rho));
        let eqs = moment_derivatives(&p, &Moments::from_density(&rho));
        let diffs = [
            direct.a - eqs.a,
            direct.sigma - eqs.sigma,
            direct.n - eqs.n,
            direct.pe - eqs.pe,
            direct.cross_sym - eqs.cross_sym,
            direct.cross_asym - eqs.cross_asym,
        ];
        worst = diffs.iter().fold(worst, |m, z| m.max(z.norm() / l.norm_bound()));
    }
    check("moment equations match the master equation", worst, 1e-12)
}

fn physical_steady_states() -> Check {
    let name = "steady states are density matrices";
    let s = builtin_scenario("fig3").expect("predefined");
    let setup = match Setup::new(&s) {
        Ok(x) => x,
        Err(e) => return Check { name, pass: false, detail: e.to_string() },
    };
    let mut worst = 0.0f64;
    for coord in [5e-9, 50e-9, 200e-9, 600e-9] {
        let res = setup.point(&s, coord).and_then(|pp| solve_steady(&pp.params, Truncation::Adaptive));
        match res {
            Ok(ss) => {
                let defect = (ss.rho.trace().re - 1.0)
                    .abs()
                    .max(ss.rho.hermiticity_defect())
                    .max(-min_eigenvalue(&ss.rho))
                    .max(ss.residual * 1e-2);
                worst = worst.max(defect);
            }
            Err(e) => return Check { name, pass: false, detail: e.to_string() },
        }
    }
    check(name, worst, 1e-10)
}

fn empty_cavity() -> Check {
    let name = "uncoupled atom leaves the empty-cavity response";
    let s = builtin_scenario("fig6").expect("predefined");
    let pp = match Setup::new(&s).and_then(|setup| setup.point(&s, 200e-9)) {
        Ok(pp) => pp,
        Err(e) => return Check { name, pass: false, detail: e.to_string() },
    };
    let p = SystemParams { g: 0.0, ..pp.params };
    let want = p.eta * p.eta / (0.25 * p.kappa * p.kappa + p.delta_c * p.delta_c);
    match solve_steady(&p, Truncation::Adaptive) {
        Ok(ss) => check(name, (ss.observables.n_cav / want - 1.0).abs(), 1e-6),
        Err(e) => Check { name, pass: false, detail: e.to_string() },
    }
}

fn propagation(rng: &mut ChaCha8Rng) -> Check {
    let name = "time evolution relaxes to the steady state";
    let mut p = random_params(rng);
    p.eta *= 0.5;
    let n_max = 8;
    let rate = p.kappa.min(p.gamma);
    let run = || -> fbg_cqed::Result<f64> {
        let target = solve_steady(&p, Truncation::Fixed(n_max))?;
        let rho = propagate(&p, &ground_state(n_max)?, 40.0 / rate, None)?;
        Ok(rho.axpy(-1.0, &target.rho).max_abs())
    };
    match run() {
        Ok(gap) => check(name, gap, 1e-6),
        Err(e) => Check { name, pass: false, detail: e.to_string() },
    }
}

fn weak_drive_limit() -> Check {
    let name = "exact and weak-drive paths meet at low power";
    let mut s = builtin_scenario("fig2").expect("predefined");
    s.drive.input_power = 1e-15;
    s.scan.points = 12;
    match run_scenario(&s) {
        Ok(res) => check(name, res.max_relative_gap().unwrap_or(f64::INFINITY), 1e-2),
        Err(e) => Check { name, pass: false, detail: e.to_string() },
    }
}

pub fn run() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    vec![
        mode_normalization(),
        generator_forms(&mut rng),
        trace_preservation(&mut rng),
        moment_equations(&mut rng),
        physical_steady_states(),
        empty_cavity(),
        propagation(&mut rng),
        weak_drive_limit(),
    ]
}
