#![allow(dead_code)]

use fbg_cqed::liouvillian::{Basis, DensityMatrix, SystemParams};
use fbg_cqed::C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random positive density matrix with photon numbers limited to `n_support`.
pub fn random_density(rng: &mut ChaCha8Rng, n_max: usize, n_support: usize) -> DensityMatrix {
    let basis = Basis::new(n_max).unwrap();
    let d = basis.dim();
    let allowed: Vec<usize> = [false, true]
        .iter()
        .flat_map(|&e| (0..=n_support.min(n_max)).map(move |n| (e, n)))
        .map(|(e, n)| basis.index(e, n))
        .collect();
    let mut a = vec![C64::new(0.0, 0.0); d * d];
    for &i in &allowed {
        for k in 0..d {
            a[i * d + k] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
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

/// Arbitrary complex matrix, not Hermitian.
pub fn random_matrix(rng: &mut ChaCha8Rng, n_max: usize) -> DensityMatrix {
    let mut rho = DensityMatrix::zeros(Basis::new(n_max).unwrap());
    for z in rho.data.iter_mut() {
        *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    rho
}

pub fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams {
        g: rng.random_range(-3.0..3.0),
        gamma: rng.random_range(0.1..3.0),
        kappa: rng.random_range(0.1..5.0),
        eta: rng.random_range(-1.0..1.0),
        delta_a: rng.random_range(-4.0..4.0),
        delta_c: rng.random_range(-4.0..4.0),
    }
}

/// Matrix-element equations of motion written out term by term in the
/// `|alpha, n>` basis. Elements beyond `n_max` are treated as zero, and the
/// `eg` block follows from the `ge` block by Hermiticity, so `rho` must be
/// Hermitian.
pub fn elementwise_rhs(p: &SystemParams, rho: &DensityMatrix) -> DensityMatrix {
    let b = rho.basis();
    let n_max = b.n_max as i64;
    let el = |ea: bool, n: i64, eb: bool, m: i64| -> C64 {
        if n < 0 || m < 0 || n > n_max || m > n_max {
            C64::new(0.0, 0.0)
        } else {
            rho.get(b.index(ea, n as usize), b.index(eb, m as usize))
        }
    };
    let sq = |x: i64| (x as f64).sqrt();
    let i = C64::new(0.0, 1.0);
    let (g, gamma, kappa, eta, da, dc) = (p.g, p.gamma, p.kappa, p.eta, p.delta_a, p.delta_c);
    let (e, gr) = (true, false);
    let mut out = DensityMatrix::zeros(b);
    let d = b.dim();
    for n in 0..=n_max {
        for m in 0..=n_max {
            let nf = n as f64;
            let mf = m as f64;
            let ee = -i * dc * (mf - nf) * el(e, n, e, m)
                - g * (sq(m + 1) * el(e, n, gr, m + 1) + sq(n + 1) * el(gr, n + 1, e, m))
                + eta * (sq(m) * el(e, n, e, m - 1) + sq(n) * el(e, n - 1, e, m)
                    - sq(m + 1) * el(e, n, e, m + 1) - sq(n + 1) * el(e, n + 1, e, m))
                - gamma * el(e, n, e, m)
                - kappa / 2.0 * ((mf + nf) * el(e, n, e, m) - 2.0 * sq((m + 1) * (n + 1)) * el(e, n + 1, e, m + 1));
            let gg = -i * dc * (mf - nf) * el(gr, n, gr, m)
                + g * (sq(m) * el(gr, n, e, m - 1) + sq(n) * el(e, n - 1, gr, m))
                + eta * (sq(m) * el(gr, n, gr, m - 1) + sq(n) * el(gr, n - 1, gr, m)
                    - sq(m + 1) * el(gr, n, gr, m + 1) - sq(n + 1) * el(gr, n + 1, gr, m))
                + gamma * el(e, n, e, m)
                - kappa / 2.0 * ((mf + nf) * el(gr, n, gr, m) - 2.0 * sq((m + 1) * (n + 1)) * el(gr, n + 1, gr, m + 1));
            let ge = -i * da * el(gr, n, e, m) - i * dc * (mf - nf) * el(gr, n, e, m)
                - g * (sq(m + 1) * el(gr, n, gr, m + 1) - sq(n) * el(e, n - 1, e, m))
                + eta * (sq(m) * el(gr, n, e, m - 1) + sq(n) * el(gr, n - 1, e, m)
                    - sq(m + 1) * el(gr, n, e, m + 1) - sq(n + 1) * el(gr, n + 1, e, m))
                - gamma / 2.0 * el(gr, n, e, m)
                - kappa / 2.0 * ((mf + nf) * el(gr, n, e, m) - 2.0 * sq((m + 1) * (n + 1)) * el(gr, n + 1, e, m + 1));
            let (un, um) = (n as usize, m as usize);
            out.data[b.index(e, un) * d + b.index(e, um)] = ee;
            out.data[b.index(gr, un) * d + b.index(gr, um)] = gg;
            out.data[b.index(gr, un) * d + b.index(e, um)] = ge;
            out.data[b.index(e, um) * d + b.index(gr, un)] = ge.conj();
        }
    }
    out
}

pub fn max_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    a.data.iter().zip(&b.data).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}
