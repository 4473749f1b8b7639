//! Master-equation generator on the truncated space `{g, e} x {|0>..|n_max>}`.
//!
//! In the frame rotating at the probe frequency (hbar = 1)
//!
//! ```text
//! H = -(Da/2) sz - Dc a+a - iG (a s+ - a+ s) - i eta (a - a+)
//! drho/dt = -i[H, rho] + gamma D[s] rho + kappa D[a] rho
//! ```
//!
//! with `D[c] rho = c rho c+ - (c+c rho + rho c+c)/2`. The basis index of
//! `|alpha, n>` is `alpha (n_max + 1) + n` with `g = 0`, `e = 1`, and `a+`
//! annihilates `|n_max>`.
//!
//! The generator is available in two independent forms: [`Liouvillian::apply`]
//! acts with operator products on a density matrix, and
//! [`Liouvillian::matrix`] assembles the `D^2 x D^2` superoperator from
//! Kronecker products for the column-stacked `vec(rho)`, using
//! `vec(A rho B) = (B^T (x) A) vec(rho)`.

use faer::Mat;

use crate::error::{Error, Result};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Rates and detunings of the master equation, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub g: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub eta: f64,
    /// `Delta_a = omega_p - omega_a`.
    pub delta_a: f64,
    /// `Delta_c = omega_p - omega_c`.
    pub delta_c: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.g, self.gamma, self.kappa, self.eta, self.delta_a, self.delta_c];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite master-equation parameter in {self:?}")));
        }
        if self.gamma < 0.0 || self.kappa < 0.0 {
            return Err(Error::InvalidParameter("decay rates must be >= 0".into()));
        }
        Ok(())
    }

    /// All parameters divided by `unit`, e.g. to express them in units of `gamma_0`.
    pub fn scaled(&self, unit: f64) -> Self {
        Self {
            g: self.g / unit,
            gamma: self.gamma / unit,
            kappa: self.kappa / unit,
            eta: self.eta / unit,
            delta_a: self.delta_a / unit,
            delta_c: self.delta_c / unit,
        }
    }

    /// `Delta = omega_c - omega_a = Delta_a - Delta_c`.
    pub fn atom_cavity_detuning(&self) -> f64 {
        self.delta_a - self.delta_c
    }

    /// Largest rate or frequency in the problem.
    pub fn max_rate(&self) -> f64 {
        [self.g, self.gamma, self.kappa, self.eta, self.delta_a, self.delta_c]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Dimension bookkeeping for the truncated product basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    pub n_max: usize,
}

impl Basis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::TruncationTooSmall(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Hilbert-space dimension `D = 2 (n_max + 1)`.
    pub fn dim(&self) -> usize {
        2 * self.fock_dim()
    }

    /// Index of `|alpha, n>` with `excited = (alpha == e)`.
    pub fn index(&self, excited: bool, n: usize) -> usize {
        usize::from(excited) * self.fock_dim() + n
    }

    /// Cavity annihilation operator `a`, truncated at `n_max`.
    pub fn annihilation(&self) -> SparseOp {
        let mut op = SparseOp::zeros(self.dim());
        for excited in [false, true] {
            for n in 1..=self.n_max {
                op.push(self.index(excited, n - 1), self.index(excited, n), C64::new((n as f64).sqrt(), 0.0));
            }
        }
        op
    }

    /// Atomic lowering operator `sigma = |g><e|`.
    pub fn lowering(&self) -> SparseOp {
        let mut op = SparseOp::zeros(self.dim());
        for n in 0..=self.n_max {
            op.push(self.index(false, n), self.index(true, n), C64::new(1.0, 0.0));
        }
        op
    }

    /// `sigma_z = |e><e| - |g><g|`.
    pub fn sigma_z(&self) -> SparseOp {
        let mut op = SparseOp::zeros(self.dim());
        for n in 0..=self.n_max {
            op.push(self.index(false, n), self.index(false, n), C64::new(-1.0, 0.0));
            op.push(self.index(true, n), self.index(true, n), C64::new(1.0, 0.0));
        }
        op
    }

    pub fn identity(&self) -> SparseOp {
        let mut op = SparseOp::zeros(self.dim());
        for i in 0..self.dim() {
            op.push(i, i, C64::new(1.0, 0.0));
        }
        op
    }
}

/// Operator stored as `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, value: C64) {
        self.entries.push((row, col, value));
    }

    pub fn from_dense(dim: usize, dense: &[C64]) -> Self {
        let mut op = Self::zeros(dim);
        for (k, &v) in dense.iter().enumerate() {
            if v != C64::new(0.0, 0.0) {
                op.push(k / dim, k % dim, v);
            }
        }
        op
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim * self.dim];
        for &(i, j, v) in &self.entries {
            out[i * self.dim + j] += v;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v.conj())).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (i, j, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut dense = self.to_dense();
        for &(i, j, v) in &other.entries {
            dense[i * self.dim + j] += v;
        }
        Self::from_dense(self.dim, &dense)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim;
        let rhs = other.to_dense();
        let mut dense = vec![C64::new(0.0, 0.0); d * d];
        for &(i, k, v) in &self.entries {
            for j in 0..d {
                dense[i * d + j] += v * rhs[k * d + j];
            }
        }
        Self::from_dense(d, &dense)
    }

    /// Largest absolute row or column sum; bounds both `||A||_1` and `||A||_inf`.
    pub fn norm_bound(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        let mut cols = vec![0.0; self.dim];
        for &(i, j, v) in &self.entries {
            rows[i] += v.norm();
            cols[j] += v.norm();
        }
        rows.iter().chain(&cols).fold(0.0f64, |m, &v| m.max(v))
    }

    /// `out += c * (self rho)`.
    pub fn left_into(&self, rho: &DensityMatrix, c: C64, out: &mut DensityMatrix) {
        let d = self.dim;
        for &(i, k, v) in &self.entries {
            let f = c * v;
            for j in 0..d {
                out.data[i * d + j] += f * rho.data[k * d + j];
            }
        }
    }

    /// `out += c * (rho self)`.
    pub fn right_into(&self, rho: &DensityMatrix, c: C64, out: &mut DensityMatrix) {
        let d = self.dim;
        for &(l, j, v) in &self.entries {
            let f = c * v;
            for i in 0..d {
                out.data[i * d + j] += f * rho.data[i * d + l];
            }
        }
    }
}

/// Density matrix, row-major: `data[i * D + j] = rho_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub n_max: usize,
    pub data: Vec<C64>,
}

impl DensityMatrix {
    pub fn zeros(basis: Basis) -> Self {
        let d = basis.dim();
        Self {
            n_max: basis.n_max,
            data: vec![C64::new(0.0, 0.0); d * d],
        }
    }

    /// Pure state `|alpha, n><alpha, n|`.
    pub fn basis_state(basis: Basis, excited: bool, n: usize) -> Self {
        let mut rho = Self::zeros(basis);
        let i = basis.index(excited, n);
        rho.data[i * basis.dim() + i] = C64::new(1.0, 0.0);
        rho
    }

    pub fn basis(&self) -> Basis {
        Basis { n_max: self.n_max }
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.data[i * d + j] = self.data[j * d + i].conj();
            }
        }
        out
    }

    /// `max |rho - rho^+|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Replaces `rho` by `(rho + rho^+) / 2`.
    pub fn hermitize(&mut self) {
        let adj = self.adjoint();
        for (x, y) in self.data.iter_mut().zip(adj.data) {
            *x = 0.5 * (*x + y);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// `Tr(O rho)`.
    pub fn expectation(&self, op: &SparseOp) -> C64 {
        let d = self.dim();
        op.entries.iter().map(|&(i, j, v)| v * self.data[j * d + i]).sum()
    }

    /// Column-stacked `vec(rho)`: entry `i + D j` is `rho_ij`.
    pub fn to_vec(&self) -> Vec<C64> {
        let d = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[i + d * j] = self.data[i * d + j];
            }
        }
        out
    }

    pub fn from_vec(basis: Basis, v: &[C64]) -> Self {
        let d = basis.dim();
        let mut rho = Self::zeros(basis);
        for i in 0..d {
            for j in 0..d {
                rho.data[i * d + j] = v[i + d * j];
            }
        }
        rho
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Self {
        Self {
            n_max: self.n_max,
            data: self.data.iter().zip(&other.data).map(|(x, y)| x + c * y).collect(),
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = Mat::<C64>::from_fn(d, d, |i, j| 0.5 * (self.data[i * d + j] + self.data[j * d + i].conj()));
        m.as_ref()
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("Hermitian eigendecomposition")
    }
}

struct Jump {
    rate: f64,
    op: SparseOp,
    op_dag: SparseOp,
    number: SparseOp,
}

/// Generator `L` of the master equation for fixed parameters and truncation.
pub struct Liouvillian {
    pub params: SystemParams,
    pub basis: Basis,
    hamiltonian: SparseOp,
    jumps: Vec<Jump>,
}

impl Liouvillian {
    pub fn new(params: &SystemParams, n_max: usize) -> Result<Self> {
        params.validate()?;
        let basis = Basis::new(n_max)?;
        let a = basis.annihilation();
        let sigma = basis.lowering();
        let a_dag = a.adjoint();
        let sigma_dag = sigma.adjoint();

        let p = params;
        let hamiltonian = basis
            .sigma_z()
            .scale(C64::new(-0.5 * p.delta_a, 0.0))
            .add(&a_dag.mul(&a).scale(C64::new(-p.delta_c, 0.0)))
            .add(&a.mul(&sigma_dag).scale(-I * p.g))
            .add(&a_dag.mul(&sigma).scale(I * p.g))
            .add(&a.scale(-I * p.eta))
            .add(&a_dag.scale(I * p.eta));

        let jumps = [(p.gamma, sigma), (p.kappa, a)]
            .into_iter()
            .map(|(rate, op)| {
                let op_dag = op.adjoint();
                let number = op_dag.mul(&op);
                Jump { rate, op, op_dag, number }
            })
            .collect();

        Ok(Self {
            params: *params,
            basis,
            hamiltonian,
            jumps,
        })
    }

    pub fn hamiltonian(&self) -> &SparseOp {
        &self.hamiltonian
    }

    /// `L rho` by operator products.
    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let mut out = DensityMatrix::zeros(self.basis);
        self.hamiltonian.left_into(rho, -I, &mut out);
        self.hamiltonian.right_into(rho, I, &mut out);
        for jump in &self.jumps {
            let mut c_rho = DensityMatrix::zeros(self.basis);
            jump.op.left_into(rho, C64::new(1.0, 0.0), &mut c_rho);
            jump.op_dag.right_into(&c_rho, C64::new(jump.rate, 0.0), &mut out);
            jump.number.left_into(rho, C64::new(-0.5 * jump.rate, 0.0), &mut out);
            jump.number.right_into(rho, C64::new(-0.5 * jump.rate, 0.0), &mut out);
        }
        out
    }

    /// Superoperator matrix acting on the column-stacked `vec(rho)`.
    pub fn matrix(&self) -> Mat<C64> {
        let d = self.basis.dim();
        let mut m = Mat::<C64>::zeros(d * d, d * d);
        // A rho: (I (x) A)[i + D j, k + D j] = A_ik
        let left = |op: &SparseOp, c: C64, m: &mut Mat<C64>| {
            for &(i, k, v) in &op.entries {
                for j in 0..d {
                    m[(i + d * j, k + d * j)] += c * v;
                }
            }
        };
        left(&self.hamiltonian, -I, &mut m);
        for jump in &self.jumps {
            left(&jump.number, C64::new(-0.5 * jump.rate, 0.0), &mut m);
        }
        // rho B: (B^T (x) I)[i + D j, i + D l] = B_lj
        let right = |op: &SparseOp, c: C64, m: &mut Mat<C64>| {
            for &(l, j, v) in &op.entries {
                for i in 0..d {
                    m[(i + d * j, i + d * l)] += c * v;
                }
            }
        };
        right(&self.hamiltonian, I, &mut m);
        for jump in &self.jumps {
            right(&jump.number, C64::new(-0.5 * jump.rate, 0.0), &mut m);
            // c rho c+: (conj(c) (x) c)[i + D j, k + D l] = c_ik (c+)_lj
            for &(i, k, v) in &jump.op.entries {
                for &(l, j, w) in &jump.op_dag.entries {
                    m[(i + d * j, k + d * l)] += jump.rate * v * w;
                }
            }
        }
        m
    }

    /// Upper bound on the spectral radius of `L`.
    pub fn norm_bound(&self) -> f64 {
        let mut bound = 2.0 * self.hamiltonian.norm_bound();
        for jump in &self.jumps {
            bound += jump.rate * (jump.op.norm_bound() * jump.op_dag.norm_bound() + jump.number.norm_bound());
        }
        bound
    }
}

/// `L rho` for the given parameters, operator form.
pub fn apply_rhs(params: &SystemParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(Liouvillian::new(params, rho.n_max)?.apply(rho))
}

/// `D^2 x D^2` superoperator, Kronecker form.
pub fn build_matrix(params: &SystemParams, n_max: usize) -> Result<Mat<C64>> {
    Ok(Liouvillian::new(params, n_max)?.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SystemParams {
        SystemParams { g: 1.3, gamma: 0.7, kappa: 2.1, eta: 0.4, delta_a: -0.3, delta_c: 0.5 }
    }

    #[test]
    fn rejects_tiny_truncation() {
        assert_eq!(Liouvillian::new(&params(), 0).err(), Some(Error::TruncationTooSmall(0)));
    }

    #[test]
    fn operator_algebra() {
        let b = Basis::new(4).unwrap();
        let a = b.annihilation();
        let comm = a.mul(&a.adjoint()).add(&a.adjoint().mul(&a).scale(C64::new(-1.0, 0.0)));
        let dense = comm.to_dense();
        for excited in [false, true] {
            for n in 0..b.n_max {
                let i = b.index(excited, n);
                assert!((dense[i * b.dim() + i] - 1.0).norm() < 1e-14);
            }
            let i = b.index(excited, b.n_max);
            assert!((dense[i * b.dim() + i] + b.n_max as f64).norm() < 1e-14);
        }
        let s = b.lowering();
        assert!(s.mul(&s).entries.is_empty());
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let l = Liouvillian::new(&params(), 5).unwrap();
        let h = l.hamiltonian().to_dense();
        let d = l.basis.dim();
        for i in 0..d {
            for j in 0..d {
                assert!((h[i * d + j] - h[j * d + i].conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn vec_roundtrip() {
        let b = Basis::new(2).unwrap();
        let mut rho = DensityMatrix::zeros(b);
        for (k, x) in rho.data.iter_mut().enumerate() {
            *x = C64::new(k as f64, -(k as f64) * 0.5);
        }
        assert_eq!(DensityMatrix::from_vec(b, &rho.to_vec()), rho);
        assert_eq!(rho.to_vec()[1], rho.get(1, 0));
    }

    #[test]
    fn vacuum_decays_to_nothing_without_drive() {
        let p = SystemParams { eta: 0.0, ..params() };
        let l = Liouvillian::new(&p, 3).unwrap();
        let rho = DensityMatrix::basis_state(l.basis, false, 0);
        assert!(l.apply(&rho).max_abs() < 1e-15);
    }
}
