use thiserror::Error;

/// Errors raised by the model, the solvers and the sweep engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fiber is not single-mode at this frequency (V = {v:.4} >= 2.405)")]
    MultiMode { v: f64 },

    #[error("no HE11 root found between n2*k and n1*k")]
    NoGuidedMode,

    #[error("probe is outside the first-order expansion regime (|Theta - m*pi| = {phase_offset:.3} rad)")]
    ExpansionDomain { phase_offset: f64, ratio: f64 },

    #[error("atom is {distance:.3e} m from the surface, below the {cutoff:.1e} m van der Waals cutoff")]
    SurfaceCutoff { distance: f64, cutoff: f64 },

    #[error("photon-number truncation n_max = {0} is too small (need n_max >= 1)")]
    TruncationTooSmall(usize),

    #[error("steady-state linear system is singular")]
    SingularSystem,

    #[error("observables did not converge under n_max -> n_max + 2 up to n_max = {n_max}")]
    TruncationNotConverged { n_max: usize },

    #[error("time step {dt:.3e} s is unstable (dt * spectral radius = {product:.3})")]
    StepTooLarge { dt: f64, product: f64 },

    #[error("g2 undefined: mean photon number {n_cav:.3e} is below the floor")]
    G2Undefined { n_cav: f64 },

    #[error("weak-drive denominator vanishes (|D| = {0:.3e})")]
    DegenerateDenominator(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
