//! Parameter scans over atom position or probe detuning.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::analytic::weak_drive_solution;
use crate::atom_field::{coupling_g, total_decay_rate, vdw_shift, AtomPosition, AtomSpec, SURFACE_CUTOFF};
use crate::cavity::{damping_rate, nearest_even_order, pumping_rate, transmitted_power, CavitySpec, DriveSpec};
use crate::constants::mhz_to_angular;
use crate::error::{Error, Result};
use crate::fiber_modes::{solve_dispersion, FiberSpec, GuidedModeSolution};
use crate::liouvillian::SystemParams;
use crate::steady_state::{solve_steady, Truncation};

/// Quantity varied along a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    /// Distance `r - a` to the fiber surface, m.
    Radial,
    /// Axial position `z`, m.
    Axial,
    /// Cavity detuning `Delta_c = omega_p - omega_c`, rad/s.
    Detuning,
}

impl ScanAxis {
    pub fn name(&self) -> &'static str {
        match self {
            ScanAxis::Radial => "radial",
            ScanAxis::Axial => "axial",
            ScanAxis::Detuning => "detuning",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "radial" => Some(ScanAxis::Radial),
            "axial" => Some(ScanAxis::Axial),
            "detuning" => Some(ScanAxis::Detuning),
            _ => None,
        }
    }
}

/// Evenly spaced grid including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scan {
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Scan {
    pub fn coordinates(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.start + i as f64 * step).collect()
    }
}

/// Which stationary solution is evaluated at each point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    Exact,
    Analytic,
    Both,
}

impl SolverPath {
    pub fn name(&self) -> &'static str {
        match self {
            SolverPath::Exact => "exact",
            SolverPath::Analytic => "analytic",
            SolverPath::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(SolverPath::Exact),
            "analytic" => Some(SolverPath::Analytic),
            "both" => Some(SolverPath::Both),
            _ => None,
        }
    }

    pub fn exact(&self) -> bool {
        matches!(self, SolverPath::Exact | SolverPath::Both)
    }

    pub fn analytic(&self) -> bool {
        matches!(self, SolverPath::Analytic | SolverPath::Both)
    }
}

/// Cavity as configured; frequency and order are resolved against the mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    pub power_reflectivity: f64,
    pub reflection_phase: f64,
    pub length: f64,
    /// `None` selects the even order closest to `beta_c L / pi`.
    pub resonance_order: Option<i64>,
    /// `omega_c - omega_0`, rad/s.
    pub resonance_offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig {
    /// `P_in`, W.
    pub input_power: f64,
    /// `Delta_c`, rad/s; replaced by the scan coordinate on detuning scans.
    pub detuning_cavity: f64,
}

/// Atom position held fixed along the scan, except for the scanned coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionConfig {
    /// `r - a`, m.
    pub surface_distance: f64,
    /// `z`, m.
    pub axial: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub fiber: FiberSpec,
    pub cavity: CavityConfig,
    pub atom: AtomSpec,
    pub drive: DriveConfig,
    pub position: PositionConfig,
    pub scan: Scan,
    pub solver: SolverPath,
}

impl Scenario {
    /// Checks the scan grid and the drive; physical parameters are checked
    /// when the setup is resolved.
    pub fn validate(&self) -> Result<()> {
        let scan = &self.scan;
        if !(scan.start.is_finite() && scan.stop.is_finite() && scan.start < scan.stop) {
            return Err(Error::InvalidParameter(format!(
                "scan needs start < stop, got [{}, {}]",
                scan.start, scan.stop
            )));
        }
        if scan.points < 2 {
            return Err(Error::InvalidParameter(format!("scan needs at least 2 points, got {}", scan.points)));
        }
        if scan.axis == ScanAxis::Radial && scan.start < SURFACE_CUTOFF * (1.0 - 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "radial scan starts {} nm from the surface, inside the {} nm cutoff",
                scan.start * 1e9,
                SURFACE_CUTOFF * 1e9
            )));
        }
        if !(self.drive.input_power >= 0.0 && self.drive.input_power.is_finite()) {
            return Err(Error::InvalidParameter(format!("input power must be >= 0, got {}", self.drive.input_power)));
        }
        Ok(())
    }
}

/// Quantities fixed for a whole scenario once the modes are solved.
#[derive(Debug, Clone)]
pub struct Setup {
    pub cavity: CavitySpec,
    /// Mode at the cavity resonance; sets `G` and `kappa`.
    pub cavity_mode: GuidedModeSolution,
    /// Mode at the atomic frequency; sets `gamma_gyd`.
    pub atom_mode: GuidedModeSolution,
    pub kappa: f64,
}

/// Master-equation input at one scan coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub params: SystemParams,
    pub probe_frequency: f64,
    pub position: AtomPosition,
    /// Surface shift of the transition frequency, rad/s.
    pub vdw_shift: f64,
}

impl Setup {
    pub fn new(s: &Scenario) -> Result<Self> {
        s.atom.validate()?;
        let omega_c = s.atom.bare_frequency + s.cavity.resonance_offset;
        let cavity_mode = solve_dispersion(s.fiber, omega_c)?;
        let atom_mode = if s.cavity.resonance_offset == 0.0 {
            cavity_mode.clone()
        } else {
            solve_dispersion(s.fiber, s.atom.bare_frequency)?
        };
        let mut cavity = CavitySpec::from_power_reflectivity(s.cavity.power_reflectivity, s.cavity.length, omega_c)?;
        cavity.reflection_phase = s.cavity.reflection_phase;
        cavity.resonance_order = s
            .cavity
            .resonance_order
            .unwrap_or_else(|| nearest_even_order(cavity_mode.propagation_constant, s.cavity.length));
        let kappa = damping_rate(&cavity, cavity_mode.group_velocity);
        Ok(Self {
            cavity,
            cavity_mode,
            atom_mode,
            kappa,
        })
    }

    pub fn point(&self, s: &Scenario, coord: f64) -> Result<PointParams> {
        let mut pos = s.position;
        let mut delta_c = s.drive.detuning_cavity;
        match s.scan.axis {
            ScanAxis::Radial => pos.surface_distance = coord,
            ScanAxis::Axial => pos.axial = coord,
            ScanAxis::Detuning => delta_c = coord,
        }
        let position = AtomPosition::new(&s.fiber, pos.surface_distance, pos.axial)?;
        let drive = DriveSpec {
            probe_frequency: self.cavity.resonance_frequency + delta_c,
            input_power: s.drive.input_power,
        };
        drive.validate()?;
        let vdw_shift = vdw_shift(&s.atom, &position)?;
        // omega_p - omega_0 taken from the offsets rather than by subtracting
        // two optical frequencies.
        let delta_a = delta_c + s.cavity.resonance_offset - vdw_shift;
        let params = SystemParams {
            g: coupling_g(&self.cavity_mode, &self.cavity, &s.atom, &position),
            gamma: total_decay_rate(&self.atom_mode, &s.atom, position.radial()),
            kappa: self.kappa,
            eta: pumping_rate(&self.cavity, &drive, self.cavity_mode.group_velocity),
            delta_a,
            delta_c,
        };
        Ok(PointParams {
            params,
            probe_frequency: drive.probe_frequency,
            position,
            vdw_shift,
        })
    }
}

/// Observables from one solver path at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathResult {
    pub n_cav: f64,
    pub g2: Option<f64>,
    pub p_e: f64,
    /// W.
    pub p_out: f64,
    /// Truncation used; `None` for the closed forms.
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub coord: f64,
    /// `None` when the parameters themselves could not be formed.
    pub params: Option<PointParams>,
    pub exact: Option<std::result::Result<PathResult, Error>>,
    pub analytic: Option<std::result::Result<PathResult, Error>>,
}

impl SweepPoint {
    pub fn exact_ok(&self) -> Option<&PathResult> {
        self.exact.as_ref().and_then(|r| r.as_ref().ok())
    }

    pub fn analytic_ok(&self) -> Option<&PathResult> {
        self.analytic.as_ref().and_then(|r| r.as_ref().ok())
    }

    /// First error met at this point, if any.
    pub fn error(&self) -> Option<Error> {
        [&self.exact, &self.analytic]
            .into_iter()
            .flatten()
            .find_map(|r| r.as_ref().err().cloned())
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub scenario: Scenario,
    pub cavity: CavitySpec,
    pub kappa: f64,
    pub group_velocity: f64,
    pub propagation_constant: f64,
    pub points: Vec<SweepPoint>,
    pub version: &'static str,
}

impl SweepResult {
    pub fn coords(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.coord).collect()
    }

    /// `(coord, value)` for every point where the exact path succeeded.
    pub fn exact_series(&self, f: impl Fn(&PathResult) -> f64) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.exact_ok().map(|r| (p.coord, f(r))))
            .collect()
    }

    pub fn analytic_series(&self, f: impl Fn(&PathResult) -> f64) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.analytic_ok().map(|r| (p.coord, f(r))))
            .collect()
    }

    /// Largest `|exact - analytic| / |exact|` over `N_cav` and `P_e`.
    pub fn max_relative_gap(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|p| {
                let (e, a) = (p.exact_ok()?, p.analytic_ok()?);
                let n = (e.n_cav - a.n_cav).abs() / e.n_cav.abs();
                let pe = if e.p_e.abs() > 0.0 { (e.p_e - a.p_e).abs() / e.p_e.abs() } else { 0.0 };
                Some(n.max(pe))
            })
            .reduce(f64::max)
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error().is_some() || p.params.is_none()).count()
    }
}

fn solve_point(s: &Scenario, setup: &Setup, coord: f64) -> SweepPoint {
    let pp = match setup.point(s, coord) {
        Ok(pp) => pp,
        Err(e) => {
            return SweepPoint {
                coord,
                params: None,
                exact: s.solver.exact().then(|| Err(e.clone())),
                analytic: s.solver.analytic().then_some(Err(e)),
            }
        }
    };
    let p = pp.params;
    let exact = s.solver.exact().then(|| {
        solve_steady(&p, Truncation::Adaptive).map(|ss| PathResult {
            n_cav: ss.observables.n_cav,
            g2: ss.observables.g2,
            p_e: ss.observables.p_e,
            p_out: transmitted_power(p.kappa, pp.probe_frequency, ss.observables.n_cav),
            n_max: Some(ss.n_max),
        })
    });
    let analytic = s.solver.analytic().then(|| {
        weak_drive_solution(&p).map(|w| PathResult {
            n_cav: w.n_cav,
            g2: None,
            p_e: w.p_e,
            p_out: transmitted_power(p.kappa, pp.probe_frequency, w.n_cav),
            n_max: None,
        })
    });
    SweepPoint {
        coord,
        params: Some(pp),
        exact,
        analytic,
    }
}

/// Runs every point of the scan; points are solved in parallel and returned
/// in scan order. Failures at individual points are recorded, not raised.
pub fn run_scenario(s: &Scenario) -> Result<SweepResult> {
    s.validate()?;
    let setup = Setup::new(s)?;
    let points = s
        .scan
        .coordinates()
        .into_par_iter()
        .map(|c| solve_point(s, &setup, c))
        .collect();
    Ok(SweepResult {
        scenario: s.clone(),
        cavity: setup.cavity,
        kappa: setup.kappa,
        group_velocity: setup.cavity_mode.group_velocity,
        propagation_constant: setup.cavity_mode.propagation_constant,
        points,
        version: env!("CARGO_PKG_VERSION"),
    })
}

/// Interior local maxima of a sampled curve, refined by a parabola through
/// each maximum and its neighbours.
pub fn local_maxima(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for w in series.windows(3) {
        let [(x0, y0), (x1, y1), (x2, y2)] = [w[0], w[1], w[2]];
        if y1 > y0 && y1 >= y2 {
            let denom = y0 - 2.0 * y1 + y2;
            let h = 0.5 * (x2 - x0);
            if denom < 0.0 {
                let t = 0.5 * (y0 - y2) / denom;
                out.push((x1 + t * h, y1 - 0.25 * (y0 - y2) * t));
            } else {
                out.push((x1, y1));
            }
        }
    }
    out
}

/// Interior local minima; see [`local_maxima`].
pub fn local_minima(series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let flipped: Vec<_> = series.iter().map(|&(x, y)| (x, -y)).collect();
    local_maxima(&flipped).into_iter().map(|(x, y)| (x, -y)).collect()
}

const DEFAULT_POINTS: usize = 200;

/// Fiber, cavity, atom and drive shared by the predefined scenarios:
/// Cs D2 at a 200 nm silica nanofiber, `|R|^2 = 0.9`, `L = 10 cm`, all three
/// frequencies equal, atom at an antinode 200 nm from the surface.
pub fn base_scenario(name: &str) -> Scenario {
    Scenario {
        name: name.to_string(),
        fiber: FiberSpec::silica_nanofiber(200e-9),
        cavity: CavityConfig {
            power_reflectivity: 0.9,
            reflection_phase: 0.0,
            length: 0.1,
            resonance_order: None,
            resonance_offset: 0.0,
        },
        atom: AtomSpec::cesium_d2(),
        drive: DriveConfig {
            input_power: 10e-12,
            detuning_cavity: 0.0,
        },
        position: PositionConfig {
            surface_distance: 200e-9,
            axial: 0.0,
        },
        scan: radial_scan(),
        solver: SolverPath::Exact,
    }
}

fn radial_scan() -> Scan {
    Scan {
        axis: ScanAxis::Radial,
        start: 5e-9,
        stop: 600e-9,
        points: DEFAULT_POINTS,
    }
}

fn detuning_scan() -> Scan {
    let edge = mhz_to_angular(60.0);
    Scan {
        axis: ScanAxis::Detuning,
        start: -edge,
        stop: edge,
        points: DEFAULT_POINTS,
    }
}

/// One period `pi / beta_c` of the standing-wave intensity.
fn axial_scan(base: &Scenario) -> Scan {
    let omega_c = base.atom.bare_frequency + base.cavity.resonance_offset;
    let beta = solve_dispersion(base.fiber, omega_c)
        .expect("predefined fiber supports a single guided mode")
        .propagation_constant;
    Scan {
        axis: ScanAxis::Axial,
        start: 0.0,
        stop: PI / beta,
        points: DEFAULT_POINTS,
    }
}

/// Names accepted by [`builtin_scenario`] in listing order.
pub const SCENARIO_NAMES: [&str; 9] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

/// Predefined scenario by name. `fig2a`/`fig2b` select the 1 pW and 5 pW
/// variants of `fig2` (which is the 1 pW one).
pub fn builtin_scenario(name: &str) -> Option<Scenario> {
    let mut s = base_scenario(name);
    let short_cavity = 1e-3;
    let detuned = mhz_to_angular(30.0);
    match name {
        "fig2" | "fig2a" | "fig2b" => {
            s.drive.input_power = if name == "fig2b" { 5e-12 } else { 1e-12 };
            s.solver = SolverPath::Both;
        }
        "fig3" => {}
        "fig4" => s.scan = axial_scan(&s),
        "fig5" => s.scan = detuning_scan(),
        "fig6" => s.drive.detuning_cavity = detuned,
        "fig7" => {
            s.drive.detuning_cavity = detuned;
            s.scan = axial_scan(&s);
        }
        "fig8" => s.cavity.length = short_cavity,
        "fig9" => {
            s.cavity.length = short_cavity;
            s.scan = axial_scan(&s);
        }
        "fig10" => {
            s.cavity.length = short_cavity;
            s.scan = detuning_scan();
        }
        _ => return None,
    }
    Some(s)
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    SCENARIO_NAMES
        .iter()
        .map(|n| builtin_scenario(n).expect("listed scenario exists"))
        .collect()
}
