//! CSV, JSON and plot-script writers.

use std::io::{self, Write};

use fbg_cqed::constants::angular_to_mhz;
use fbg_cqed::sweep::{PathResult, SweepPoint, SweepResult};
use serde_json::{json, Map, Value};

use crate::config::{coordinate_to_user, coordinate_unit, echo};

pub const CSV_HEADER: &str = "coord,G,gamma,delta_a,delta_c,N_cav,g2,P_e,P_out,n_max,path";

const UNITS: &str = "G, gamma, delta_a, delta_c in MHz as ordinary frequencies (angular = 2 pi x value); \
                     N_cav, g2, P_e dimensionless; P_out in W";

/// One output row: a scan point seen through one solver path.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub coord: f64,
    pub g: f64,
    pub gamma: f64,
    pub delta_a: f64,
    pub delta_c: f64,
    pub n_cav: f64,
    pub g2: Option<f64>,
    pub p_e: f64,
    pub p_out: f64,
    pub n_max: Option<usize>,
    pub path: String,
    pub error: Option<String>,
}

fn record(res: &SweepResult, p: &SweepPoint, path: &str, r: &Result<PathResult, fbg_cqed::Error>) -> Record {
    let axis = res.scenario.scan.axis;
    let sys = p.params.as_ref().map(|pp| pp.params);
    let mhz = |f: fn(&fbg_cqed::liouvillian::SystemParams) -> f64| sys.as_ref().map_or(f64::NAN, |s| angular_to_mhz(f(s)));
    let base = Record {
        coord: coordinate_to_user(axis, p.coord),
        g: mhz(|s| s.g),
        gamma: mhz(|s| s.gamma),
        delta_a: mhz(|s| s.delta_a),
        delta_c: mhz(|s| s.delta_c),
        n_cav: f64::NAN,
        g2: None,
        p_e: f64::NAN,
        p_out: f64::NAN,
        n_max: None,
        path: path.to_string(),
        error: None,
    };
    match r {
        Ok(o) => Record {
            n_cav: o.n_cav,
            g2: o.g2,
            p_e: o.p_e,
            p_out: o.p_out,
            n_max: o.n_max,
            ..base
        },
        Err(e) => Record {
            path: format!("{path}-failed"),
            error: Some(e.to_string()),
            ..base
        },
    }
}

/// Rows in scan order, exact before analytic at each point.
pub fn records(res: &SweepResult) -> Vec<Record> {
    let mut out = Vec::new();
    for p in &res.points {
        if let Some(r) = &p.exact {
            out.push(record(res, p, "exact", r));
        }
        if let Some(r) = &p.analytic {
            out.push(record(res, p, "analytic", r));
        }
    }
    out
}

/// Derived quantities fixed for the whole run.
pub fn resolved(res: &SweepResult) -> Vec<(&'static str, String)> {
    vec![
        ("cavity.resonance_order", res.cavity.resonance_order.to_string()),
        ("cavity.finesse", format!("{:.16e}", res.cavity.finesse())),
        ("cavity.resonance_frequency_MHz", format!("{:.16e}", angular_to_mhz(res.cavity.resonance_frequency))),
        ("kappa_MHz", format!("{:.16e}", angular_to_mhz(res.kappa))),
        ("group_velocity_m_s", format!("{:.16e}", res.group_velocity)),
        ("propagation_constant_per_m", format!("{:.16e}", res.propagation_constant)),
    ]
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_csv(w: &mut impl Write, res: &SweepResult, generated_unix_s: u64) -> io::Result<()> {
    let axis = res.scenario.scan.axis;
    writeln!(w, "# fbgsim {}", res.version)?;
    writeln!(w, "# generated_unix_s={generated_unix_s}")?;
    writeln!(w, "# units: coord in {} along the {} axis; {UNITS}", coordinate_unit(axis), axis.name())?;
    writeln!(
        w,
        "# rows: one per scan point and solver path; a path ending in -failed marks a failed solve, g2 is nan where undefined"
    )?;
    for (k, v) in echo(&res.scenario) {
        writeln!(w, "# config {k}={v}")?;
    }
    for (k, v) in resolved(res) {
        writeln!(w, "# resolved {k}={v}")?;
    }
    let rows = records(res);
    for r in rows.iter().filter(|r| r.error.is_some()) {
        writeln!(w, "# failed coord={} path={}: {}", num(r.coord), r.path, r.error.as_deref().unwrap_or(""))?;
    }
    writeln!(w, "{CSV_HEADER}")?;
    for r in &rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            num(r.coord),
            num(r.g),
            num(r.gamma),
            num(r.delta_a),
            num(r.delta_c),
            num(r.n_cav),
            num(r.g2.unwrap_or(f64::NAN)),
            num(r.p_e),
            num(r.p_out),
            r.n_max.map_or_else(String::new, |n| n.to_string()),
            r.path
        )?;
    }
    Ok(())
}

pub fn to_json(res: &SweepResult, generated_unix_s: u64) -> Value {
    let axis = res.scenario.scan.axis;
    let config: Map<String, Value> = echo(&res.scenario)
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    let derived: Map<String, Value> = resolved(res)
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    let rows: Vec<Value> = records(res)
        .into_iter()
        .map(|r| {
            json!({
                "coord": r.coord,
                "G": r.g,
                "gamma": r.gamma,
                "delta_a": r.delta_a,
                "delta_c": r.delta_c,
                "N_cav": r.n_cav,
                "g2": r.g2,
                "P_e": r.p_e,
                "P_out": r.p_out,
                "n_max": r.n_max,
                "path": r.path,
                "error": r.error,
            })
        })
        .collect();
    json!({
        "generator": format!("fbgsim {}", res.version),
        "generated_unix_s": generated_unix_s,
        "units": {
            "coord": coordinate_unit(axis),
            "frequencies": "MHz, ordinary frequency",
            "P_out": "W",
        },
        "config": config,
        "resolved": derived,
        "records": rows,
    })
}

pub fn write_json(w: &mut impl Write, res: &SweepResult, generated_unix_s: u64) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, &to_json(res, generated_unix_s))?;
    writeln!(w)
}

/// Gnuplot script drawing photon number, excitation and g2 against the scan
/// coordinate from `csv_name`.
pub fn plot_script(res: &SweepResult, csv_name: &str) -> String {
    let axis = res.scenario.scan.axis;
    let xlabel = format!("{} ({})", axis.name(), coordinate_unit(axis));
    let panel = |col: usize, label: &str| {
        let mut lines = vec![format!(
            "'{csv_name}' using 1:(strcol(11) eq 'exact' ? ${col} : NaN) with lines title '{label} exact'"
        )];
        if res.scenario.solver.analytic() && col != 7 {
            lines.push(format!(
                "'{csv_name}' using 1:(strcol(11) eq 'analytic' ? ${col} : NaN) with lines dashtype 2 title '{label} weak drive'"
            ));
        }
        format!("set ylabel '{label}'\nplot {}\n", lines.join(", \\\n     "))
    };
    let mut s = String::new();
    s.push_str(&format!("# {}: {}\n", res.scenario.name, xlabel));
    s.push_str("set datafile separator ','\nset datafile commentschars '#'\n");
    s.push_str("set datafile missing 'nan'\nset key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{xlabel}'\nset multiplot layout 3,1\n"));
    s.push_str(&panel(6, "N_cav"));
    s.push_str(&panel(8, "P_e"));
    s.push_str(&panel(7, "g2"));
    s.push_str("unset multiplot\n");
    s
}
