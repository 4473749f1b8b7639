//! `key=value` run configuration.
//!
//! A configuration either names a predefined scenario to start from
//! (`scenario=fig3`) and overrides some of its keys, or sets every required
//! key itself. User-facing frequencies are ordinary frequencies in MHz.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use fbg_cqed::constants::{angular_to_mhz, c3_khz_um3_to_si, c3_si_to_khz_um3, mhz_to_angular, wavelength_to_angular, C};
use fbg_cqed::sweep::{base_scenario, builtin_scenario, ScanAxis, Scenario, SolverPath};

/// Where an entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    Set(usize),
    End,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Set(n) => write!(f, "--set #{n}"),
            Location::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{at}: expected `key=value`, got `{text}`")]
    Syntax { at: Location, text: String },
    #[error("{at}: unknown key `{key}`")]
    UnknownKey { at: Location, key: String },
    #[error("{at}: missing required key `{key}`")]
    MissingKey { at: Location, key: String },
    #[error("{at}: `{key}` takes a bare number in {unit}, got `{value}`")]
    UnitViolation {
        at: Location,
        key: String,
        unit: &'static str,
        value: String,
    },
    #[error("{at}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        at: Location,
        key: String,
        value: String,
        reason: String,
    },
    #[error("{at}: unknown scenario `{name}`")]
    UnknownScenario { at: Location, name: String },
    #[error("{at}: {message}")]
    Inconsistent { at: Location, message: String },
}

impl ConfigError {
    pub fn location(&self) -> Location {
        match self {
            ConfigError::Syntax { at, .. }
            | ConfigError::UnknownKey { at, .. }
            | ConfigError::MissingKey { at, .. }
            | ConfigError::UnitViolation { at, .. }
            | ConfigError::InvalidValue { at, .. }
            | ConfigError::UnknownScenario { at, .. }
            | ConfigError::Inconsistent { at, .. } => *at,
        }
    }
}

pub type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub at: Location,
}

/// Selects the starting scenario; not part of the echoed configuration.
pub const SCENARIO_KEY: &str = "scenario";

/// Every settable key in echo order, with whether it must be given when no
/// base scenario is selected.
pub const KEYS: [(&str, bool); 21] = [
    ("name", false),
    ("fiber.radius_nm", true),
    ("fiber.core_index", true),
    ("fiber.clad_index", true),
    ("cavity.power_reflectivity", true),
    ("cavity.reflection_phase_rad", false),
    ("cavity.length_m", true),
    ("cavity.resonance_order", false),
    ("cavity.detuning_from_atom_MHz", true),
    ("atom.wavelength_nm", true),
    ("atom.linewidth_MHz", true),
    ("atom.C3g_kHz_um3", true),
    ("atom.C3e_kHz_um3", true),
    ("drive.input_power_pW", true),
    ("drive.detuning_MHz", true),
    ("position.surface_distance_nm", true),
    ("position.axial_nm", true),
    ("scan.axis", true),
    ("scan.start", true),
    ("scan.stop", true),
    ("scan.points", true),
];

const SOLVER_KEY: &str = "solver";

fn is_known(key: &str) -> bool {
    key == SCENARIO_KEY || key == SOLVER_KEY || KEYS.iter().any(|(k, _)| *k == key)
}

/// Splits text into entries; `#` starts a comment.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let at = Location::Line(i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(split_entry(line, at)?);
    }
    Ok(out)
}

/// Entries from repeated `--set key=value` arguments.
pub fn parse_overrides(args: &[String]) -> Result<Vec<Entry>> {
    args.iter()
        .enumerate()
        .map(|(i, a)| split_entry(a.trim(), Location::Set(i + 1)))
        .collect()
}

fn split_entry(text: &str, at: Location) -> Result<Entry> {
    match text.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok(Entry {
            key: k.trim().to_string(),
            value: v.trim().to_string(),
            at,
        }),
        _ => Err(ConfigError::Syntax { at, text: text.to_string() }),
    }
}

/// Parses a complete configuration with no base scenario other than the one
/// it names itself.
pub fn parse_config(text: &str) -> Result<Scenario> {
    resolve(&parse_entries(text)?, None)
}

/// Applies `entries` in order on top of `base`; a `scenario=` entry replaces
/// the base. Later entries win.
pub fn resolve(entries: &[Entry], base: Option<&str>) -> Result<Scenario> {
    for e in entries {
        if !is_known(&e.key) {
            return Err(ConfigError::UnknownKey { at: e.at, key: e.key.clone() });
        }
    }
    let base_entry = entries.iter().rev().find(|e| e.key == SCENARIO_KEY);
    let mut scenario = match (base_entry, base) {
        (Some(e), _) => Some(
            builtin_scenario(&e.value).ok_or_else(|| ConfigError::UnknownScenario {
                at: e.at,
                name: e.value.clone(),
            })?,
        ),
        (None, Some(name)) => Some(builtin_scenario(name).ok_or_else(|| ConfigError::UnknownScenario {
            at: Location::End,
            name: name.to_string(),
        })?),
        (None, None) => None,
    };

    let mut last: BTreeMap<&str, &Entry> = BTreeMap::new();
    for e in entries.iter().filter(|e| e.key != SCENARIO_KEY) {
        last.insert(e.key.as_str(), e);
    }
    if scenario.is_none() {
        for (key, required) in KEYS.iter().chain([(SOLVER_KEY, true)].iter()) {
            if *required && !last.contains_key(key) {
                return Err(ConfigError::MissingKey { at: Location::End, key: key.to_string() });
            }
        }
    }
    let s = scenario.get_or_insert_with(|| base_scenario("custom"));

    for (key, e) in &last {
        if *key != "scan.start" && *key != "scan.stop" {
            apply(s, e)?;
        }
    }
    let (to_si, _, unit) = scan_units(s.scan.axis);
    if let Some(e) = last.get("scan.start") {
        s.scan.start = to_si(number(e, unit)?);
    }
    if let Some(e) = last.get("scan.stop") {
        s.scan.stop = to_si(number(e, unit)?);
    }
    s.validate().map_err(|err| ConfigError::Inconsistent {
        at: Location::End,
        message: err.to_string(),
    })?;
    Ok(scenario.expect("set above"))
}

fn invalid(e: &Entry, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        at: e.at,
        key: e.key.clone(),
        value: e.value.clone(),
        reason: reason.into(),
    }
}

/// A finite number. Values with a unit attached (`10cm`, `5 MHz`) are unit
/// violations; anything else unparseable is an invalid value.
fn number(e: &Entry, unit: &'static str) -> Result<f64> {
    if let Ok(x) = e.value.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(invalid(e, "not finite")) };
    }
    let split = e
        .value
        .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | 'e' | 'E')))
        .unwrap_or(e.value.len());
    let (head, tail) = e.value.split_at(split);
    let head_ok = head.parse::<f64>().is_ok() || head.trim_end_matches(['e', 'E']).parse::<f64>().is_ok();
    if head_ok && tail.trim().chars().next().is_some_and(|c| c.is_alphabetic() || c == '%') {
        Err(ConfigError::UnitViolation {
            at: e.at,
            key: e.key.clone(),
            unit,
            value: e.value.clone(),
        })
    } else {
        Err(invalid(e, "not a number"))
    }
}

fn positive(e: &Entry, unit: &'static str) -> Result<f64> {
    let x = number(e, unit)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(invalid(e, "must be positive"))
    }
}

fn non_negative(e: &Entry, unit: &'static str) -> Result<f64> {
    let x = number(e, unit)?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err(invalid(e, "must not be negative"))
    }
}

fn nm_to_m(x: f64) -> f64 {
    x / 1e9
}

fn m_to_nm(x: f64) -> f64 {
    x * 1e9
}

fn wavelength_nm_to_angular(x: f64) -> f64 {
    wavelength_to_angular(nm_to_m(x))
}

fn angular_to_wavelength_nm(omega: f64) -> f64 {
    m_to_nm(2.0 * PI * C / omega)
}

type Conversion = fn(f64) -> f64;

/// `(to_si, from_si, unit)` for scan bounds along `axis`.
fn scan_units(axis: ScanAxis) -> (Conversion, Conversion, &'static str) {
    match axis {
        ScanAxis::Radial | ScanAxis::Axial => (nm_to_m, m_to_nm, "nm"),
        ScanAxis::Detuning => (mhz_to_angular, angular_to_mhz, "MHz"),
    }
}

fn apply(s: &mut Scenario, e: &Entry) -> Result<()> {
    match e.key.as_str() {
        "name" => s.name = e.value.clone(),
        "fiber.radius_nm" => s.fiber.core_radius = nm_to_m(positive(e, "nm")?),
        "fiber.core_index" => s.fiber.core_index = positive(e, "refractive index units")?,
        "fiber.clad_index" => s.fiber.clad_index = positive(e, "refractive index units")?,
        "cavity.power_reflectivity" => {
            let r2 = number(e, "power fraction")?;
            if !(r2 > 0.0 && r2 < 1.0) {
                return Err(invalid(e, "must lie strictly between 0 and 1"));
            }
            s.cavity.power_reflectivity = r2;
        }
        "cavity.reflection_phase_rad" => s.cavity.reflection_phase = number(e, "rad")?,
        "cavity.length_m" => s.cavity.length = positive(e, "m")?,
        "cavity.resonance_order" => {
            s.cavity.resonance_order = if e.value == "auto" {
                None
            } else {
                Some(e.value.parse::<i64>().map_err(|_| invalid(e, "expected an integer or `auto`"))?)
            }
        }
        "cavity.detuning_from_atom_MHz" => s.cavity.resonance_offset = mhz_to_angular(number(e, "MHz")?),
        "atom.wavelength_nm" => s.atom.bare_frequency = wavelength_nm_to_angular(positive(e, "nm")?),
        "atom.linewidth_MHz" => s.atom.natural_linewidth = mhz_to_angular(positive(e, "MHz")?),
        "atom.C3g_kHz_um3" => s.atom.c3_ground = c3_khz_um3_to_si(number(e, "kHz um^3")?),
        "atom.C3e_kHz_um3" => s.atom.c3_excited = c3_khz_um3_to_si(number(e, "kHz um^3")?),
        "drive.input_power_pW" => s.drive.input_power = non_negative(e, "pW")? / 1e12,
        "drive.detuning_MHz" => s.drive.detuning_cavity = mhz_to_angular(number(e, "MHz")?),
        "position.surface_distance_nm" => s.position.surface_distance = nm_to_m(non_negative(e, "nm")?),
        "position.axial_nm" => s.position.axial = nm_to_m(number(e, "nm")?),
        "scan.axis" => {
            s.scan.axis = ScanAxis::parse(&e.value).ok_or_else(|| invalid(e, "expected radial, axial or detuning"))?
        }
        "scan.points" => {
            let n: usize = e.value.parse().map_err(|_| invalid(e, "expected a whole number"))?;
            if n < 2 {
                return Err(invalid(e, "a scan needs at least 2 points"));
            }
            s.scan.points = n;
        }
        "solver" => {
            s.solver = SolverPath::parse(&e.value).ok_or_else(|| invalid(e, "expected exact, analytic or both"))?
        }
        other => unreachable!("unchecked key {other}"),
    }
    Ok(())
}

/// Shortest decimal `u` with `to_si(u) == si`, so echoed values read back to
/// the identical scenario.
fn exact_repr(si: f64, from_si: impl Fn(f64) -> f64, to_si: impl Fn(f64) -> f64) -> String {
    let user = from_si(si);
    for digits in 1..=17 {
        let u: f64 = format!("{:.*e}", digits - 1, user).parse().expect("formatted float parses");
        if to_si(u) == si {
            return format!("{u}");
        }
    }
    let (mut lo, mut hi) = (user, user);
    for _ in 0..64 {
        lo = lo.next_down();
        hi = hi.next_up();
        for u in [lo, hi] {
            if to_si(u) == si {
                return format!("{u}");
            }
        }
    }
    format!("{user}")
}

/// All keys with values that resolve back to `s` exactly.
pub fn echo(s: &Scenario) -> Vec<(&'static str, String)> {
    let id = |x: f64| x;
    let pw = |x: f64| x / 1e12;
    let (scan_to_si, scan_from_si, _) = scan_units(s.scan.axis);
    vec![
        ("name", s.name.clone()),
        ("fiber.radius_nm", exact_repr(s.fiber.core_radius, m_to_nm, nm_to_m)),
        ("fiber.core_index", format!("{}", s.fiber.core_index)),
        ("fiber.clad_index", format!("{}", s.fiber.clad_index)),
        ("cavity.power_reflectivity", format!("{}", s.cavity.power_reflectivity)),
        ("cavity.reflection_phase_rad", format!("{}", s.cavity.reflection_phase)),
        ("cavity.length_m", exact_repr(s.cavity.length, id, id)),
        (
            "cavity.resonance_order",
            s.cavity.resonance_order.map_or_else(|| "auto".to_string(), |m| m.to_string()),
        ),
        (
            "cavity.detuning_from_atom_MHz",
            exact_repr(s.cavity.resonance_offset, angular_to_mhz, mhz_to_angular),
        ),
        (
            "atom.wavelength_nm",
            exact_repr(s.atom.bare_frequency, angular_to_wavelength_nm, wavelength_nm_to_angular),
        ),
        (
            "atom.linewidth_MHz",
            exact_repr(s.atom.natural_linewidth, angular_to_mhz, mhz_to_angular),
        ),
        (
            "atom.C3g_kHz_um3",
            exact_repr(s.atom.c3_ground, c3_si_to_khz_um3, c3_khz_um3_to_si),
        ),
        (
            "atom.C3e_kHz_um3",
            exact_repr(s.atom.c3_excited, c3_si_to_khz_um3, c3_khz_um3_to_si),
        ),
        ("drive.input_power_pW", exact_repr(s.drive.input_power, |x| x * 1e12, pw)),
        (
            "drive.detuning_MHz",
            exact_repr(s.drive.detuning_cavity, angular_to_mhz, mhz_to_angular),
        ),
        (
            "position.surface_distance_nm",
            exact_repr(s.position.surface_distance, m_to_nm, nm_to_m),
        ),
        ("position.axial_nm", exact_repr(s.position.axial, m_to_nm, nm_to_m)),
        ("scan.axis", s.scan.axis.name().to_string()),
        ("scan.start", exact_repr(s.scan.start, scan_from_si, scan_to_si)),
        ("scan.stop", exact_repr(s.scan.stop, scan_from_si, scan_to_si)),
        ("scan.points", s.scan.points.to_string()),
        ("solver", s.solver.name().to_string()),
    ]
}

/// Unit of the scan coordinate as written to output.
pub fn coordinate_unit(axis: ScanAxis) -> &'static str {
    scan_units(axis).2
}

/// Scan coordinate converted to output units.
pub fn coordinate_to_user(axis: ScanAxis, x: f64) -> f64 {
    (scan_units(axis).1)(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbg_cqed::sweep::{builtin_scenarios, SCENARIO_NAMES};

    fn echo_text(s: &Scenario) -> String {
        echo(s).iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    #[test]
    fn named_base_is_the_builtin() {
        for name in SCENARIO_NAMES {
            let s = parse_config(&format!("scenario={name}\n")).unwrap();
            assert_eq!(s, builtin_scenario(name).unwrap());
        }
    }

    #[test]
    fn echo_round_trips_every_builtin() {
        for s in builtin_scenarios() {
            assert_eq!(parse_config(&echo_text(&s)).unwrap(), s, "{}", s.name);
        }
    }

    #[test]
    fn echo_uses_short_user_values() {
        let s = builtin_scenario("fig3").unwrap();
        let e: BTreeMap<_, _> = echo(&s).into_iter().collect();
        assert_eq!(e["atom.C3g_kHz_um3"], "1.56");
        assert_eq!(e["atom.C3e_kHz_um3"], "3.09");
        assert_eq!(e["atom.wavelength_nm"], "852");
        assert_eq!(e["atom.linewidth_MHz"], "5.25");
        assert_eq!(e["fiber.radius_nm"], "200");
        assert_eq!(e["drive.input_power_pW"], "10");
        assert_eq!(e["scan.start"], "5");
        let f5: BTreeMap<_, _> = echo(&builtin_scenario("fig5").unwrap()).into_iter().collect();
        assert_eq!(f5["scan.start"], "-60");
    }

    #[test]
    fn c3_round_trip() {
        let s = parse_config("scenario=fig3\natom.C3g_kHz_um3=1.56\n").unwrap();
        assert_eq!(s.atom.c3_ground, c3_khz_um3_to_si(1.56));
        let e: BTreeMap<_, _> = echo(&s).into_iter().collect();
        assert_eq!(e["atom.C3g_kHz_um3"], "1.56");
    }

    #[test]
    fn length_overlay_gives_short_cavity() {
        let mut s = parse_config("scenario=fig3\ncavity.length_m=0.001\n").unwrap();
        let fig8 = builtin_scenario("fig8").unwrap();
        s.name = fig8.name.clone();
        assert_eq!(s, fig8);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nscenario = fig3  # base\n  drive.input_power_pW=2.5\n";
        let s = parse_config(text).unwrap();
        assert_eq!(s.drive.input_power, 2.5e-12);
    }

    #[test]
    fn later_entries_win() {
        let entries = parse_entries("scenario=fig3\ndrive.input_power_pW=1\n").unwrap();
        let mut all = entries.clone();
        all.extend(parse_overrides(&["drive.input_power_pW=3".into()]).unwrap());
        assert_eq!(resolve(&all, None).unwrap().drive.input_power, 3e-12);
        assert_eq!(resolve(&entries, Some("fig8")).unwrap().cavity.length, 0.1);
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("scenario=fig3\n\ncavity.lenght_m=0.1\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey { at: Location::Line(3), key: "cavity.lenght_m".into() }
        );
        assert_eq!(err.to_string(), "line 3: unknown key `cavity.lenght_m`");
    }

    #[test]
    fn missing_key_without_base() {
        let mut text = echo_text(&builtin_scenario("fig3").unwrap());
        text = text.lines().filter(|l| !l.starts_with("drive.detuning_MHz")).map(|l| format!("{l}\n")).collect();
        let err = parse_config(&text).unwrap_err();
        assert_eq!(
            err,
            ConfigError::MissingKey { at: Location::End, key: "drive.detuning_MHz".into() }
        );
        assert!(parse_config("name=x\n").is_err());
    }

    #[test]
    fn unit_violation_reports_line() {
        let err = parse_config("scenario=fig3\ncavity.length_m=10cm\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnitViolation { at: Location::Line(2), unit: "m", .. }));
        let err = parse_config("scenario=fig3\ndrive.detuning_MHz = 5 GHz\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnitViolation { at: Location::Line(2), .. }));
        let err = parse_config("scenario=fig3\n\n\ndrive.input_power_pW=lots\n").unwrap_err();
        assert!(matches!(err, ConfigError::InvalidValue { at: Location::Line(4), .. }));
    }

    #[test]
    fn range_and_scan_checks() {
        for bad in ["cavity.power_reflectivity=1", "cavity.length_m=-1", "scan.points=1", "scan.axis=diagonal"] {
            let err = parse_config(&format!("scenario=fig3\n{bad}\n")).unwrap_err();
            assert_eq!(err.location(), Location::Line(2), "{bad}");
        }
        let err = parse_config("scenario=fig3\nscan.start=700\n").unwrap_err();
        assert!(matches!(err, ConfigError::Inconsistent { .. }));
        let err = parse_config("scenario=fig3\nscan.start=1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Inconsistent { .. }));
    }

    #[test]
    fn scan_bounds_follow_final_axis() {
        let s = parse_config("scenario=fig3\nscan.start=-10\nscan.stop=10\nscan.axis=detuning\n").unwrap();
        assert_eq!(s.scan.start, mhz_to_angular(-10.0));
        assert_eq!(s.scan.stop, mhz_to_angular(10.0));
    }

    #[test]
    fn syntax_and_scenario_errors() {
        assert!(matches!(
            parse_config("scenario=fig3\njust text\n"),
            Err(ConfigError::Syntax { at: Location::Line(2), .. })
        ));
        assert!(matches!(
            parse_config("scenario=fig99\n"),
            Err(ConfigError::UnknownScenario { at: Location::Line(1), .. })
        ));
    }

    #[test]
    fn resonance_order_auto_or_integer() {
        let s = parse_config("scenario=fig3\ncavity.resonance_order=1000\n").unwrap();
        assert_eq!(s.cavity.resonance_order, Some(1000));
        let s = parse_config("scenario=fig3\ncavity.resonance_order=auto\n").unwrap();
        assert_eq!(s.cavity.resonance_order, None);
    }
}
