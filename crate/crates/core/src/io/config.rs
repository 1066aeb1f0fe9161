//! `section.key = value` configuration files.
//!
//! Parsing collects every problem (unknown keys with the closest valid
//! spelling, malformed values, violated hypotheses) before failing, each
//! tagged with its line number.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::background::{self, BackgroundFlow, InitialVelocity};
use crate::error::{Error, Result};
use crate::symsys::Formulation;
use crate::thermo::{self, GasParameters};

/// One problem found in a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityKind {
    None,
    Linear,
    LinearTanh,
    LinearBump,
    Rotating,
}

impl VelocityKind {
    fn name(self) -> &'static str {
        match self {
            VelocityKind::None => "none",
            VelocityKind::Linear => "linear",
            VelocityKind::LinearTanh => "linear-tanh",
            VelocityKind::LinearBump => "linear-bump",
            VelocityKind::Rotating => "rotating",
        }
    }
}

impl FromStr for VelocityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(VelocityKind::None),
            "linear" => Ok(VelocityKind::Linear),
            "linear-tanh" => Ok(VelocityKind::LinearTanh),
            "linear-bump" => Ok(VelocityKind::LinearBump),
            "rotating" => Ok(VelocityKind::Rotating),
            _ => Err("expected one of none, linear, linear-tanh, linear-bump, rotating".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GasSection {
    pub covolume: f64,
    pub gas_constant: f64,
    pub cv: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub dim: usize,
    pub cells: usize,
    pub half_width: f64,
    /// Cells next to the periodic seam that must stay quiet.
    pub buffer_cells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSection {
    pub order: usize,
    pub cfl: f64,
    pub hyperviscosity: f64,
    pub general: bool,
    pub theta: f64,
    pub positivity_tolerance: f64,
    /// Largest `|V|` tolerated in the seam buffer, relative to the initial maximum.
    pub buffer_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialSection {
    pub amplitude: f64,
    pub entropy_amplitude: f64,
    pub radius: f64,
    pub center: Vec<f64>,
    pub base_pi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundSection {
    pub velocity: VelocityKind,
    pub slope: f64,
    pub amplitude: f64,
    pub scale: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub t_end: f64,
    pub output_interval: f64,
    /// Write a snapshot every this many outputs; zero disables snapshots.
    pub snapshot_every: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSection {
    pub m: usize,
    pub fit_start: f64,
    pub fit_end: f64,
    pub slack: f64,
    pub calibration_end: f64,
    /// Envelope constant; `None` calibrates it on `[0, calibration_end]`.
    pub envelope_constant: Option<f64>,
    pub conservation_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeSection {
    pub center: Vec<f64>,
    pub radius: f64,
    pub t_end: f64,
    pub perturbation_center: Vec<f64>,
    pub perturbation_radius: f64,
    pub perturbation_amplitude: f64,
    /// Number of grids, each twice as fine as the previous, starting at `cone.cells`.
    pub levels: usize,
    pub min_order: f64,
    /// Cells per axis of the coarsest cone grid.
    pub cells: usize,
    pub half_width: f64,
    /// Constant `pi` of the non-vacuum base state the cone test runs on.
    pub base_pi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySection {
    pub samples: usize,
    pub enrichment: usize,
    pub tolerance: f64,
    pub cells: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EosSection {
    pub densities: usize,
    pub entropy_min: f64,
    pub entropy_max: f64,
    pub tolerance: f64,
    pub fd_tolerance: f64,
}

/// Complete configuration of every command.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub gas: GasSection,
    pub grid: GridSection,
    pub scheme: SchemeSection,
    pub initial: InitialSection,
    pub background: BackgroundSection,
    pub run: RunSection,
    pub diagnostics: DiagnosticsSection,
    pub cone: ConeSection,
    pub inequalities: InequalitySection,
    pub eos: EosSection,
}

impl Default for Config {
    /// One-dimensional reference run: `gamma0 = 3`, `b = 0.5`, `u0(x) = x`.
    fn default() -> Self {
        Self {
            gas: GasSection { covolume: 0.5, gas_constant: 2.0, cv: 1.0 },
            grid: GridSection { dim: 1, cells: 2048, half_width: 64.0, buffer_cells: 16 },
            scheme: SchemeSection {
                order: 4,
                cfl: 0.4,
                hyperviscosity: 0.02,
                general: false,
                theta: 1.0,
                positivity_tolerance: 1e-10,
                buffer_tolerance: 1e-4,
            },
            initial: InitialSection {
                amplitude: 1e-2,
                entropy_amplitude: 1e-2,
                radius: 1.0,
                center: vec![0.0],
                base_pi: 0.0,
            },
            background: BackgroundSection {
                velocity: VelocityKind::Linear,
                slope: 1.0,
                amplitude: 0.1,
                scale: 1.0,
                omega: 0.5,
            },
            run: RunSection { t_end: 50.0, output_interval: 0.1, snapshot_every: 0, seed: 0 },
            diagnostics: DiagnosticsSection {
                m: 2,
                fit_start: 5.0,
                fit_end: 50.0,
                slack: 0.2,
                calibration_end: 1.0,
                envelope_constant: None,
                conservation_tolerance: 1e-8,
            },
            cone: ConeSection {
                center: vec![0.0],
                radius: 1.5,
                t_end: 1.0,
                perturbation_center: vec![2.6],
                perturbation_radius: 1.0,
                perturbation_amplitude: 0.1,
                levels: 3,
                min_order: 3.5,
                cells: 256,
                half_width: 4.0,
                base_pi: 0.5,
            },
            inequalities: InequalitySection {
                samples: 3000,
                enrichment: 10,
                tolerance: 0.2,
                cells: 1024,
                half_width: 12.0,
            },
            eos: EosSection {
                densities: 50,
                entropy_min: -1.0,
                entropy_max: 1.0,
                tolerance: 1e-10,
                fd_tolerance: 1e-6,
            },
        }
    }
}

/// Every accepted key, in serialisation order.
pub const KEYS: &[&str] = &[
    "gas.covolume",
    "gas.gas_constant",
    "gas.cv",
    "grid.dim",
    "grid.cells",
    "grid.half_width",
    "grid.buffer_cells",
    "scheme.order",
    "scheme.cfl",
    "scheme.hyperviscosity",
    "scheme.formulation",
    "scheme.theta",
    "scheme.positivity_tolerance",
    "scheme.buffer_tolerance",
    "initial.amplitude",
    "initial.entropy_amplitude",
    "initial.radius",
    "initial.center",
    "initial.base_pi",
    "background.velocity",
    "background.slope",
    "background.amplitude",
    "background.scale",
    "background.omega",
    "run.t_end",
    "run.output_interval",
    "run.snapshot_every",
    "run.seed",
    "diagnostics.m",
    "diagnostics.fit_start",
    "diagnostics.fit_end",
    "diagnostics.slack",
    "diagnostics.calibration_end",
    "diagnostics.envelope_constant",
    "diagnostics.conservation_tolerance",
    "cone.center",
    "cone.radius",
    "cone.t_end",
    "cone.perturbation_center",
    "cone.perturbation_radius",
    "cone.perturbation_amplitude",
    "cone.levels",
    "cone.min_order",
    "cone.cells",
    "cone.half_width",
    "cone.base_pi",
    "inequalities.samples",
    "inequalities.enrichment",
    "inequalities.tolerance",
    "inequalities.cells",
    "inequalities.half_width",
    "eos.densities",
    "eos.entropy_min",
    "eos.entropy_max",
    "eos.tolerance",
    "eos.fd_tolerance",
];

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != *cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// Closest accepted key to `key`.
pub fn suggest(key: &str) -> &'static str {
    KEYS.iter().min_by_key(|k| edit_distance(key, k)).expect("non-empty key table")
}

struct Entries {
    values: BTreeMap<String, (String, usize)>,
    issues: Vec<ConfigIssue>,
}

impl Entries {
    fn line(&self, key: &str) -> Option<usize> {
        self.values.get(key).map(|v| v.1)
    }

    fn issue(&mut self, key: &str, message: impl Into<String>) {
        let line = self.line(key);
        self.issues.push(ConfigIssue { line, key: key.to_string(), message: message.into() });
    }

    fn get<T: FromStr>(&mut self, key: &str, slot: &mut T)
    where
        T::Err: fmt::Display,
    {
        if let Some((raw, _)) = self.values.get(key).cloned() {
            match raw.parse::<T>() {
                Ok(v) => *slot = v,
                Err(e) => self.issue(key, format!("cannot parse {raw:?}: {e}")),
            }
        }
    }

    fn get_list(&mut self, key: &str, slot: &mut Vec<f64>) {
        if let Some((raw, _)) = self.values.get(key).cloned() {
            let parsed: std::result::Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
            match parsed {
                Ok(v) => *slot = v,
                Err(e) => self.issue(key, format!("cannot parse {raw:?} as a comma-separated list: {e}")),
            }
        }
    }
}

impl Config {
    /// Parses a configuration; keys not present keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Entries { values: BTreeMap::new(), issues: Vec::new() };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                entries.issues.push(ConfigIssue {
                    line: Some(line),
                    key: content.to_string(),
                    message: "expected `key = value`".into(),
                });
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                entries.issues.push(ConfigIssue {
                    line: Some(line),
                    key: key.to_string(),
                    message: format!("unknown key; did you mean `{}`?", suggest(key)),
                });
                continue;
            }
            if let Some((_, first)) = entries.values.get(key) {
                entries.issues.push(ConfigIssue {
                    line: Some(line),
                    key: key.to_string(),
                    message: format!("duplicate key (first set on line {first})"),
                });
                continue;
            }
            entries.values.insert(key.to_string(), (value.to_string(), line));
        }

        let mut c = Config::default();
        let e = &mut entries;
        e.get("gas.covolume", &mut c.gas.covolume);
        e.get("gas.gas_constant", &mut c.gas.gas_constant);
        e.get("gas.cv", &mut c.gas.cv);
        e.get("grid.dim", &mut c.grid.dim);
        e.get("grid.cells", &mut c.grid.cells);
        e.get("grid.half_width", &mut c.grid.half_width);
        e.get("grid.buffer_cells", &mut c.grid.buffer_cells);
        e.get("scheme.order", &mut c.scheme.order);
        e.get("scheme.cfl", &mut c.scheme.cfl);
        e.get("scheme.hyperviscosity", &mut c.scheme.hyperviscosity);
        if let Some((raw, _)) = e.values.get("scheme.formulation").cloned() {
            match raw.as_str() {
                "isentropic" => c.scheme.general = false,
                "general" => c.scheme.general = true,
                _ => e.issue("scheme.formulation", format!("expected `isentropic` or `general`, got {raw:?}")),
            }
        }
        e.get("scheme.theta", &mut c.scheme.theta);
        e.get("scheme.positivity_tolerance", &mut c.scheme.positivity_tolerance);
        e.get("scheme.buffer_tolerance", &mut c.scheme.buffer_tolerance);
        e.get("initial.amplitude", &mut c.initial.amplitude);
        e.get("initial.entropy_amplitude", &mut c.initial.entropy_amplitude);
        e.get("initial.radius", &mut c.initial.radius);
        e.get_list("initial.center", &mut c.initial.center);
        e.get("initial.base_pi", &mut c.initial.base_pi);
        e.get("background.velocity", &mut c.background.velocity);
        e.get("background.slope", &mut c.background.slope);
        e.get("background.amplitude", &mut c.background.amplitude);
        e.get("background.scale", &mut c.background.scale);
        e.get("background.omega", &mut c.background.omega);
        e.get("run.t_end", &mut c.run.t_end);
        e.get("run.output_interval", &mut c.run.output_interval);
        e.get("run.snapshot_every", &mut c.run.snapshot_every);
        e.get("run.seed", &mut c.run.seed);
        e.get("diagnostics.m", &mut c.diagnostics.m);
        e.get("diagnostics.fit_start", &mut c.diagnostics.fit_start);
        e.get("diagnostics.fit_end", &mut c.diagnostics.fit_end);
        e.get("diagnostics.slack", &mut c.diagnostics.slack);
        e.get("diagnostics.calibration_end", &mut c.diagnostics.calibration_end);
        if let Some((raw, _)) = e.values.get("diagnostics.envelope_constant").cloned() {
            if raw == "auto" {
                c.diagnostics.envelope_constant = None;
            } else {
                let mut v = 0.0;
                e.get("diagnostics.envelope_constant", &mut v);
                c.diagnostics.envelope_constant = Some(v);
            }
        }
        e.get("diagnostics.conservation_tolerance", &mut c.diagnostics.conservation_tolerance);
        e.get_list("cone.center", &mut c.cone.center);
        e.get("cone.radius", &mut c.cone.radius);
        e.get("cone.t_end", &mut c.cone.t_end);
        e.get_list("cone.perturbation_center", &mut c.cone.perturbation_center);
        e.get("cone.perturbation_radius", &mut c.cone.perturbation_radius);
        e.get("cone.perturbation_amplitude", &mut c.cone.perturbation_amplitude);
        e.get("cone.levels", &mut c.cone.levels);
        e.get("cone.min_order", &mut c.cone.min_order);
        e.get("cone.cells", &mut c.cone.cells);
        e.get("cone.half_width", &mut c.cone.half_width);
        e.get("cone.base_pi", &mut c.cone.base_pi);
        e.get("inequalities.samples", &mut c.inequalities.samples);
        e.get("inequalities.enrichment", &mut c.inequalities.enrichment);
        e.get("inequalities.tolerance", &mut c.inequalities.tolerance);
        e.get("inequalities.cells", &mut c.inequalities.cells);
        e.get("inequalities.half_width", &mut c.inequalities.half_width);
        e.get("eos.densities", &mut c.eos.densities);
        e.get("eos.entropy_min", &mut c.eos.entropy_min);
        e.get("eos.entropy_max", &mut c.eos.entropy_max);
        e.get("eos.tolerance", &mut c.eos.tolerance);
        e.get("eos.fd_tolerance", &mut c.eos.fd_tolerance);

        c.validate_into(&mut entries);
        if entries.issues.is_empty() {
            Ok(c)
        } else {
            entries.issues.sort_by_key(|i| i.line.unwrap_or(usize::MAX));
            Err(Error::Config(entries.issues))
        }
    }

    /// Checks every hypothesis; issues carry no line numbers.
    pub fn validate(&self) -> Result<()> {
        let mut entries = Entries { values: BTreeMap::new(), issues: Vec::new() };
        self.validate_into(&mut entries);
        if entries.issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(entries.issues))
        }
    }

    fn validate_into(&self, e: &mut Entries) {
        if let Err(err) = thermo::derive_constants(self.gas.covolume, self.gas.gas_constant, self.gas.cv) {
            let key = if self.gas.covolume < 0.0 || !self.gas.covolume.is_finite() {
                "gas.covolume"
            } else if !(self.gas.gas_constant > 0.0) {
                "gas.gas_constant"
            } else {
                "gas.cv"
            };
            e.issue(key, err.to_string());
        }
        let g = &self.grid;
        if !(1..=2).contains(&g.dim) {
            e.issue("grid.dim", format!("dimension {} not in 1..=2", g.dim));
        }
        if g.cells < 16 || !g.cells.is_power_of_two() {
            e.issue("grid.cells", format!("{} must be a power of two >= 16", g.cells));
        }
        if !(g.half_width > 0.0 && g.half_width.is_finite()) {
            e.issue("grid.half_width", "must be positive");
        }
        if g.buffer_cells * 4 >= g.cells {
            e.issue("grid.buffer_cells", "must be less than a quarter of the cells");
        }
        let s = &self.scheme;
        if ![2, 4, 6, 8].contains(&s.order) {
            e.issue("scheme.order", format!("{} not in {{2, 4, 6, 8}}", s.order));
        }
        if !(s.cfl > 0.0 && s.cfl <= 1.5) {
            e.issue("scheme.cfl", format!("{} not in (0, 1.5]", s.cfl));
        }
        if !(s.hyperviscosity >= 0.0 && s.hyperviscosity.is_finite()) {
            e.issue("scheme.hyperviscosity", "must be >= 0");
        }
        if s.general {
            if let Ok(gas) = self.gas_parameters() {
                if let Err(err) = self.formulation().validate(&gas) {
                    e.issue("scheme.theta", err.to_string());
                }
            }
        }
        if !(s.positivity_tolerance > 0.0) {
            e.issue("scheme.positivity_tolerance", "must be positive");
        }
        if !(s.buffer_tolerance > 0.0) {
            e.issue("scheme.buffer_tolerance", "must be positive");
        }
        let i = &self.initial;
        if !(i.amplitude >= 0.0 && i.amplitude.is_finite()) {
            e.issue("initial.amplitude", "must be >= 0");
        }
        if !(i.radius > 0.0 && i.radius.is_finite()) {
            e.issue("initial.radius", "must be positive");
        }
        if i.center.len() != g.dim {
            e.issue("initial.center", format!("needs {} coordinates", g.dim));
        }
        if !(i.base_pi >= 0.0 && i.base_pi.is_finite()) {
            e.issue("initial.base_pi", "must be >= 0");
        }
        if !i.entropy_amplitude.is_finite() {
            e.issue("initial.entropy_amplitude", "must be finite");
        }
        if (1..=2).contains(&g.dim) {
            if self.background.velocity == VelocityKind::Rotating && g.dim != 2 {
                e.issue("background.velocity", "rotating background needs grid.dim = 2");
            } else if let Err(err) = self.background_flow() {
                e.issue("background.velocity", err.to_string());
            }
        }
        let r = &self.run;
        if !(r.t_end > 0.0 && r.t_end.is_finite()) {
            e.issue("run.t_end", "must be positive");
        }
        if !(r.output_interval > 0.0 && r.output_interval.is_finite()) {
            e.issue("run.output_interval", "must be positive");
        }
        let d = &self.diagnostics;
        if !(1..=4).contains(&d.m) {
            e.issue("diagnostics.m", format!("{} not in 1..=4", d.m));
        }
        if !(d.fit_start >= 0.0 && d.fit_start < d.fit_end) {
            e.issue("diagnostics.fit_end", "fit window must satisfy 0 <= fit_start < fit_end");
        }
        if !(d.calibration_end > 0.0) {
            e.issue("diagnostics.calibration_end", "must be positive");
        }
        if let Some(c) = d.envelope_constant {
            if !(c >= 0.0 && c.is_finite()) {
                e.issue("diagnostics.envelope_constant", "must be >= 0 or `auto`");
            }
        }
        let c = &self.cone;
        if c.center.len() != g.dim {
            e.issue("cone.center", format!("needs {} coordinates", g.dim));
        }
        if c.perturbation_center.len() != g.dim {
            e.issue("cone.perturbation_center", format!("needs {} coordinates", g.dim));
        }
        if !(c.radius > 0.0) {
            e.issue("cone.radius", "must be positive");
        }
        if !(c.t_end > 0.0) {
            e.issue("cone.t_end", "must be positive");
        }
        if !(c.perturbation_radius > 0.0) {
            e.issue("cone.perturbation_radius", "must be positive");
        }
        if c.levels < 2 {
            e.issue("cone.levels", "need at least two resolutions to measure an order");
        }
        if c.cells < 16 || !c.cells.is_power_of_two() {
            e.issue("cone.cells", "must be a power of two >= 16");
        }
        if !(c.half_width > 0.0) {
            e.issue("cone.half_width", "must be positive");
        }
        if !(c.base_pi >= 0.0) {
            e.issue("cone.base_pi", "must be >= 0");
        }
        let q = &self.inequalities;
        if q.samples < 2 {
            e.issue("inequalities.samples", "need at least two samples");
        }
        if q.enrichment < 2 {
            e.issue("inequalities.enrichment", "must be at least 2");
        }
        if q.cells < 16 || !q.cells.is_power_of_two() {
            e.issue("inequalities.cells", "must be a power of two >= 16");
        }
        if !(q.half_width > 5.0) {
            e.issue("inequalities.half_width", "must exceed 5 to fit the sample bumps");
        }
        if self.eos.densities < 2 {
            e.issue("eos.densities", "need at least two densities");
        }
        if !(self.eos.entropy_min <= self.eos.entropy_max) {
            e.issue("eos.entropy_max", "must be >= eos.entropy_min");
        }
    }

    pub fn gas_parameters(&self) -> Result<GasParameters> {
        thermo::derive_constants(self.gas.covolume, self.gas.gas_constant, self.gas.cv)
    }

    pub fn formulation(&self) -> Formulation {
        if self.scheme.general {
            Formulation::General { theta: self.scheme.theta }
        } else {
            Formulation::Isentropic
        }
    }

    pub fn initial_velocity(&self) -> Option<InitialVelocity> {
        let b = &self.background;
        let dim = self.grid.dim;
        match b.velocity {
            VelocityKind::None => None,
            VelocityKind::Linear => Some(InitialVelocity::linear(dim, b.slope)),
            VelocityKind::LinearTanh => {
                Some(InitialVelocity::LinearTanh { dim, slope: b.slope, amplitude: b.amplitude, scale: b.scale })
            }
            VelocityKind::LinearBump => {
                Some(InitialVelocity::LinearBump { dim, slope: b.slope, amplitude: b.amplitude, width: b.scale })
            }
            VelocityKind::Rotating => Some(InitialVelocity::rotating(b.omega)),
        }
    }

    /// Background flow, after checking the spectral condition on the box.
    pub fn background_flow(&self) -> Result<Option<BackgroundFlow>> {
        let Some(u0) = self.initial_velocity() else { return Ok(None) };
        let per_axis = if self.grid.dim == 1 { 2001 } else { 81 };
        let samples = background::sample_box(self.grid.dim, self.grid.half_width, per_axis);
        BackgroundFlow::new(u0, &samples).map(Some)
    }

    /// Canonical text form; `Config::parse(&c.serialize()) == Ok(c)`.
    pub fn serialize(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("gas.covolume", self.gas.covolume.to_string());
        put("gas.gas_constant", self.gas.gas_constant.to_string());
        put("gas.cv", self.gas.cv.to_string());
        put("grid.dim", self.grid.dim.to_string());
        put("grid.cells", self.grid.cells.to_string());
        put("grid.half_width", self.grid.half_width.to_string());
        put("grid.buffer_cells", self.grid.buffer_cells.to_string());
        put("scheme.order", self.scheme.order.to_string());
        put("scheme.cfl", self.scheme.cfl.to_string());
        put("scheme.hyperviscosity", self.scheme.hyperviscosity.to_string());
        put("scheme.formulation", if self.scheme.general { "general" } else { "isentropic" }.to_string());
        put("scheme.theta", self.scheme.theta.to_string());
        put("scheme.positivity_tolerance", self.scheme.positivity_tolerance.to_string());
        put("scheme.buffer_tolerance", self.scheme.buffer_tolerance.to_string());
        put("initial.amplitude", self.initial.amplitude.to_string());
        put("initial.entropy_amplitude", self.initial.entropy_amplitude.to_string());
        put("initial.radius", self.initial.radius.to_string());
        put("initial.center", list(&self.initial.center));
        put("initial.base_pi", self.initial.base_pi.to_string());
        put("background.velocity", self.background.velocity.name().to_string());
        put("background.slope", self.background.slope.to_string());
        put("background.amplitude", self.background.amplitude.to_string());
        put("background.scale", self.background.scale.to_string());
        put("background.omega", self.background.omega.to_string());
        put("run.t_end", self.run.t_end.to_string());
        put("run.output_interval", self.run.output_interval.to_string());
        put("run.snapshot_every", self.run.snapshot_every.to_string());
        put("run.seed", self.run.seed.to_string());
        put("diagnostics.m", self.diagnostics.m.to_string());
        put("diagnostics.fit_start", self.diagnostics.fit_start.to_string());
        put("diagnostics.fit_end", self.diagnostics.fit_end.to_string());
        put("diagnostics.slack", self.diagnostics.slack.to_string());
        put("diagnostics.calibration_end", self.diagnostics.calibration_end.to_string());
        put(
            "diagnostics.envelope_constant",
            self.diagnostics.envelope_constant.map_or("auto".to_string(), |c| c.to_string()),
        );
        put("diagnostics.conservation_tolerance", self.diagnostics.conservation_tolerance.to_string());
        put("cone.center", list(&self.cone.center));
        put("cone.radius", self.cone.radius.to_string());
        put("cone.t_end", self.cone.t_end.to_string());
        put("cone.perturbation_center", list(&self.cone.perturbation_center));
        put("cone.perturbation_radius", self.cone.perturbation_radius.to_string());
        put("cone.perturbation_amplitude", self.cone.perturbation_amplitude.to_string());
        put("cone.levels", self.cone.levels.to_string());
        put("cone.min_order", self.cone.min_order.to_string());
        put("cone.cells", self.cone.cells.to_string());
        put("cone.half_width", self.cone.half_width.to_string());
        put("cone.base_pi", self.cone.base_pi.to_string());
        put("inequalities.samples", self.inequalities.samples.to_string());
        put("inequalities.enrichment", self.inequalities.enrichment.to_string());
        put("inequalities.tolerance", self.inequalities.tolerance.to_string());
        put("inequalities.cells", self.inequalities.cells.to_string());
        put("inequalities.half_width", self.inequalities.half_width.to_string());
        put("eos.densities", self.eos.densities.to_string());
        put("eos.entropy_min", self.eos.entropy_min.to_string());
        put("eos.entropy_max", self.eos.entropy_max.to_string());
        put("eos.tolerance", self.eos.tolerance.to_string());
        put("eos.fd_tolerance", self.eos.fd_tolerance.to_string());
        out
    }
}

/// Reads and parses a configuration file.
pub fn load(path: &std::path::Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Config(vec![ConfigIssue { line: None, key: path.display().to_string(), message: e.to_string() }])
    })?;
    Config::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
        assert_eq!(Config::parse("# only comments\n\n").unwrap(), Config::default());
    }

    #[test]
    fn default_round_trips() {
        let c = Config::default();
        assert_eq!(Config::parse(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn unknown_key_suggests_nearest() {
        let Err(Error::Config(issues)) = Config::parse("grid.cels = 128\n") else { panic!() };
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].line, Some(1));
        assert!(issues[0].message.contains("grid.cells"), "{}", issues[0].message);
    }

    #[test]
    fn collects_all_problems() {
        let text = "gas.cv = -1\ngrid.cells = 100\nscheme.cfl = abc\nbogus = 1\n";
        let Err(Error::Config(issues)) = Config::parse(text) else { panic!() };
        let lines: Vec<_> = issues.iter().map(|i| i.line).collect();
        assert_eq!(lines, vec![Some(1), Some(2), Some(3), Some(4)]);
    }

    #[test]
    fn hypothesis_violations_carry_lines() {
        let text = "gas.cv = 1\ngas.gas_constant = 0.4\nscheme.formulation = general\nscheme.theta = 0.5\n";
        let Err(Error::Config(issues)) = Config::parse(text) else { panic!() };
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].key, "scheme.theta");
        assert_eq!(issues[0].line, Some(4));
    }

    #[test]
    fn degenerate_background_is_rejected() {
        let text = "background.velocity = linear-tanh\nbackground.slope = 0\nbackground.amplitude = 1\n";
        let Err(Error::Config(issues)) = Config::parse(text) else { panic!() };
        assert_eq!(issues[0].key, "background.velocity");
        assert_eq!(issues[0].line, Some(1));
    }
}
