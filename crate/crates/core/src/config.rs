//! Run configuration: flat `key = value` text with `#` comments.
//!
//! Parsing collects every error (unknown keys, duplicates, malformed or
//! out-of-range values, missing required keys) with its line number before
//! failing. [`RunConfig::to_text`] writes every key, and reparsing its output
//! yields an identical config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::boundary::{ForceProfile, TemperatureProfile};
use crate::dynamics::{IntegratorConfig, Scheme};
use crate::error::{GlsfError, Result};
use crate::grid::Grid2D;
use crate::params::{derive_params, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Simulate,
    Stationary,
    Split,
    Qcheck,
    Depcheck,
    Oracle,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Simulate,
        Experiment::Stationary,
        Experiment::Split,
        Experiment::Qcheck,
        Experiment::Depcheck,
        Experiment::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Stationary => "stationary",
            Experiment::Split => "split",
            Experiment::Qcheck => "qcheck",
            Experiment::Depcheck => "depcheck",
            Experiment::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }
}

/// Initial state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// Seeded random smooth state with `z1_norm <= radius`.
    Random,
    /// `psi = 1`, rest zero.
    Superfluid,
    /// Everything zero.
    Normal,
    /// `psi = 1/2`, rest zero.
    Half,
}

impl InitKind {
    pub fn name(self) -> &'static str {
        match self {
            InitKind::Random => "random",
            InitKind::Superfluid => "superfluid",
            InitKind::Normal => "normal",
            InitKind::Half => "half",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            InitKind::Random,
            InitKind::Superfluid,
            InitKind::Normal,
            InitKind::Half,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub mu: f64,
    pub c0: f64,
    pub k0: f64,
    pub omega: f64,
    pub u_b: TemperatureProfile,
    pub g: ForceProfile,
    pub dt: f64,
    pub scheme: Scheme,
    /// Final time; the time budget for `stationary`.
    pub t_end: f64,
    pub record_every: usize,
    /// Steps between snapshots; 0 writes only the initial and final states.
    pub snapshot_every: usize,
    pub solver_tol: f64,
    pub experiment: Experiment,
    pub seed: u64,
    pub out: PathBuf,
    pub init: InitKind,
    pub radius: f64,
    pub stat_tol: f64,
    pub k0_sweep: Vec<f64>,
    pub dep_eps: f64,
    pub oracle_substeps: usize,
}

pub const REQUIRED_KEYS: [&str; 3] = ["nx", "dt", "T"];

impl Default for RunConfig {
    /// Default preset on a 32x32 unit square.
    fn default() -> Self {
        Self {
            nx: 32,
            ny: 32,
            lx: 1.0,
            ly: 1.0,
            gamma: 1.0,
            kappa: 1.0,
            mu: 1.0,
            c0: 1.0,
            k0: 1.0,
            omega: 0.0,
            u_b: TemperatureProfile::Constant(0.0),
            g: ForceProfile::Zero,
            dt: 1e-3,
            scheme: Scheme::Imex,
            t_end: 1.0,
            record_every: 10,
            snapshot_every: 0,
            solver_tol: crate::solver::DEFAULT_TOL,
            experiment: Experiment::Simulate,
            seed: 0,
            out: PathBuf::from("glsf-out"),
            init: InitKind::Random,
            radius: 2.0,
            stat_tol: 1e-6,
            k0_sweep: vec![0.01, 0.1, 1.0, 10.0, 100.0],
            dep_eps: 1e-6,
            oracle_substeps: 100,
        }
    }
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    v.parse::<f64>()
        .map_err(|_| format!("`{v}` is not a number"))
}

fn parse_usize(v: &str) -> std::result::Result<usize, String> {
    v.parse::<usize>()
        .map_err(|_| format!("`{v}` is not a non-negative integer"))
}

fn positive(v: f64) -> std::result::Result<f64, String> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

fn finite(v: f64) -> std::result::Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite, got {v}"))
    }
}

/// `name(x)` -> `x`.
fn call_arg<'a>(v: &'a str, name: &str) -> Option<&'a str> {
    v.strip_prefix(name)?
        .trim_start()
        .strip_prefix('(')?
        .strip_suffix(')')
        .map(str::trim)
}

fn parse_temperature(v: &str) -> std::result::Result<TemperatureProfile, String> {
    if let Some(a) = call_arg(v, "linear_x") {
        return Ok(TemperatureProfile::LinearX(finite(parse_f64(a)?)?));
    }
    if let Some(a) = call_arg(v, "const") {
        return Ok(TemperatureProfile::Constant(finite(parse_f64(a)?)?));
    }
    match parse_f64(v) {
        Ok(x) => Ok(TemperatureProfile::Constant(finite(x)?)),
        Err(_) => Err(format!(
            "`{v}` is neither a number, `const(<v>)` nor `linear_x(<v>)`"
        )),
    }
}

fn parse_force(v: &str) -> std::result::Result<ForceProfile, String> {
    if v == "zero" {
        return Ok(ForceProfile::Zero);
    }
    if let Some(a) = call_arg(v, "stream") {
        return Ok(ForceProfile::Stream(finite(parse_f64(a)?)?));
    }
    Err(format!("`{v}` is neither `zero` nor `stream(<amp>)`"))
}

fn temperature_text(t: TemperatureProfile) -> String {
    match t {
        TemperatureProfile::Constant(v) => format!("const({v:?})"),
        TemperatureProfile::LinearX(v) => format!("linear_x({v:?})"),
    }
}

fn force_text(g: ForceProfile) -> String {
    match g {
        ForceProfile::Zero => "zero".into(),
        ForceProfile::Stream(a) => format!("stream({a:?})"),
    }
}

impl RunConfig {
    /// Applies one key; `Err` carries the message without the line prefix.
    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "nx" => self.nx = parse_usize(v)?,
            "ny" => self.ny = parse_usize(v)?,
            "lx" => self.lx = positive(parse_f64(v)?)?,
            "ly" => self.ly = positive(parse_f64(v)?)?,
            "gamma" => self.gamma = positive(parse_f64(v)?)?,
            "kappa" => self.kappa = positive(parse_f64(v)?)?,
            "mu" => self.mu = positive(parse_f64(v)?)?,
            "c0" => self.c0 = positive(parse_f64(v)?)?,
            "k0" => self.k0 = positive(parse_f64(v)?)?,
            "omega" => self.omega = finite(parse_f64(v)?)?,
            "u_b" => self.u_b = parse_temperature(v)?,
            "g" => self.g = parse_force(v)?,
            "dt" => self.dt = positive(parse_f64(v)?)?,
            "scheme" => {
                self.scheme = Scheme::parse(v)
                    .ok_or_else(|| format!("unknown scheme `{v}` (imex | explicit-euler)"))?
            }
            "T" => self.t_end = positive(parse_f64(v)?)?,
            "record_every" => {
                self.record_every = parse_usize(v)?;
                if self.record_every == 0 {
                    return Err("must be at least 1".into());
                }
            }
            "snapshot_every" => self.snapshot_every = parse_usize(v)?,
            "solver_tol" => self.solver_tol = positive(parse_f64(v)?)?,
            "experiment" => {
                self.experiment =
                    Experiment::parse(v).ok_or_else(|| format!("unknown experiment `{v}`"))?
            }
            "seed" => {
                self.seed = v
                    .parse::<u64>()
                    .map_err(|_| format!("`{v}` is not a u64"))?
            }
            "out" => {
                if v.is_empty() {
                    return Err("must not be empty".into());
                }
                self.out = PathBuf::from(v)
            }
            "init" => {
                self.init = InitKind::parse(v).ok_or_else(|| {
                    format!("unknown init `{v}` (random | superfluid | normal | half)")
                })?
            }
            "radius" => self.radius = positive(parse_f64(v)?)?,
            "stat_tol" => self.stat_tol = positive(parse_f64(v)?)?,
            "k0_sweep" => {
                let vals = v
                    .split(',')
                    .map(|s| parse_f64(s.trim()).and_then(positive))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                if vals.is_empty() {
                    return Err("needs at least one value".into());
                }
                self.k0_sweep = vals;
            }
            "dep_eps" => self.dep_eps = positive(parse_f64(v)?)?,
            "oracle_substeps" => {
                self.oracle_substeps = parse_usize(v)?;
                if self.oracle_substeps == 0 {
                    return Err("must be at least 1".into());
                }
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::new(self.nx, self.ny, self.lx, self.ly)
    }

    pub fn params(&self) -> Result<PhysicalParams> {
        derive_params(self.gamma, self.kappa, self.mu, self.c0, self.k0)
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            scheme: self.scheme,
            ..IntegratorConfig::imex(self.dt).with_tol(self.solver_tol)
        }
    }

    /// Canonical text: every key, floats in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("experiment", self.experiment.name().into());
        kv("nx", self.nx.to_string());
        kv("ny", self.ny.to_string());
        kv("lx", format!("{:?}", self.lx));
        kv("ly", format!("{:?}", self.ly));
        kv("gamma", format!("{:?}", self.gamma));
        kv("kappa", format!("{:?}", self.kappa));
        kv("mu", format!("{:?}", self.mu));
        kv("c0", format!("{:?}", self.c0));
        kv("k0", format!("{:?}", self.k0));
        kv("omega", format!("{:?}", self.omega));
        kv("u_b", temperature_text(self.u_b));
        kv("g", force_text(self.g));
        kv("dt", format!("{:?}", self.dt));
        kv("scheme", self.scheme.name().into());
        kv("T", format!("{:?}", self.t_end));
        kv("record_every", self.record_every.to_string());
        kv("snapshot_every", self.snapshot_every.to_string());
        kv("solver_tol", format!("{:?}", self.solver_tol));
        kv("seed", self.seed.to_string());
        kv("out", self.out.display().to_string());
        kv("init", self.init.name().into());
        kv("radius", format!("{:?}", self.radius));
        kv("stat_tol", format!("{:?}", self.stat_tol));
        kv(
            "k0_sweep",
            self.k0_sweep
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
        kv("dep_eps", format!("{:?}", self.dep_eps));
        kv("oracle_substeps", self.oracle_substeps.to_string());
        s
    }
}

/// Parses and validates configuration text, reporting all errors at once.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut errors = Vec::new();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut ny_set = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            errors.push(format!(
                "line {line}: expected `key = value`, got `{content}`"
            ));
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        if let Some(first) = seen.get(k) {
            errors.push(format!(
                "line {line}: duplicate key `{k}` (first set on line {first})"
            ));
            continue;
        }
        match cfg.set(k, v) {
            Ok(()) => {
                seen.insert(k.to_string(), line);
                ny_set |= k == "ny";
            }
            Err(msg) if msg.starts_with("unknown key") => {
                errors.push(format!("line {line}: {msg}"))
            }
            Err(msg) => errors.push(format!("line {line}: `{k}` {msg}")),
        }
    }
    for key in REQUIRED_KEYS {
        if !seen.contains_key(key) && !errors.iter().any(|e| e.contains(&format!("`{key}`"))) {
            errors.push(format!(
                "line {}: missing required key `{key}`",
                last_line + 1
            ));
        }
    }
    if !ny_set {
        cfg.ny = cfg.nx;
    }
    // cross-field checks, attributed to the line of the offending key
    let line_of = |k: &str| seen.get(k).copied().unwrap_or(last_line + 1);
    for (k, n) in [("nx", cfg.nx), ("ny", cfg.ny)] {
        if seen.contains_key(k) && n < 4 {
            errors.push(format!(
                "line {}: `{k}` must be at least 4, got {n}",
                line_of(k)
            ));
        }
    }
    if seen.contains_key("dt") && seen.contains_key("T") && cfg.dt > cfg.t_end {
        errors.push(format!(
            "line {}: `dt` = {} exceeds `T` = {}",
            line_of("dt"),
            cfg.dt,
            cfg.t_end
        ));
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(GlsfError::Config(errors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "nx = 16\ndt = 1e-3\nT = 0.5\n";

    #[test]
    fn minimal_preset_applies_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.nx, 16);
        assert_eq!(c.ny, 16);
        assert_eq!(c.k0, 1.0);
        assert_eq!(c.u_b, TemperatureProfile::Constant(0.0));
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn collects_every_error_with_lines() {
        let text = "nx = 16\nk0 = -1\nbogus = 3\n# comment\nscheme = rk4\n";
        let GlsfError::Config(errs) = parse_config(text).unwrap_err() else {
            panic!("expected config errors");
        };
        assert!(errs
            .iter()
            .any(|e| e.starts_with("line 2:") && e.contains("k0")));
        assert!(errs
            .iter()
            .any(|e| e.starts_with("line 3:") && e.contains("bogus")));
        assert!(errs
            .iter()
            .any(|e| e.starts_with("line 5:") && e.contains("rk4")));
        assert!(errs.iter().any(|e| e.contains("missing required key `dt`")));
        assert!(errs.iter().any(|e| e.contains("missing required key `T`")));
    }

    #[test]
    fn profiles_parse() {
        let c = parse_config(&format!("{MINIMAL}u_b = linear_x(0.5)\ng = stream(2)\n")).unwrap();
        assert_eq!(c.u_b, TemperatureProfile::LinearX(0.5));
        assert_eq!(c.g, ForceProfile::Stream(2.0));
        let c = parse_config(&format!("{MINIMAL}u_b = 1.5 # normal phase\n")).unwrap();
        assert_eq!(c.u_b, TemperatureProfile::Constant(1.5));
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = parse_config(&format!("{MINIMAL}dt = 2e-3\n")).unwrap_err();
        assert!(err.to_string().contains("duplicate key `dt`"));
    }
}
