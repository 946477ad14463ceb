// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: JSON documents, grid syntax and flag overrides.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::evolution::{DensityMatrix, NamedState};
use crate::model::{ModelParams, DIM};
use crate::numerics::{ComplexMatrix, C64};
use crate::spectral::DEFAULT_SLOPE_THRESHOLD;
use crate::sweep::{InitialState, TableFormat};

pub const DEFAULT_EPS_GRID: &str = "0.001:0.15:150";
pub const DEFAULT_G_GRID: &str = "0.001:0.1:100";
pub const DEFAULT_N_PERIODS: usize = 500;

const TOP_KEYS: &[&str] = &[
    "model",
    "command",
    "grids",
    "n_periods",
    "initial_state",
    "output",
    "workers",
    "threshold",
];
const MODEL_KEYS: &[&str] = &[
    "epsilon",
    "g",
    "g1",
    "g2",
    "n_th",
    "period",
    "T",
    "pulse_fraction",
    "delta1",
    "delta2",
];
const GRID_KEYS: &[&str] = &["eps", "g"];
const OUTPUT_KEYS: &[&str] = &["path", "format"];
const STATE_KEYS: &[&str] = &["real", "imag"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Evolve,
    #[default]
    Spectrum,
    TeqCurve,
    PhaseDiagram,
    ConcurrenceMap,
    SteadyState,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Spectrum => "spectrum",
            Command::TeqCurve => "teq-curve",
            Command::PhaseDiagram => "phase-diagram",
            Command::ConcurrenceMap => "concurrence-map",
            Command::SteadyState => "steady-state",
        }
    }

    /// True when `--eps` is a grid rather than a scalar.
    pub fn sweeps_eps(self) -> bool {
        matches!(self, Command::TeqCurve | Command::PhaseDiagram | Command::ConcurrenceMap)
    }

    /// True when `--g` is a grid rather than a scalar.
    pub fn sweeps_g(self) -> bool {
        self == Command::PhaseDiagram
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Linearly spaced grid with inclusive endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("grid contains a non-finite value".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("grid must be strictly increasing".into()));
        }
        Ok(Self(values))
    }

    pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Self> {
        match count {
            0 => Err(Error::Config("grid count must be at least 1".into())),
            1 => Self::from_values(vec![start]),
            _ => {
                let step = (stop - start) / (count - 1) as f64;
                let mut v: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
                v[count - 1] = stop;
                Self::from_values(v)
            }
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:count` or a single number.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad grid `{s}` (expected start:stop:count or a number)"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            [x] => Self::from_values(vec![x.trim().parse().map_err(|_| bad())?]),
            [a, b, n] => {
                let a: f64 = a.trim().parse().map_err(|_| bad())?;
                let b: f64 = b.trim().parse().map_err(|_| bad())?;
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                Self::linspace(a, b, n)
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Grids {
    pub eps: Option<Grid>,
    pub g: Option<Grid>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    /// `None` writes to standard output.
    pub path: Option<PathBuf>,
    pub format: TableFormat,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { path: None, format: TableFormat::Csv }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: ModelParams,
    pub command: Command,
    pub grids: Grids,
    pub n_periods: usize,
    pub initial_state: InitialState,
    pub output: OutputSpec,
    /// 0 = every available core.
    pub workers: usize,
    pub threshold: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::default(),
            command: Command::default(),
            grids: Grids::default(),
            n_periods: DEFAULT_N_PERIODS,
            initial_state: InitialState::default(),
            output: OutputSpec::default(),
            workers: 0,
            threshold: DEFAULT_SLOPE_THRESHOLD,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.n_periods < 1 {
            return Err(Error::param("n_periods", "must be >= 1"));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::param("threshold", format!("must be > 0, got {}", self.threshold)));
        }
        let eps = self.eps_grid()?;
        for &e in eps.values() {
            ModelParams { epsilon: e, ..self.model }.validate()?;
        }
        for &g in self.g_grid()?.values() {
            ModelParams { g, ..self.model }.validate()?;
        }
        if self.command == Command::PhaseDiagram && eps.values().len() < 3 {
            return Err(Error::param("grids.eps", "phase diagram needs at least 3 points"));
        }
        Ok(())
    }

    /// Soft warnings for the model parameters.
    pub fn warnings(&self) -> Vec<String> {
        self.model.warnings()
    }

    pub fn eps_grid(&self) -> Result<Grid> {
        match &self.grids.eps {
            Some(g) => Ok(g.clone()),
            None => DEFAULT_EPS_GRID.parse(),
        }
    }

    pub fn g_grid(&self) -> Result<Grid> {
        match &self.grids.g {
            Some(g) => Ok(g.clone()),
            None => DEFAULT_G_GRID.parse(),
        }
    }
}

fn unknown_keys(obj: &serde_json::Map<String, Value>, allowed: &[&str], prefix: &str, out: &mut Vec<String>) {
    out.extend(
        obj.keys()
            .filter(|k| !allowed.contains(&k.as_str()))
            .map(|k| format!("{prefix}{k}")),
    );
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Config(format!("`{what}` must be an object")))
}

fn parse_grid_value(v: &Value, what: &str) -> Result<Grid> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => Grid::from_values(vec![n.as_f64().unwrap_or(f64::NAN)]),
        Value::Array(items) => {
            let vals: Option<Vec<f64>> = items.iter().map(Value::as_f64).collect();
            Grid::from_values(vals.ok_or_else(|| Error::Config(format!("`{what}` must hold numbers")))?)
        }
        _ => Err(Error::Config(format!("`{what}` must be a grid string, number or array"))),
    }
    .map_err(|e| Error::Config(format!("`{what}`: {e}")))
}

fn matrix_rows(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    let err = || Error::Config(format!("`initial_state.{what}` must be a {DIM}x{DIM} array of numbers"));
    let rows = v.as_array().ok_or_else(err)?;
    if rows.len() != DIM {
        return Err(err());
    }
    rows.iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(err)?;
            if r.len() != DIM {
                return Err(err());
            }
            r.iter().map(|x| x.as_f64().ok_or_else(err)).collect()
        })
        .collect()
}

/// Parses an explicit `{"real": [[..]], "imag": [[..]]}` state.
pub fn explicit_state(v: &Value) -> Result<DensityMatrix> {
    let obj = as_object(v, "initial_state")?;
    let mut unknown = Vec::new();
    unknown_keys(obj, STATE_KEYS, "initial_state.", &mut unknown);
    if !unknown.is_empty() {
        return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
    }
    let re = matrix_rows(obj.get("real").ok_or_else(|| Error::Config("`initial_state.real` is required".into()))?, "real")?;
    let im = match obj.get("imag") {
        Some(v) => matrix_rows(v, "imag")?,
        None => vec![vec![0.0; DIM]; DIM],
    };
    let data: Vec<C64> = (0..DIM)
        .flat_map(|i| (0..DIM).map(move |j| (i, j)))
        .map(|(i, j)| C64::new(re[i][j], im[i][j]))
        .collect();
    let m = ComplexMatrix::from_row_major(DIM, DIM, data)?;
    DensityMatrix::new(m).map_err(|e| Error::param("initial_state", e.to_string()))
}

/// Parses a JSON run configuration. An empty document gives the defaults.
/// Unknown keys at any level are rejected together.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if text.trim().is_empty() {
        return Ok(cfg);
    }
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;
    let top = as_object(&doc, "<document>")?;

    let mut unknown = Vec::new();
    unknown_keys(top, TOP_KEYS, "", &mut unknown);
    for (key, allowed) in [("model", MODEL_KEYS), ("grids", GRID_KEYS), ("output", OUTPUT_KEYS)] {
        if let Some(v) = top.get(key) {
            unknown_keys(as_object(v, key)?, allowed, &format!("{key}."), &mut unknown);
        }
    }
    if !unknown.is_empty() {
        return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
    }

    if let Some(v) = top.get("model") {
        for (k, x) in as_object(v, "model")? {
            let x = x
                .as_f64()
                .ok_or_else(|| Error::param(k, "must be a number"))?;
            cfg.model.set(k, x)?;
        }
    }
    if let Some(v) = top.get("command") {
        cfg.command = serde_json::from_value(v.clone()).map_err(|e| Error::Config(format!("`command`: {e}")))?;
    }
    if let Some(v) = top.get("grids") {
        let g = as_object(v, "grids")?;
        if let Some(x) = g.get("eps") {
            cfg.grids.eps = Some(parse_grid_value(x, "grids.eps")?);
        }
        if let Some(x) = g.get("g") {
            cfg.grids.g = Some(parse_grid_value(x, "grids.g")?);
        }
    }
    if let Some(v) = top.get("n_periods") {
        cfg.n_periods = v
            .as_u64()
            .ok_or_else(|| Error::param("n_periods", "must be a non-negative integer"))? as usize;
    }
    if let Some(v) = top.get("workers") {
        cfg.workers = v
            .as_u64()
            .ok_or_else(|| Error::param("workers", "must be a non-negative integer"))? as usize;
    }
    if let Some(v) = top.get("threshold") {
        cfg.threshold = v.as_f64().ok_or_else(|| Error::param("threshold", "must be a number"))?;
    }
    if let Some(v) = top.get("initial_state") {
        cfg.initial_state = match v {
            Value::String(s) => InitialState::Named(s.parse::<NamedState>()?),
            other => InitialState::Explicit(explicit_state(other)?),
        };
    }
    if let Some(v) = top.get("output") {
        let o = as_object(v, "output")?;
        if let Some(p) = o.get("path") {
            let p = p.as_str().ok_or_else(|| Error::param("output.path", "must be a string"))?;
            cfg.output.path = Some(PathBuf::from(p));
        }
        if let Some(f) = o.get("format") {
            let f = f.as_str().ok_or_else(|| Error::param("output.format", "must be a string"))?;
            cfg.output.format = f.parse()?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
