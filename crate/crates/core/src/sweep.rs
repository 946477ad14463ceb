// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps, regime maps, trajectory maps and deterministic table
//! output.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::evolution::{evolve_with_map, period_map, DensityMatrix, NamedState};
use crate::model::{ModelParams, DIM};
use crate::numerics::ComplexMatrix;
use crate::observables::{concurrence, ObservableSeries};
use crate::spectral::{classify_regimes, CurvePoint, RegimeLabel};

/// Concurrence below this value counts as zero.
pub const DEATH_THRESHOLD: f64 = 1e-6;

/// Ordered parallel map over `items`. `workers == 0` uses every core.
/// The output order never depends on scheduling.
pub fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers == 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self { name: name.into(), values }
    }

    fn validate(&self) -> Result<()> {
        if ModelParams::default().get(&self.name).is_none() {
            return Err(Error::Config(format!("unknown sweep axis `{}`", self.name)));
        }
        if self.values.is_empty() {
            return Err(Error::Contract(format!("axis `{}` is empty", self.name)));
        }
        let inc = self.values.windows(2).all(|w| w[1] > w[0]);
        let dec = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(inc || dec) {
            return Err(Error::Contract(format!("axis `{}` must be strictly monotone", self.name)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOutput {
    TEq,
    Regime,
    ConcurrenceMap,
    PolarizationMap,
}

#[derive(Clone, Debug)]
pub enum InitialState {
    Named(NamedState),
    Explicit(DensityMatrix),
}

impl InitialState {
    pub fn density_matrix(&self) -> DensityMatrix {
        match self {
            InitialState::Named(s) => s.density_matrix(),
            InitialState::Explicit(rho) => rho.clone(),
        }
    }
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Named(NamedState::BothExcited)
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub outputs: BTreeSet<SweepOutput>,
    pub n_periods: usize,
    pub initial_state: InitialState,
    pub slope_threshold: f64,
    /// 0 = every available core.
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(base: ModelParams, axis1: Axis) -> Self {
        Self {
            base,
            axis1,
            axis2: None,
            outputs: BTreeSet::from([SweepOutput::TEq]),
            n_periods: 500,
            initial_state: InitialState::default(),
            slope_threshold: crate::spectral::DEFAULT_SLOPE_THRESHOLD,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        if let Some(a2) = &self.axis2 {
            a2.validate()?;
            if a2.name == self.axis1.name {
                return Err(Error::Config(format!("both axes sweep `{}`", a2.name)));
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("sweep requests no outputs".into()));
        }
        let wants_traj = self.outputs.contains(&SweepOutput::ConcurrenceMap)
            || self.outputs.contains(&SweepOutput::PolarizationMap);
        if wants_traj && self.n_periods < 1 {
            return Err(Error::Contract("trajectory maps need n_periods >= 1".into()));
        }
        if self.outputs.contains(&SweepOutput::Regime) && self.axis1.values.len() < 3 {
            return Err(Error::Contract("regime labels need at least 3 points on axis1".into()));
        }
        for p in self.cell_params() {
            p.validate()?;
        }
        Ok(())
    }

    fn axis2_values(&self) -> Vec<Option<f64>> {
        match &self.axis2 {
            Some(a) => a.values.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }

    /// Parameters of every cell in row-major order (axis2 outer, axis1 inner).
    pub fn cell_params(&self) -> Vec<ModelParams> {
        let mut out = Vec::with_capacity(self.axis1.values.len() * self.axis2_values().len());
        for v2 in self.axis2_values() {
            for &v1 in &self.axis1.values {
                let mut p = self.base;
                // names are checked in validate
                let _ = p.set(&self.axis1.name, v1);
                if let (Some(a2), Some(v2)) = (&self.axis2, v2) {
                    let _ = p.set(&a2.name, v2);
                }
                out.push(p);
            }
        }
        out
    }
}

/// `t_eq` over the grid with per-row regime labels along axis1.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeMap {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// `[row][col]`, row = axis2 index, col = axis1 index.
    pub teq_values: Vec<Vec<Option<f64>>>,
    pub gap_values: Vec<Vec<Option<f64>>>,
    pub labels: Vec<Vec<Option<RegimeLabel>>>,
    pub errors: Vec<Vec<Option<String>>>,
}

impl RegimeMap {
    pub fn eps_grid(&self) -> &[f64] {
        &self.axis1.values
    }

    pub fn g_grid(&self) -> &[f64] {
        self.axis2.as_ref().map_or(&[], |a| &a.values)
    }

    pub fn rows(&self) -> usize {
        self.teq_values.len()
    }

    /// Row `r` as a t_eq curve.
    pub fn curve(&self, r: usize) -> Vec<CurvePoint> {
        self.axis1
            .values
            .iter()
            .enumerate()
            .map(|(c, &eps)| CurvePoint {
                eps,
                t_eq: self.teq_values[r][c],
                gap: self.gap_values[r][c],
                error: self.errors[r][c].clone(),
            })
            .collect()
    }
}

/// Stroboscopic observables for every cell.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryMap {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// Row-major cells, `None` where the trajectory failed.
    pub series: Vec<Option<ObservableSeries>>,
    pub errors: Vec<Option<String>>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepResult {
    pub regime_map: Option<RegimeMap>,
    pub trajectory_map: Option<TrajectoryMap>,
}

fn first_causes<'a>(errors: impl Iterator<Item = &'a Option<String>>) -> String {
    errors.flatten().take(3).cloned().collect::<Vec<_>>().join("; ")
}

fn trajectory_cell(p: &ModelParams, rho0: &DensityMatrix, n: usize) -> Result<ObservableSeries> {
    let map = period_map(p)?;
    let traj = evolve_with_map(p, &map, rho0, n)?;
    ObservableSeries::from_trajectory(&traj)
}

/// Evaluates every grid cell independently and assembles results in
/// row-major order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let cells = spec.cell_params();
    let ncol = spec.axis1.values.len();
    let mut result = SweepResult::default();

    let wants_gap = spec.outputs.contains(&SweepOutput::TEq) || spec.outputs.contains(&SweepOutput::Regime);
    if wants_gap {
        let points = par_map(spec.workers, &cells, CurvePoint::evaluate);
        if points.iter().all(|p| !p.is_valid()) {
            return Err(Error::SweepFailed(first_causes(points.iter().map(|p| &p.error))));
        }
        let mut map = RegimeMap {
            axis1: spec.axis1.clone(),
            axis2: spec.axis2.clone(),
            teq_values: Vec::new(),
            gap_values: Vec::new(),
            labels: Vec::new(),
            errors: Vec::new(),
        };
        for row in points.chunks(ncol) {
            map.teq_values.push(row.iter().map(|p| p.t_eq).collect());
            map.gap_values.push(row.iter().map(|p| p.gap).collect());
            map.errors.push(row.iter().map(|p| p.error.clone()).collect());
            let labels = if spec.outputs.contains(&SweepOutput::Regime) {
                let pairs: Vec<(f64, Option<f64>)> =
                    spec.axis1.values.iter().zip(row).map(|(&x, p)| (x, p.t_eq)).collect();
                classify_regimes(&pairs, spec.slope_threshold)?.into_iter().map(|l| l.1).collect()
            } else {
                vec![None; row.len()]
            };
            map.labels.push(labels);
        }
        result.regime_map = Some(map);
    }

    let wants_traj = spec.outputs.contains(&SweepOutput::ConcurrenceMap)
        || spec.outputs.contains(&SweepOutput::PolarizationMap);
    if wants_traj {
        let rho0 = spec.initial_state.density_matrix();
        let outcomes = par_map(spec.workers, &cells, |p| trajectory_cell(p, &rho0, spec.n_periods));
        let errors: Vec<Option<String>> = outcomes.iter().map(|o| o.as_ref().err().map(|e| e.to_string())).collect();
        if outcomes.iter().all(|o| o.is_err()) {
            return Err(Error::SweepFailed(first_causes(errors.iter())));
        }
        result.trajectory_map = Some(TrajectoryMap {
            axis1: spec.axis1.clone(),
            axis2: spec.axis2.clone(),
            series: outcomes.into_iter().map(|o| o.ok()).collect(),
            errors,
        });
    }
    Ok(result)
}

/// Smallest `n*` with concurrence below [`DEATH_THRESHOLD`] for every period in
/// `[n*, n_max]`; `None` when concurrence survives to `n_max`.
pub fn concurrence_death_time(p: &ModelParams, rho0: &DensityMatrix, n_max: usize) -> Result<Option<usize>> {
    if n_max < 1 {
        return Err(Error::Contract("n_max must be at least 1".into()));
    }
    let map = period_map(p)?;
    let mut v = rho0.matrix().vectorize();
    let mut last_alive: Option<usize> = (concurrence(rho0)? >= DEATH_THRESHOLD).then_some(0);
    for n in 1..=n_max {
        v = map.matrix.apply(&v);
        let m = ComplexMatrix::unvectorize(&v, DIM)?;
        let m = (&m + &m.adjoint()).scale_real(0.5);
        let c = concurrence(&DensityMatrix::new_unchecked(m)).map_err(|e| Error::Drift {
            period: n,
            detail: e.to_string(),
        })?;
        if c >= DEATH_THRESHOLD {
            last_alive = Some(n);
        }
    }
    Ok(match last_alive {
        Some(n) if n == n_max => None,
        Some(n) => Some(n + 1),
        None => Some(0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            other => Err(Error::Config(format!("unknown output format `{other}` (expected csv or json)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(Option<f64>),
    Int(usize),
    Bool(bool),
    Text(Option<String>),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(Some(x)) => format_float(*x),
            Cell::Float(None) => "nan".into(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(Some(s)) => s.clone(),
            Cell::Text(None) => "invalid".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(Some(x)) if x.is_finite() => json!(x),
            Cell::Float(_) => Value::Null,
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}").to_lowercase()
    }
}

/// A rectangular table with a fixed header plus metadata for JSON output.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Value,
}

fn axis_meta(a: &Axis) -> Value {
    json!({ "name": a.name, "values": a.values })
}

impl Table {
    /// `eps,t_eq,gap,valid`
    pub fn from_curve(curve: &[CurvePoint], params: &ModelParams) -> Self {
        let rows = curve
            .iter()
            .map(|c| vec![Cell::Float(Some(c.eps)), Cell::Float(c.t_eq), Cell::Float(c.gap), Cell::Bool(c.is_valid())])
            .collect();
        let eps: Vec<f64> = curve.iter().map(|c| c.eps).collect();
        Self {
            header: vec!["eps", "t_eq", "gap", "valid"],
            rows,
            meta: json!({ "params": params, "grids": { "eps": eps } }),
        }
    }

    /// `eps,g,t_eq,label,valid`, axis2 outer. The second column holds the
    /// axis2 value (g for the standard phase diagram).
    pub fn from_regime_map(map: &RegimeMap, params: &ModelParams) -> Self {
        let mut rows = Vec::new();
        let a2 = map.axis2.as_ref().map(|a| a.values.clone()).unwrap_or_else(|| vec![f64::NAN]);
        for (r, &y) in a2.iter().enumerate() {
            for (c, &x) in map.axis1.values.iter().enumerate() {
                let t = map.teq_values[r][c];
                rows.push(vec![
                    Cell::Float(Some(x)),
                    Cell::Float(Some(y).filter(|y| y.is_finite())),
                    Cell::Float(t),
                    Cell::Text(map.labels[r][c].map(|l| l.as_str().to_string())),
                    Cell::Bool(t.is_some()),
                ]);
            }
        }
        Self {
            header: vec!["eps", "g", "t_eq", "label", "valid"],
            rows,
            meta: json!({
                "params": params,
                "grids": { "axis1": axis_meta(&map.axis1), "axis2": map.axis2.as_ref().map(axis_meta) },
            }),
        }
    }

    /// `n,time,polarization,purity,entropy,concurrence`
    pub fn from_series(series: &ObservableSeries, params: &ModelParams) -> Self {
        let rows = (0..series.len())
            .map(|i| {
                vec![
                    Cell::Int(series.periods[i]),
                    Cell::Float(Some(series.times[i])),
                    Cell::Float(Some(series.polarization[i])),
                    Cell::Float(Some(series.purity[i])),
                    Cell::Float(Some(series.entropy[i])),
                    Cell::Float(Some(series.concurrence[i])),
                ]
            })
            .collect();
        Self {
            header: vec!["n", "time", "polarization", "purity", "entropy", "concurrence"],
            rows,
            meta: json!({ "params": params }),
        }
    }

    /// `eps,n,time,polarization,purity,entropy,concurrence` for every cell of
    /// a one-axis trajectory map; invalid cells contribute no rows.
    pub fn from_trajectory_map(map: &TrajectoryMap, params: &ModelParams) -> Self {
        let mut rows = Vec::new();
        for (x, s) in map.axis1.values.iter().zip(&map.series) {
            let Some(s) = s else { continue };
            for i in 0..s.len() {
                rows.push(vec![
                    Cell::Float(Some(*x)),
                    Cell::Int(s.periods[i]),
                    Cell::Float(Some(s.times[i])),
                    Cell::Float(Some(s.polarization[i])),
                    Cell::Float(Some(s.purity[i])),
                    Cell::Float(Some(s.entropy[i])),
                    Cell::Float(Some(s.concurrence[i])),
                ]);
            }
        }
        Self {
            header: vec!["eps", "n", "time", "polarization", "purity", "entropy", "concurrence"],
            rows,
            meta: json!({ "params": params, "grids": { "axis1": axis_meta(&map.axis1) } }),
        }
    }

    /// `row,col,re,im` entries of a density matrix.
    pub fn from_density_matrix(rho: &DensityMatrix, params: &ModelParams) -> Self {
        let m = rho.matrix();
        let mut rows = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                rows.push(vec![
                    Cell::Int(i),
                    Cell::Int(j),
                    Cell::Float(Some(m[(i, j)].re)),
                    Cell::Float(Some(m[(i, j)].im)),
                ]);
            }
        }
        Self {
            header: vec!["row", "col", "re", "im"],
            rows,
            meta: json!({ "params": params }),
        }
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
                out
            }
            TableFormat::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: serde_json::Map<String, Value> =
                            self.header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "meta": self.meta, "records": records });
                let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

pub fn write_table(table: &Table, path: &Path, format: TableFormat) -> Result<()> {
    fs::write(path, table.render(format)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
