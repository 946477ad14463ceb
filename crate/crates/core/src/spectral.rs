// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Equilibration time from the spectrum of the one-period propagator, and
//! classification of `t_eq(eps)` into decreasing / constant / increasing
//! regimes.
//!
//! For a time-periodic generator the Lindbladian itself has no fixed
//! spectrum; the well-defined object is the period map `P`. Its eigenvalues
//! `mu_i` give effective rates `ln(mu_i) / T`, which coincide with the
//! Lindbladian eigenvalues when the generator is constant. The gap is
//! `-max Re ln(mu_i) / T = -ln(max |mu_i|) / T` over non-stationary modes.

use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::period_map;
use crate::model::ModelParams;
use crate::numerics::{eigvals_general, ComplexMatrix, C64};
use crate::sweep::par_map;

/// Modes with `|mu| > 1 - STATIONARY_TOL` are treated as stationary.
pub const STATIONARY_TOL: f64 = 1e-9;
/// Default relative-slope threshold separating the constant regime.
pub const DEFAULT_SLOPE_THRESHOLD: f64 = 1e-2;

#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub period_eigenvalues: Vec<C64>,
    /// `ln(mu) / T` on the principal branch, aligned with `period_eigenvalues`.
    pub effective_rates: Vec<C64>,
    pub gap: f64,
    pub t_eq: f64,
    pub steady_count: usize,
}

/// Gap analysis of an arbitrary CPTP period map.
pub fn gap_from_period_map(map: &ComplexMatrix, period: f64, stationary_tol: f64) -> Result<SpectralResult> {
    let mu = eigvals_general(map)?;
    let effective_rates: Vec<C64> = mu.iter().map(|z| z.ln() / period).collect();
    let cutoff = 1.0 - stationary_tol;
    let steady_count = mu.iter().filter(|z| z.norm() > cutoff).count();
    let slowest = mu
        .iter()
        .map(|z| z.norm())
        .filter(|&r| r <= cutoff)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    let Some(slowest) = slowest else {
        return Err(Error::NoGap { threshold: stationary_tol });
    };
    if steady_count > 1 {
        warn!("{steady_count} period-map eigenvalues within {stationary_tol:e} of the unit circle");
    }
    let gap = -slowest.ln() / period;
    Ok(SpectralResult {
        period_eigenvalues: mu,
        effective_rates,
        gap,
        t_eq: 1.0 / gap,
        steady_count,
    })
}

/// Spectral gap and equilibration time at one parameter point.
pub fn spectral_gap(p: &ModelParams) -> Result<SpectralResult> {
    spectral_gap_with(p, STATIONARY_TOL)
}

pub fn spectral_gap_with(p: &ModelParams, stationary_tol: f64) -> Result<SpectralResult> {
    let map = period_map(p)?;
    gap_from_period_map(&map.matrix, p.period, stationary_tol)
}

/// One evaluated point of a `t_eq(eps)` curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub eps: f64,
    pub t_eq: Option<f64>,
    pub gap: Option<f64>,
    /// Failure description for invalid points.
    pub error: Option<String>,
}

impl CurvePoint {
    pub fn evaluate(p: &ModelParams) -> Self {
        match spectral_gap(p) {
            Ok(r) => Self {
                eps: p.epsilon,
                t_eq: Some(r.t_eq),
                gap: Some(r.gap),
                error: None,
            },
            Err(e) => Self {
                eps: p.epsilon,
                t_eq: None,
                gap: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn is_valid(&self) -> bool {
        self.t_eq.is_some()
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Contract(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

/// `t_eq` at every grid value of epsilon, other parameters fixed. Points that
/// fail are marked invalid rather than aborting the curve.
pub fn teq_curve(p: &ModelParams, eps_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    teq_curve_with_workers(p, eps_grid, 0)
}

/// As [`teq_curve`] with an explicit worker count (0 = all cores).
pub fn teq_curve_with_workers(p: &ModelParams, eps_grid: &[f64], workers: usize) -> Result<Vec<CurvePoint>> {
    check_grid("epsilon", eps_grid)?;
    for &eps in eps_grid {
        ModelParams { epsilon: eps, ..*p }.validate()?;
    }
    Ok(par_map(workers, eps_grid, |&eps| {
        CurvePoint::evaluate(&ModelParams { epsilon: eps, ..*p })
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeLabel {
    Decreasing,
    Constant,
    Increasing,
}

impl RegimeLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeLabel::Decreasing => "decreasing",
            RegimeLabel::Constant => "constant",
            RegimeLabel::Increasing => "increasing",
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            RegimeLabel::Decreasing => RegimeLabel::Increasing,
            RegimeLabel::Constant => RegimeLabel::Constant,
            RegimeLabel::Increasing => RegimeLabel::Decreasing,
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Labels each point of a curve by its centred relative slope
/// `(t[i+1] - t[i-1]) / (t[i] |eps[i+1] - eps[i-1]|) * span`, taken along
/// the curve order. `|s| < threshold` is constant; otherwise the sign
/// decides. Endpoints inherit their neighbour's label. Points that are
/// invalid, or whose neighbours are, get `None`.
pub fn classify_regimes(curve: &[(f64, Option<f64>)], threshold: f64) -> Result<Vec<(f64, Option<RegimeLabel>)>> {
    let n = curve.len();
    if n < 3 {
        return Err(Error::Contract(format!("classification needs at least 3 points, got {n}")));
    }
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::Contract(format!("slope threshold must be positive, got {threshold}")));
    }
    let span = (curve[n - 1].0 - curve[0].0).abs();
    let mut labels: Vec<Option<RegimeLabel>> = vec![None; n];
    for i in 1..n - 1 {
        let (Some(lo), Some(mid), Some(hi)) = (curve[i - 1].1, curve[i].1, curve[i + 1].1) else {
            continue;
        };
        let de = (curve[i + 1].0 - curve[i - 1].0).abs();
        if de == 0.0 || mid == 0.0 {
            continue;
        }
        let s = (hi - lo) / (mid * de) * span;
        labels[i] = Some(if s.abs() < threshold {
            RegimeLabel::Constant
        } else if s > 0.0 {
            RegimeLabel::Increasing
        } else {
            RegimeLabel::Decreasing
        });
    }
    if curve[0].1.is_some() {
        labels[0] = labels[1];
    }
    if curve[n - 1].1.is_some() {
        labels[n - 1] = labels[n - 2];
    }
    Ok(curve.iter().map(|c| c.0).zip(labels).collect())
}

/// Edges of the first constant run that is followed by an increasing run:
/// the plateau between the decreasing and increasing regimes.
pub fn plateau_edges(labels: &[(f64, Option<RegimeLabel>)]) -> Option<(f64, f64)> {
    let mut i = 0;
    while i < labels.len() {
        if labels[i].1 != Some(RegimeLabel::Constant) {
            i += 1;
            continue;
        }
        let start = i;
        while i < labels.len() && labels[i].1 == Some(RegimeLabel::Constant) {
            i += 1;
        }
        if i < labels.len() && labels[i].1 == Some(RegimeLabel::Increasing) {
            return Some((labels[start].0, labels[i - 1].0));
        }
    }
    None
}

/// Convenience: `(eps, t_eq)` pairs for [`classify_regimes`].
pub fn curve_pairs(curve: &[CurvePoint]) -> Vec<(f64, Option<f64>)> {
    curve.iter().map(|c| (c.eps, c.t_eq)).collect()
}
