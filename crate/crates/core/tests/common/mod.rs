// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use driven_qubits::evolution::{period_map, steady_state, DensityMatrix};
use driven_qubits::model::{ModelParams, DIM};
use driven_qubits::numerics::{ComplexMatrix, C64};
use driven_qubits::observables::trace_norm_half;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Rates log-uniform in [1e-3, 1e-1], epsilon uniform in [0.01, 0.1].
pub fn random_draw(rng: &mut ChaCha8Rng) -> ModelParams {
    ModelParams {
        g1: log_uniform(rng, 1e-3, 1e-1),
        g2: log_uniform(rng, 1e-3, 1e-1),
        epsilon: rng.gen_range(0.01..0.1),
        ..Default::default()
    }
}

/// Decay rate of `|rho(nT) - rho_ss|_tr` fitted along a stroboscopic run.
///
/// The deviation `rho(nT) - rho_ss` is propagated directly. The map is
/// linear and trace preserving, so the deviation stays traceless; removing
/// the rounding-induced trace each period keeps the stationary mode out and
/// the deviation retains full relative precision far below machine epsilon
/// of the state itself. The run continues until the trace distance has
/// fallen by `decades` orders of magnitude, and `ln D` is regressed on time
/// over the second half, where every faster mode is negligible.
pub fn fitted_decay_rate(p: &ModelParams, rho0: &DensityMatrix, decades: f64, max_periods: usize) -> f64 {
    let map = period_map(p).expect("period map");
    let rho_ss = steady_state(p).expect("steady state");
    let ss_vec = rho_ss.matrix().vectorize();
    let mut v: Vec<C64> = rho0
        .matrix()
        .vectorize()
        .iter()
        .zip(&ss_vec)
        .map(|(a, b)| a - b)
        .collect();
    let dist = |v: &[C64]| trace_norm_half(&ComplexMatrix::unvectorize(v, DIM).unwrap()).unwrap();
    let d0 = dist(&v);
    let stop = d0 * 10f64.powf(-decades);
    let mut samples = vec![(0.0, d0.ln())];
    for n in 1..=max_periods {
        v = map.matrix.apply(&v);
        let tr: C64 = (0..DIM).map(|i| v[i * (DIM + 1)]).sum();
        for (x, s) in v.iter_mut().zip(&ss_vec) {
            *x -= tr * s;
        }
        let d = dist(&v);
        samples.push((n as f64 * p.period, d.ln()));
        if d < stop {
            break;
        }
    }
    let tail = &samples[samples.len() / 2..];
    let k = tail.len() as f64;
    let mx = tail.iter().map(|s| s.0).sum::<f64>() / k;
    let my = tail.iter().map(|s| s.1).sum::<f64>() / k;
    let sxy: f64 = tail.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|s| (s.0 - mx).powi(2)).sum();
    -sxy / sxx
}
