// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use driven_qubits::evolution::{
    evolve_with_map, generator_null_state, period_map, rk4_integrate, DensityMatrix, NamedState, RkSampling,
};
use driven_qubits::model::{lindbladian, single_qubit, ModelParams, PauliOp};
use driven_qubits::numerics::{eigvals_general, expm, ComplexMatrix, C64};
use driven_qubits::observables::{concurrence, polarization, trace_distance};
use driven_qubits::spectral::{
    classify_regimes, curve_pairs, gap_from_period_map, plateau_edges, spectral_gap, teq_curve, DEFAULT_SLOPE_THRESHOLD,
    STATIONARY_TOL,
};
use driven_qubits::sweep::{
    concurrence_death_time, run_sweep, write_table, Axis, SweepOutput, SweepSpec, Table, TableFormat,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target.abs()
}

fn regime_boundaries() -> Outcome {
    let grid = common::linspace(0.001, 0.12, 300);
    let mut lines = Vec::new();
    let mut ok = true;
    for g in [0.01, 0.02, 0.05] {
        let p = ModelParams { g, g1: 0.001, g2: 0.00025, n_th: 0.08, period: 1.0, ..Default::default() };
        let curve = teq_curve(&p, &grid).map_err(|e| e.to_string())?;
        let labels = classify_regimes(&curve_pairs(&curve), DEFAULT_SLOPE_THRESHOLD).map_err(|e| e.to_string())?;
        let (lo_want, hi_want) = (g * p.period / 3.0, g * p.period);
        match plateau_edges(&labels) {
            Some((lo, hi)) => {
                let good = within(lo, lo_want, 0.2) && within(hi, hi_want, 0.2);
                ok &= good;
                lines.push(format!("g={g}: edges [{lo:.4}, {hi:.4}] vs [{lo_want:.4}, {hi_want:.4}]"));
            }
            None => {
                ok = false;
                lines.push(format!("g={g}: no constant interval"));
            }
        }
    }
    check(ok, lines.join("; "))
}

fn plateau_temperature_ordering() -> Outcome {
    let mut t = Vec::new();
    for n_th in [0.0, 0.3, 0.6] {
        let p = ModelParams { epsilon: 0.03, g: 0.05, g1: 0.01, g2: 0.0025, n_th, ..Default::default() };
        t.push(spectral_gap(&p).map_err(|e| e.to_string())?.t_eq);
    }
    let ok = t[0] > 1.05 * t[1] && t[1] > 1.05 * t[2];
    check(ok, format!("t_eq(n_th=0, 0.3, 0.6) = {:.3}, {:.3}, {:.3}", t[0], t[1], t[2]))
}

fn gap_decay_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let rho0 = NamedState::BothExcited.density_matrix();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = common::random_draw(&mut rng);
        let gap = spectral_gap(&p).map_err(|e| e.to_string())?.gap;
        let fit = common::fitted_decay_rate(&p, &rho0, 60.0, 2_000_000);
        let rel = (fit - gap).abs() / gap;
        worst = worst.max(rel);
    }
    check(worst <= 0.05, format!("10 draws, worst relative mismatch {worst:.2e}"))
}

fn sudden_death_with_polarization() -> Outcome {
    let p = ModelParams::default();
    let rho0 = NamedState::BothExcited.density_matrix();
    let n_max = 500;
    let death = concurrence_death_time(&p, &rho0, n_max).map_err(|e| e.to_string())?;
    let Some(n_star) = death else {
        return Err(format!("concurrence survives to {n_max}"));
    };
    let map = period_map(&p).map_err(|e| e.to_string())?;
    let traj = evolve_with_map(&p, &map, &rho0, n_max).map_err(|e| e.to_string())?;
    let later = traj.states[n_star + 1..]
        .iter()
        .map(|r| polarization(r).map(f64::abs))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let max_pol = later.iter().copied().fold(0.0, f64::max);
    check(max_pol > 0.1, format!("n* = {n_star}, max |polarization| after n* = {max_pol:.3}"))
}

/// Death times with (g1, g2) scaled by k from the given base.
fn death_times(base: &ModelParams, n_max: usize) -> Result<Vec<Option<usize>>, String> {
    let rho0 = NamedState::BothExcited.density_matrix();
    [1.0, 2.0, 4.0]
        .iter()
        .map(|&k| concurrence_death_time(&base.with_rates_scaled(k), &rho0, n_max).map_err(|e| e.to_string()))
        .collect()
}

fn scaling_ok(n: &[Option<usize>]) -> bool {
    match (n[0], n[1], n[2]) {
        (Some(a), Some(b), Some(c)) if a > 0 => {
            within(2.0 * b as f64, a as f64, 0.25) && within(4.0 * c as f64, a as f64, 0.25)
        }
        _ => false,
    }
}

fn death_time_scaling() -> Outcome {
    let base = ModelParams { g1: 2e-4, g2: 5e-5, ..Default::default() };
    let n = death_times(&base, 8000)?;
    let reference = death_times(&ModelParams::default(), 2000)?;
    check(
        scaling_ok(&n),
        format!(
            "base g1=2e-4, g2=5e-5: n*(k=1,2,4) = {n:?}; at default rates (informational) {reference:?}"
        ),
    )
}

fn concurrence_suppression() -> Outcome {
    let rho0 = NamedState::BothExcited.density_matrix();
    let mut peaks = Vec::new();
    for g1 in [0.001, 0.005, 0.01] {
        let p = ModelParams { g1, g2: g1 / 4.0, ..Default::default() };
        let map = period_map(&p).map_err(|e| e.to_string())?;
        let traj = evolve_with_map(&p, &map, &rho0, 500).map_err(|e| e.to_string())?;
        let peak = traj.states[1..]
            .iter()
            .map(concurrence)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .fold(0.0, f64::max);
        peaks.push(peak);
    }
    let ok = peaks[0] > peaks[1] && peaks[1] > peaks[2];
    check(ok, format!("max C over 1..500 = {:.4}, {:.4}, {:.4}", peaks[0], peaks[1], peaks[2]))
}

fn oracle_suites() -> Outcome {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    let bell = DensityMatrix::pure(&[h, z, z, h]).map_err(|e| e.to_string())?;
    let product = DensityMatrix::basis(0, 1);
    let werner_m = &bell.matrix().scale_real(0.5) + &DensityMatrix::maximally_mixed().matrix().scale_real(0.5);
    let werner = DensityMatrix::new(werner_m).map_err(|e| e.to_string())?;
    let c = [&bell, &product, &werner]
        .iter()
        .map(|r| concurrence(r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let conc_ok = (c[0] - 1.0).abs() < 1e-8 && c[1].abs() < 1e-8 && (c[2] - 0.25).abs() < 1e-8;

    let (g1, g2, n_th) = (0.01, 0.0025, 0.08);
    let chans = [
        (single_qubit(PauliOp::Plus), g1 * (1.0 + n_th)),
        (single_qubit(PauliOp::Minus), g1 * n_th),
        (single_qubit(PauliOp::Z), g2),
    ];
    let l = lindbladian(&ComplexMatrix::zeros(2, 2), &chans);
    let ss = generator_null_state(&l).map_err(|e| e.to_string())?;
    let pe = ss[(1, 1)].re;
    let pe_want = n_th / (1.0 + 2.0 * n_th);
    let ss_ok = (pe - pe_want).abs() < 1e-10;
    let map = expm(&l, 1.0).map_err(|e| e.to_string())?;
    let gap = gap_from_period_map(&map, 1.0, STATIONARY_TOL).map_err(|e| e.to_string())?.gap;
    let gap_ok = (gap - 0.0108).abs() < 1e-8;

    let p = ModelParams::default();
    let rho0 = NamedState::BothExcited.density_matrix();
    let exact = evolve_with_map(&p, &period_map(&p).map_err(|e| e.to_string())?, &rho0, 100).map_err(|e| e.to_string())?;
    let rk = rk4_integrate(&p, &rho0, 100.0 * p.period, 2.5e-4, RkSampling::PeriodBoundaries)
        .map_err(|e| e.to_string())?;
    let mut rk_err = 0.0f64;
    for (a, b) in exact.states.iter().zip(&rk.states) {
        rk_err = rk_err.max(trace_distance(a.matrix(), b.matrix()).map_err(|e| e.to_string())?);
    }
    let rk_ok = rk.states.len() == exact.states.len() && rk_err < 1e-8;

    check(
        conc_ok && ss_ok && gap_ok && rk_ok,
        format!(
            "concurrence {c:?}; p_e {pe:.12} vs {pe_want:.12}; gap {gap:.12}; RK4 max trace distance {rk_err:.2e}"
        ),
    )
}

fn cptp_invariants() -> Outcome {
    let p = ModelParams::default();
    let map = period_map(&p).map_err(|e| e.to_string())?;
    let rho0 = NamedState::BothExcited.density_matrix();
    // evolve_with_map checks trace, Hermiticity and positivity every period
    let traj = evolve_with_map(&p, &map, &rho0, 10_000).map_err(|e| e.to_string())?;
    let radius = eigvals_general(&map.matrix)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);

    let mut spec = SweepSpec::new(p, Axis::new("epsilon", common::linspace(0.001, 0.12, 24)));
    spec.axis2 = Some(Axis::new("g", vec![0.01, 0.02, 0.05]));
    spec.outputs = BTreeSet::from([SweepOutput::Regime]);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for workers in [1, 4] {
        spec.workers = workers;
        let map = run_sweep(&spec).map_err(|e| e.to_string())?.regime_map.ok_or("no regime map")?;
        let path = dir.path().join(format!("w{workers}.csv"));
        write_table(&Table::from_regime_map(&map, &p), &path, TableFormat::Csv).map_err(|e| e.to_string())?;
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let identical = bytes[0] == bytes[1];
    check(
        traj.len() == 10_001 && radius <= 1.0 + 1e-10 && identical,
        format!("10^4 periods valid; spectral radius {radius:.15}; 1 vs 4 worker CSV identical: {identical}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 regime boundaries", Duration::from_secs(30), regime_boundaries),
        ("2 plateau temperature ordering", Duration::from_secs(5), plateau_temperature_ordering),
        ("3 gap-decay consistency", Duration::from_secs(60), gap_decay_consistency),
        ("4 sudden death with polarization", Duration::from_secs(10), sudden_death_with_polarization),
        ("5 death-time scaling", Duration::from_secs(30), death_time_scaling),
        ("6 concurrence suppression", Duration::from_secs(15), concurrence_suppression),
        ("7 oracle suites", Duration::from_secs(60), oracle_suites),
        ("8 CPTP invariants", Duration::from_secs(120), cptp_invariants),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) => (elapsed <= limit, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name} ({:.2}s, limit {}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
