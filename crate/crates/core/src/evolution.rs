// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix propagation over Floquet periods.
//!
//! The production path exponentiates each segment's Lindbladian once and
//! composes them into the one-period map; trajectories are then repeated
//! matrix-vector products. [`evolve_rk4`] integrates the same piecewise
//! generator step by step and serves as an independent reference.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{lindblad_superoperator, ModelParams, Segment, SegmentTag, Superoperator, DIM};
use crate::numerics::{eig_general, eigh, expm, ComplexMatrix, C64};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Eigenvalues of the period map within this distance of 1 count as stationary.
pub const STEADY_TOL: f64 = 1e-9;

/// A 4x4 Hermitian, unit-trace, positive semidefinite state of the register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates shape, Hermiticity, trace and positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.shape() != (DIM, DIM) {
            return Err(Error::Shape(format!(
                "density matrix must be {DIM}x{DIM}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if let Some(problem) = state_defect(&m)? {
            return Err(Error::Contract(problem));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// Pure state `|psi><psi|` from an (unnormalized) amplitude vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != DIM {
            return Err(Error::Shape(format!(
                "state vector must have {DIM} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Contract("state vector has zero or non-finite norm".into()));
        }
        let psi: Vec<C64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::new(ComplexMatrix::outer(&psi, &psi))
    }

    /// Computational basis state |q1 q2>.
    pub fn basis(q1: u8, q2: u8) -> Self {
        assert!(q1 < 2 && q2 < 2, "qubit values are 0 or 1");
        let mut m = ComplexMatrix::zeros(DIM, DIM);
        let k = 2 * q1 as usize + q2 as usize;
        m[(k, k)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(DIM).scale_real(0.25))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

/// Describes the first violated state invariant, if any.
fn state_defect(m: &ComplexMatrix) -> Result<Option<String>> {
    let herm = m.hermiticity_defect();
    if herm > HERMITIAN_TOL {
        return Ok(Some(format!("not Hermitian (defect {herm:e})")));
    }
    let tr = m.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Ok(Some(format!("trace {tr} differs from 1")));
    }
    let min_eig = eigh(m)?.eigenvalues.last().map_or(0.0, |z| z.re);
    if min_eig < -POSITIVITY_TOL {
        return Ok(Some(format!("negative eigenvalue {min_eig:e}")));
    }
    Ok(None)
}

/// Named initial states accepted by the configuration layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedState {
    /// |00>
    Ground,
    /// |11>
    BothExcited,
    /// (|00> + |11>)/sqrt(2)
    BellPhiPlus,
}

impl NamedState {
    pub fn density_matrix(self) -> DensityMatrix {
        match self {
            NamedState::Ground => DensityMatrix::basis(0, 0),
            NamedState::BothExcited => DensityMatrix::basis(1, 1),
            NamedState::BellPhiPlus => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                let z = C64::new(0.0, 0.0);
                DensityMatrix::pure(&[h, z, z, h]).expect("Bell state is valid")
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedState::Ground => "ground",
            NamedState::BothExcited => "both-excited",
            NamedState::BellPhiPlus => "bell-phi-plus",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(NamedState::Ground),
            "both-excited" => Ok(NamedState::BothExcited),
            "bell-phi-plus" => Ok(NamedState::BellPhiPlus),
            other => Err(Error::Config(format!(
                "unknown initial state `{other}` (expected ground, both-excited or bell-phi-plus)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub params: ModelParams,
    pub sample_times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// True when samples sit exactly at t = nT.
    pub stroboscopic: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Floquet period index of each sample.
    pub fn period_indices(&self) -> Vec<usize> {
        self.sample_times
            .iter()
            .map(|t| (t / self.params.period + 1e-9).floor() as usize)
            .collect()
    }
}

/// One-period propagator `exp(L_int (T - t1)) exp(L_pulse t1)`.
pub fn period_map(p: &ModelParams) -> Result<Superoperator> {
    p.validate()?;
    let pulse = lindblad_superoperator(p, Segment::Pulse);
    let inter = lindblad_superoperator(p, Segment::Interaction);
    let u_pulse = expm(&pulse.matrix, p.pulse_duration())?;
    let u_inter = expm(&inter.matrix, p.interaction_duration())?;
    Ok(Superoperator {
        matrix: &u_inter * &u_pulse,
        tag: SegmentTag::PeriodMap,
    })
}

/// Repeatedly applies a precomputed period map, checking state invariants at
/// every period.
pub fn evolve_with_map(
    p: &ModelParams,
    map: &Superoperator,
    rho0: &DensityMatrix,
    n_periods: usize,
) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(n_periods + 1);
    let mut sample_times = Vec::with_capacity(n_periods + 1);
    let mut v = rho0.matrix().vectorize();
    states.push(rho0.clone());
    sample_times.push(0.0);
    for n in 1..=n_periods {
        v = map.matrix.apply(&v);
        let m = ComplexMatrix::unvectorize(&v, DIM)?;
        if let Some(detail) = state_defect(&m)? {
            return Err(Error::Drift { period: n, detail });
        }
        states.push(DensityMatrix(m));
        sample_times.push(n as f64 * p.period);
    }
    Ok(Trajectory {
        params: *p,
        sample_times,
        states,
        stroboscopic: true,
    })
}

/// States at t = nT for n = 0..=n_periods.
pub fn evolve_stroboscopic(
    p: &ModelParams,
    rho0: &DensityMatrix,
    n_periods: usize,
) -> Result<Trajectory> {
    if n_periods < 1 {
        return Err(Error::Contract("n_periods must be at least 1".into()));
    }
    let map = period_map(p)?;
    evolve_with_map(p, &map, rho0, n_periods)
}

/// Stroboscopic trajectory with `substeps` extra samples inside each segment,
/// obtained by exponentiating the segment generators at the sub-step size.
pub fn evolve_resolved(
    p: &ModelParams,
    rho0: &DensityMatrix,
    n_periods: usize,
    substeps: usize,
) -> Result<Trajectory> {
    p.validate()?;
    let parts = substeps.max(1);
    let mut steps = Vec::new();
    for (seg, dur) in [
        (Segment::Pulse, p.pulse_duration()),
        (Segment::Interaction, p.interaction_duration()),
    ] {
        let h = dur / parts as f64;
        steps.push((expm(&lindblad_superoperator(p, seg).matrix, h)?, h, parts));
    }
    let mut v = rho0.matrix().vectorize();
    let mut t = 0.0;
    let mut states = vec![rho0.clone()];
    let mut sample_times = vec![0.0];
    for n in 0..n_periods {
        let mut seg_start = n as f64 * p.period;
        for (prop, h, parts) in &steps {
            for k in 1..=*parts {
                v = prop.apply(&v);
                t = seg_start + k as f64 * h;
                let m = ComplexMatrix::unvectorize(&v, DIM)?;
                if let Some(detail) = state_defect(&m)? {
                    return Err(Error::Drift { period: n + 1, detail });
                }
                states.push(DensityMatrix(m));
                sample_times.push(t);
            }
            seg_start = t;
        }
        // pin period boundaries exactly
        *sample_times.last_mut().expect("nonempty") = (n + 1) as f64 * p.period;
    }
    Ok(Trajectory {
        params: *p,
        sample_times,
        states,
        stroboscopic: false,
    })
}

fn rk4_step(l: &ComplexMatrix, v: &[C64], h: f64) -> Vec<C64> {
    let k1 = l.apply(v);
    let tmp: Vec<C64> = v.iter().zip(&k1).map(|(a, k)| a + k * (0.5 * h)).collect();
    let k2 = l.apply(&tmp);
    let tmp: Vec<C64> = v.iter().zip(&k2).map(|(a, k)| a + k * (0.5 * h)).collect();
    let k3 = l.apply(&tmp);
    let tmp: Vec<C64> = v.iter().zip(&k3).map(|(a, k)| a + k * h).collect();
    let k4 = l.apply(&tmp);
    v.iter()
        .enumerate()
        .map(|(i, a)| a + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
        .collect()
}

/// Where [`rk4_integrate`] records samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RkSampling {
    /// After every integration step.
    EveryStep,
    /// Only at period boundaries t = nT (and at `t_end`).
    PeriodBoundaries,
}

/// Classic fourth-order Runge-Kutta integration of the piecewise-constant
/// generator, sampled after every step. Each segment is split into equal
/// steps no longer than `dt`, so segment boundaries are always samples.
pub fn evolve_rk4(p: &ModelParams, rho0: &DensityMatrix, t_end: f64, dt: f64) -> Result<Trajectory> {
    rk4_integrate(p, rho0, t_end, dt, RkSampling::EveryStep)
}

pub fn rk4_integrate(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
    sampling: RkSampling,
) -> Result<Trajectory> {
    p.validate()?;
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::Contract(format!("t_end must be positive, got {t_end}")));
    }
    let limit = p.pulse_duration().min(p.interaction_duration()) / 50.0;
    if dt.is_nan() || dt <= 0.0 || dt > limit {
        return Err(Error::Contract(format!(
            "rk4 step {dt} must be positive and resolve both segments (<= {limit:e})"
        )));
    }
    let segments = [
        (lindblad_superoperator(p, Segment::Pulse).matrix, p.pulse_duration()),
        (lindblad_superoperator(p, Segment::Interaction).matrix, p.interaction_duration()),
    ];
    let mut v = rho0.matrix().vectorize();
    let mut states = vec![rho0.clone()];
    let mut sample_times = vec![0.0];
    let mut seg_start = 0.0;
    let mut seg_index = 0usize;
    let eps_t = 1e-12 * p.period;
    while seg_start < t_end - eps_t {
        let (l, full) = &segments[seg_index % 2];
        let dur = full.min(t_end - seg_start);
        let steps = (dur / dt - 1e-9).ceil().max(1.0) as usize;
        let h = dur / steps as f64;
        for k in 1..=steps {
            v = rk4_step(l, &v, h);
            if sampling == RkSampling::EveryStep {
                states.push(DensityMatrix(ComplexMatrix::unvectorize(&v, DIM)?));
                sample_times.push(seg_start + k as f64 * h);
            }
        }
        seg_start += dur;
        seg_index += 1;
        if sampling == RkSampling::EveryStep {
            *sample_times.last_mut().expect("nonempty") = seg_start;
        } else if seg_index.is_multiple_of(2) || seg_start >= t_end - eps_t {
            states.push(DensityMatrix(ComplexMatrix::unvectorize(&v, DIM)?));
            sample_times.push(seg_start);
        }
    }
    Ok(Trajectory {
        params: *p,
        sample_times,
        states,
        stroboscopic: sampling == RkSampling::PeriodBoundaries && (t_end / p.period).fract() == 0.0,
    })
}

/// Eigenvector of `m` for the eigenvalue closest to `target`, reshaped to a
/// unit-trace Hermitian matrix. Errors if a second eigenvalue lies within
/// `tol` of the target.
fn fixed_point(m: &ComplexMatrix, target: C64, tol: f64) -> Result<(ComplexMatrix, C64)> {
    let eig = eig_general(m)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        (eig.eigenvalues[a] - target)
            .norm()
            .total_cmp(&(eig.eigenvalues[b] - target).norm())
    });
    let best = order[0];
    let second = order[1];
    if (eig.eigenvalues[second] - target).norm() < tol {
        return Err(Error::DegenerateSteadyState {
            first: format!("{}", eig.eigenvalues[best]),
            second: format!("{}", eig.eigenvalues[second]),
            tol,
        });
    }
    let dim = (m.rows() as f64).sqrt().round() as usize;
    let raw = ComplexMatrix::unvectorize(&eig.eigenvectors.column(best), dim)?;
    let tr = raw.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::Numerical(
            "stationary eigenvector is traceless and cannot be normalized".into(),
        ));
    }
    let scaled = raw.scale(tr.inv());
    let herm = (&scaled + &scaled.adjoint()).scale_real(0.5);
    Ok((herm, eig.eigenvalues[best]))
}

/// Stationary state of the period map.
pub fn steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    if !p.has_dissipation() {
        return Err(Error::Contract(
            "steady state requires g1 > 0 or g2 > 0".into(),
        ));
    }
    let map = period_map(p)?;
    steady_state_of_map(&map)
}

pub fn steady_state_of_map(map: &Superoperator) -> Result<DensityMatrix> {
    let (rho, _) = fixed_point(&map.matrix, C64::new(1.0, 0.0), STEADY_TOL)?;
    let rho = DensityMatrix::new(rho)?;
    let v = rho.matrix().vectorize();
    let pv = map.matrix.apply(&v);
    let resid = pv.iter().zip(&v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    if resid > 1e-8 {
        return Err(Error::Numerical(format!(
            "steady state is not a fixed point of the period map (residual {resid:e})"
        )));
    }
    Ok(rho)
}

/// Null vector of a time-independent two-qubit generator.
pub fn generator_steady_state(l: &Superoperator) -> Result<DensityMatrix> {
    DensityMatrix::new(generator_null_state(&l.matrix)?)
}

/// Unit-trace null vector of a `d^2 x d^2` generator, for any `d`.
pub fn generator_null_state(l: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(fixed_point(l, C64::new(0.0, 0.0), STEADY_TOL)?.0)
}
