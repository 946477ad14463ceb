// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Floquet model: operators, Hamiltonian segments, bath channels
//! and vectorized Lindbladians.
//!
//! Basis ordering is |q1 q2> in {|00>, |01>, |10>, |11>} with
//! `sigma_z |0> = +|0>`. The ground state of each qubit is |0> (polarization
//! +1) and |1> is the excited state, so the energy-lowering jump operator is
//! |0><1| = (sigma_x + i sigma_y)/2 and the energy-raising one is its adjoint.
//!
//! Superoperators use column stacking, `vec(A X B) = (B^T kron A) vec(X)`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{pauli as sp, ComplexMatrix, C64};

/// Hilbert-space dimension of the register.
pub const DIM: usize = 4;
/// Dimension of the vectorized density matrix.
pub const LIOUVILLE_DIM: usize = DIM * DIM;

/// Physical and protocol parameters. Rates and couplings are in units of
/// inverse time with hbar = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Pulse-area detuning: each flip pulse rotates by `pi - 2 epsilon`.
    pub epsilon: f64,
    /// Qubit-qubit XY coupling.
    pub g: f64,
    /// Bath coupling (relaxation).
    pub g1: f64,
    /// Pure-dephasing coupling.
    pub g2: f64,
    /// Thermal occupation of the bath.
    pub n_th: f64,
    /// Floquet period.
    #[serde(alias = "T")]
    pub period: f64,
    /// Fraction of the period occupied by the flip pulse.
    pub pulse_fraction: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            epsilon: 0.0436,
            g: 0.05,
            g1: 0.01,
            g2: 0.0025,
            n_th: 0.08,
            period: 1.0,
            pulse_fraction: 0.5,
            delta1: 0.0,
            delta2: 0.0,
        }
    }
}

impl ModelParams {
    /// Checks every hard bound, naming the first offending field.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("epsilon", self.epsilon),
            ("g", self.g),
            ("g1", self.g1),
            ("g2", self.g2),
            ("n_th", self.n_th),
            ("T", self.period),
            ("pulse_fraction", self.pulse_fraction),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::param(name, format!("{v} is not finite")));
        }
        if self.period <= 0.0 {
            return Err(Error::param("T", format!("must be > 0, got {}", self.period)));
        }
        if !(self.pulse_fraction > 0.0 && self.pulse_fraction < 1.0) {
            return Err(Error::param(
                "pulse_fraction",
                format!("must lie in (0, 1), got {}", self.pulse_fraction),
            ));
        }
        if !(0.0..FRAC_PI_2).contains(&self.epsilon) {
            return Err(Error::param(
                "epsilon",
                format!("must lie in [0, pi/2), got {}", self.epsilon),
            ));
        }
        for (name, v) in [("g1", self.g1), ("g2", self.g2), ("n_th", self.n_th)] {
            if v < 0.0 {
                return Err(Error::param(name, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Soft diagnostics that never block a run.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.g1 < SQRT_2 * self.g2 {
            out.push(format!(
                "g1 < sqrt(2)*g2 ({} < {:.6}): relaxation is weaker than the T1 <= 2 T2 bound allows",
                self.g1,
                SQRT_2 * self.g2
            ));
        }
        out
    }

    pub fn pulse_duration(&self) -> f64 {
        self.pulse_fraction * self.period
    }

    pub fn interaction_duration(&self) -> f64 {
        self.period - self.pulse_duration()
    }

    /// Pulse amplitude alpha with `alpha * t1 = pi - 2 epsilon`.
    pub fn pulse_amplitude(&self) -> f64 {
        (PI - 2.0 * self.epsilon) / self.pulse_duration()
    }

    pub fn has_dissipation(&self) -> bool {
        self.g1 > 0.0 || self.g2 > 0.0
    }

    /// Copy with relaxation and dephasing couplings multiplied by `k`.
    pub fn with_rates_scaled(&self, k: f64) -> Self {
        Self {
            g1: self.g1 * k,
            g2: self.g2 * k,
            ..*self
        }
    }

    /// Reads a field by its config/CLI name.
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "epsilon" | "eps" => self.epsilon,
            "g" => self.g,
            "g1" => self.g1,
            "g2" => self.g2,
            "n_th" | "nth" => self.n_th,
            "period" | "T" => self.period,
            "pulse_fraction" => self.pulse_fraction,
            "delta1" => self.delta1,
            "delta2" => self.delta2,
            _ => return None,
        })
    }

    /// Sets a field by its config/CLI name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "epsilon" | "eps" => &mut self.epsilon,
            "g" => &mut self.g,
            "g1" => &mut self.g1,
            "g2" => &mut self.g2,
            "n_th" | "nth" => &mut self.n_th,
            "period" | "T" => &mut self.period,
            "pulse_fraction" => &mut self.pulse_fraction,
            "delta1" => &mut self.delta1,
            "delta2" => &mut self.delta2,
            _ => return Err(Error::Config(format!("unknown parameter name `{name}`"))),
        };
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliOp {
    X,
    Y,
    Z,
    /// (sigma_x + i sigma_y)/2 = |0><1|
    Plus,
    /// (sigma_x - i sigma_y)/2 = |1><0|
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Qubit {
    One,
    Two,
}

/// Single-qubit operator embedded in the register: `sigma kron I` for qubit 1,
/// `I kron sigma` for qubit 2.
pub fn pauli(which: PauliOp, qubit: Qubit) -> ComplexMatrix {
    let s = single_qubit(which);
    match qubit {
        Qubit::One => s.kron(&sp::id2()),
        Qubit::Two => sp::id2().kron(&s),
    }
}

pub fn single_qubit(which: PauliOp) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    match which {
        PauliOp::X => sp::x(),
        PauliOp::Y => sp::y(),
        PauliOp::Z => sp::z(),
        PauliOp::Plus => (&sp::x() + &sp::y().scale(i)).scale_real(0.5),
        PauliOp::Minus => (&sp::x() - &sp::y().scale(i)).scale_real(0.5),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Segment {
    Pulse,
    Interaction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentTag {
    Pulse,
    Interaction,
    PeriodMap,
}

impl From<Segment> for SegmentTag {
    fn from(s: Segment) -> Self {
        match s {
            Segment::Pulse => SegmentTag::Pulse,
            Segment::Interaction => SegmentTag::Interaction,
        }
    }
}

fn detuning_terms(p: &ModelParams) -> ComplexMatrix {
    let z1 = pauli(PauliOp::Z, Qubit::One).scale_real(0.5 * p.delta1);
    let z2 = pauli(PauliOp::Z, Qubit::Two).scale_real(0.5 * p.delta2);
    &z1 + &z2
}

/// Hamiltonian acting during one segment of the period. Detuning terms
/// `(delta_i/2) sigma_i^z` are present in both segments.
pub fn hamiltonian_segment(p: &ModelParams, segment: Segment) -> ComplexMatrix {
    let body = match segment {
        Segment::Pulse => {
            let sx = &pauli(PauliOp::X, Qubit::One) + &pauli(PauliOp::X, Qubit::Two);
            sx.scale_real(0.5 * p.pulse_amplitude())
        }
        Segment::Interaction => {
            let xx = &pauli(PauliOp::X, Qubit::One) * &pauli(PauliOp::X, Qubit::Two);
            let yy = &pauli(PauliOp::Y, Qubit::One) * &pauli(PauliOp::Y, Qubit::Two);
            (&xx + &yy).scale_real(p.g)
        }
    };
    &body + &detuning_terms(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelLabel {
    RaiseQ1,
    RaiseQ2,
    LowerQ1,
    LowerQ2,
    DephaseQ1,
    DephaseQ2,
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelLabel::RaiseQ1 => "raise-q1",
            ChannelLabel::RaiseQ2 => "raise-q2",
            ChannelLabel::LowerQ1 => "lower-q1",
            ChannelLabel::LowerQ2 => "lower-q2",
            ChannelLabel::DephaseQ1 => "dephase-q1",
            ChannelLabel::DephaseQ2 => "dephase-q2",
        })
    }
}

#[derive(Clone, Debug)]
pub struct JumpChannel {
    pub operator: ComplexMatrix,
    pub rate: f64,
    pub label: ChannelLabel,
}

/// The six bath channels: thermal lowering `g1 (1 + n_th)`, thermal raising
/// `g1 n_th` and sigma_z dephasing `g2`, for each qubit.
pub fn jump_channels(p: &ModelParams) -> Vec<JumpChannel> {
    let lower = p.g1 * (1.0 + p.n_th);
    let raise = p.g1 * p.n_th;
    let mut out = Vec::with_capacity(6);
    for (q, labels) in [
        (Qubit::One, [ChannelLabel::LowerQ1, ChannelLabel::RaiseQ1, ChannelLabel::DephaseQ1]),
        (Qubit::Two, [ChannelLabel::LowerQ2, ChannelLabel::RaiseQ2, ChannelLabel::DephaseQ2]),
    ] {
        out.push(JumpChannel {
            operator: pauli(PauliOp::Plus, q),
            rate: lower,
            label: labels[0],
        });
        out.push(JumpChannel {
            operator: pauli(PauliOp::Minus, q),
            rate: raise,
            label: labels[1],
        });
        out.push(JumpChannel {
            operator: pauli(PauliOp::Z, q),
            rate: p.g2,
            label: labels[2],
        });
    }
    out
}

#[derive(Clone, Debug)]
pub struct Superoperator {
    pub matrix: ComplexMatrix,
    pub tag: SegmentTag,
}

impl Superoperator {
    /// `|vec(I)^dagger S|`, the trace-preservation defect of a generator.
    pub fn trace_defect(&self) -> f64 {
        left_identity_action(&self.matrix).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|vec(I)^dagger P - vec(I)^dagger|`, the trace-preservation defect of a map.
    pub fn map_trace_defect(&self) -> f64 {
        let d = (self.matrix.rows() as f64).sqrt().round() as usize;
        left_identity_action(&self.matrix)
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let target = if k % (d + 1) == 0 { 1.0 } else { 0.0 };
                (z - C64::new(target, 0.0)).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Applies the superoperator to a density matrix.
    pub fn act(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let v = self.matrix.apply(&rho.vectorize());
        ComplexMatrix::unvectorize(&v, rho.rows())
    }
}

/// Row vector `vec(I)^dagger M`.
fn left_identity_action(m: &ComplexMatrix) -> Vec<C64> {
    let d = (m.rows() as f64).sqrt().round() as usize;
    (0..m.cols())
        .map(|j| (0..d).map(|i| m[(i * (d + 1), j)]).sum())
        .collect()
}

/// Lindblad generator for Hamiltonian `h` and weighted jump operators, in
/// column-stacking convention. Works for any Hilbert dimension.
pub fn lindbladian(h: &ComplexMatrix, channels: &[(ComplexMatrix, f64)]) -> ComplexMatrix {
    let d = h.rows();
    let id = ComplexMatrix::identity(d);
    let minus_i = C64::new(0.0, -1.0);
    let mut l = (&id.kron(h) - &h.transpose().kron(&id)).scale(minus_i);
    for (a, rate) in channels {
        if *rate == 0.0 {
            continue;
        }
        let ada = &a.adjoint() * a;
        let jump = a.conj().kron(a);
        let left = id.kron(&ada).scale_real(0.5);
        let right = ada.transpose().kron(&id).scale_real(0.5);
        let d_k = &(&jump - &left) - &right;
        l = &l + &d_k.scale_real(*rate);
    }
    l
}

/// Lindbladian of one Floquet segment; dissipation acts in both segments.
pub fn lindblad_superoperator(p: &ModelParams, segment: Segment) -> Superoperator {
    let h = hamiltonian_segment(p, segment);
    let channels: Vec<(ComplexMatrix, f64)> = jump_channels(p)
        .into_iter()
        .map(|c| (c.operator, c.rate))
        .collect();
    Superoperator {
        matrix: lindbladian(&h, &channels),
        tag: segment.into(),
    }
}
