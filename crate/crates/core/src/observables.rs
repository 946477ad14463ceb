// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! State diagnostics: total polarization, purity, reduced-state entropy and
//! two-qubit concurrence.

use crate::error::{Error, Result};
use crate::evolution::{DensityMatrix, Trajectory};
use crate::model::{pauli, PauliOp, Qubit};
use crate::numerics::{eigh, eigvals_general, herm_sqrt, pauli as sp, ComplexMatrix, C64};

/// Imaginary residue in `Tr[rho O]` tolerated for Hermitian `O`.
const IMAG_RESIDUE_TOL: f64 = 1e-8;
const REJECT: f64 = 1e-8;

/// `Tr[rho (sigma_1^z + sigma_2^z)]`, in [-2, 2].
pub fn polarization(rho: &DensityMatrix) -> Result<f64> {
    let sz = &pauli(PauliOp::Z, Qubit::One) + &pauli(PauliOp::Z, Qubit::Two);
    let v = (rho.matrix() * &sz).trace();
    if v.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Numerical(format!(
            "polarization has imaginary residue {:e}; state is not Hermitian",
            v.im
        )));
    }
    Ok(v.re)
}

/// `Tr[rho^2]`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
    m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Reduced 2x2 state of the kept qubit.
pub fn partial_trace(rho: &DensityMatrix, keep: Qubit) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            let mut s = C64::new(0.0, 0.0);
            for c in 0..2 {
                s += match keep {
                    Qubit::One => m[(2 * a + c, 2 * b + c)],
                    Qubit::Two => m[(2 * c + a, 2 * c + b)],
                };
            }
            out[(a, b)] = s;
        }
    }
    out
}

/// Base-2 von Neumann entropy of a Hermitian unit-trace matrix.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let eig = eigh(m)?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|z| z.re)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Entropy (bits) of qubit 1's reduced state.
pub fn entanglement_entropy(rho: &DensityMatrix) -> Result<f64> {
    von_neumann_entropy(&partial_trace(rho, Qubit::One))
}

/// Spin-flipped state `(sigma_y kron sigma_y) conj(rho) (sigma_y kron sigma_y)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = sp::y().kron(&sp::y());
    &(&yy * &rho.conj()) * &yy
}

fn clip_nonnegative(values: impl Iterator<Item = f64>, what: &str) -> Result<Vec<f64>> {
    values
        .map(|l| {
            if l < -REJECT {
                Err(Error::Numerical(format!("{what} has negative eigenvalue {l:e}")))
            } else if l < 0.0 {
                Ok(0.0)
            } else {
                Ok(l)
            }
        })
        .collect()
}

fn wootters(mut lambdas: Vec<f64>) -> f64 {
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1..].iter().sum::<f64>()).max(0.0)
}

/// Wootters concurrence from the square roots of the eigenvalues of
/// `rho * spin_flip(rho)`. Negative rounding noise above -1e-8 is clipped.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let prod = m * &spin_flip(m);
    let vals = eigvals_general(&prod)?;
    let vals = clip_nonnegative(vals.iter().map(|z| z.re), "rho * rho_tilde")?;
    Ok(wootters(vals.into_iter().map(f64::sqrt).collect()).min(1.0))
}

/// Concurrence through `R = sqrt(sqrt(rho) rho_tilde sqrt(rho))`. Slower than
/// [`concurrence`]; kept as an independent route for cross-checking.
pub fn concurrence_nested_sqrt(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let root = herm_sqrt(m)?;
    let inner = &(&root * &spin_flip(m)) * &root;
    let inner = (&inner + &inner.adjoint()).scale_real(0.5);
    let r = herm_sqrt(&inner)?;
    let vals = eigh(&r)?.real_eigenvalues();
    let vals = clip_nonnegative(vals.into_iter(), "R")?;
    Ok(wootters(vals).min(1.0))
}

/// `(1/2) |a - b|_1` for Hermitian matrices.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    trace_norm_half(&(a - b))
}

/// `(1/2) |m|_1` for a Hermitian matrix. The anti-Hermitian part is dropped,
/// so rounding noise in differences of nearly equal states is harmless.
pub fn trace_norm_half(m: &ComplexMatrix) -> Result<f64> {
    let eig = eigh(&(m + &m.adjoint()).scale_real(0.5))?;
    Ok(0.5 * eig.eigenvalues.iter().map(|z| z.re.abs()).sum::<f64>())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSeries {
    pub periods: Vec<usize>,
    pub times: Vec<f64>,
    pub polarization: Vec<f64>,
    pub purity: Vec<f64>,
    pub entropy: Vec<f64>,
    pub concurrence: Vec<f64>,
}

impl ObservableSeries {
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let mut out = Self {
            periods: traj.period_indices(),
            times: traj.sample_times.clone(),
            ..Default::default()
        };
        for rho in &traj.states {
            out.polarization.push(polarization(rho)?);
            out.purity.push(purity(rho));
            out.entropy.push(entanglement_entropy(rho)?);
            out.concurrence.push(concurrence(rho)?);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
