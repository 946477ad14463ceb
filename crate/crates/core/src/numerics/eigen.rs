// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Eigen-decompositions for small dense complex matrices.
//!
//! The general solver reduces to upper Hessenberg form with Householder
//! reflections, runs a single-shift complex QR iteration to Schur form and
//! back-substitutes for the eigenvectors of the triangular factor. Hermitian
//! matrices go through cyclic Jacobi rotations, which deliver orthonormal
//! eigenvectors to full working accuracy at these sizes.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative Hermiticity tolerance accepted by [`eigh`] and [`herm_sqrt`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Negative eigenvalues above this are rounding noise and are clipped to zero.
pub const PSD_CLIP: f64 = 1e-10;
/// Negative eigenvalues below this mean the input is not positive semidefinite.
pub const PSD_REJECT: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<C64>,
    /// Unit-norm eigenvectors stored as columns, aligned with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Largest `|M v - lambda v|` over all eigenpairs.
    pub fn max_residual(&self, m: &ComplexMatrix) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &lam)| {
                let v = self.eigenvectors.column(k);
                let mv = m.apply(&v);
                mv.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - lam * b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Real parts of the eigenvalues; meaningful for Hermitian input.
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

/// Full complex eigen-decomposition; eigenvalues come in no particular order.
pub fn eig_general(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigen-decomposition of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let (mut h, mut z) = hessenberg(m);
    schur_qr(&mut h, &mut z)?;
    let eigenvalues = h.diag();
    let y = triangular_eigenvectors(&h);
    let mut eigenvectors = &z * &y;
    for k in 0..n {
        let col = eigenvectors.column(k);
        let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let col: Vec<C64> = col.iter().map(|c| c / norm).collect();
        eigenvectors.set_column(k, &col);
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only; skips the back-substitution step.
pub fn eigvals_general(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigenvalues of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let (mut h, mut z) = hessenberg(m);
    schur_qr(&mut h, &mut z)?;
    Ok(h.diag())
}

fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in v.iter_mut() {
            *c /= vnorm;
        }
        // H <- P H with P = I - 2 v v^H on rows k+1..n
        for j in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)]).sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= 2.0 * vr * dot;
            }
        }
        // H <- H P, Q <- Q P on columns k+1..n
        for target in [&mut h, &mut q] {
            for i in 0..n {
                let dot: C64 = v.iter().enumerate().map(|(c, vc)| target[(i, k + 1 + c)] * vc).sum();
                for (c, vc) in v.iter().enumerate() {
                    target[(i, k + 1 + c)] -= 2.0 * dot * vc.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` onto `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Reduces upper Hessenberg `h` to upper triangular Schur form in place,
/// accumulating the unitary similarity into `z`.
fn schur_qr(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows();
    if n == 1 {
        return Ok(());
    }
    let scale = h.max_abs();
    if scale == 0.0 {
        return Ok(());
    }
    let max_iter = 30 * n;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(n);

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > max_iter {
            return Err(Error::Numerical(format!(
                "QR iteration failed to converge: {iter} iterations on active block {l}..={hi} \
                 ({total} total), subdiagonal {:e}",
                h[(hi, hi - 1)].norm()
            )));
        }

        let shift = if iter.is_multiple_of(10) {
            // exceptional shift to break cycles
            let sub = h[(hi, hi - 1)].norm()
                + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + C64::new(0.75 * sub, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        rot.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            for j in k..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = c * a + s * b;
                h[(k + 1, j)] = -s.conj() * a + c * b;
            }
            h[(k + 1, k)] = ZERO;
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            for i in 0..=(k + 1).min(hi) {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = c * a + s.conj() * b;
                h[(i, k + 1)] = -s * a + c * b;
            }
            for i in 0..n {
                let a = z[(i, k)];
                let b = z[(i, k + 1)];
                z[(i, k)] = c * a + s.conj() * b;
                z[(i, k + 1)] = -s * a + c * b;
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Columns are eigenvectors of the upper triangular `t`. Coincident diagonal
/// entries are separated by a tiny perturbation so defective matrices still
/// yield (near-parallel) vectors with small residuals.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let smin = (f64::EPSILON * t.max_abs()).max(f64::MIN_POSITIVE);
    let mut y = ComplexMatrix::zeros(n, n);
    let mut x = vec![ZERO; n];
    for k in 0..n {
        x.iter_mut().for_each(|c| *c = ZERO);
        x[k] = ONE;
        let lam = t[(k, k)];
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t[(i, j)] * x[j];
            }
            let mut denom = t[(i, i)] - lam;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            x[i] = -s / denom;
            let big = x[i..=k].iter().map(|c| c.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for c in x[..=k].iter_mut() {
                    *c /= big;
                }
            }
        }
        y.set_column(k, &x);
    }
    y
}

/// Hermitian eigen-decomposition: real eigenvalues sorted descending with
/// orthonormal eigenvectors.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigh of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let norm = m.norm_fro();
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * norm.max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::Contract(format!(
            "eigh input is not Hermitian: defect {defect:e} exceeds {:e}",
            HERMITIAN_TOL * norm
        )));
    }
    let n = m.rows();
    // symmetrize so rounding noise cannot accumulate through the sweeps
    let mut a = (m + &m.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / b;
                let theta = (aqq - app) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();
                // J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q)
                for i in 0..n {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)];
                    a[(i, p)] = c * ap - s * ph_conj * aq;
                    a[(i, q)] = s * ap + c * ph_conj * aq;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * ph_conj * vq;
                    v[(i, q)] = s * vp + c * ph_conj * vq;
                }
                for j in 0..n {
                    let ap = a[(p, j)];
                    let aq = a[(q, j)];
                    a[(p, j)] = c * ap - s * phase * aq;
                    a[(q, j)] = s * ap + c * phase * aq;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| C64::new(a[(i, i)].re, 0.0)).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        eigenvectors.set_column(k, &v.column(i));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Rebuilds `V f(Lambda) V^dagger` from a Hermitian decomposition.
pub fn herm_function(eig: &EigenDecomposition, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let n = eig.eigenvalues.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, lam) in eig.eigenvalues.iter().enumerate() {
        let w = f(lam.re);
        if w == 0.0 {
            continue;
        }
        let col = eig.eigenvectors.column(k);
        for i in 0..n {
            let ci = col[i] * w;
            for j in 0..n {
                out[(i, j)] += ci * col[j].conj();
            }
        }
    }
    out
}

/// Positive semidefinite square root of a Hermitian matrix.
pub fn herm_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let scale = m.norm_fro().max(1.0);
    if let Some(bad) = eig.eigenvalues.iter().map(|z| z.re).find(|&l| l < -PSD_REJECT * scale) {
        return Err(Error::Contract(format!(
            "herm_sqrt input is not positive semidefinite: eigenvalue {bad:e}"
        )));
    }
    Ok(herm_function(&eig, |l| l.max(0.0).sqrt()))
}
