// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm bound below which the [13/13] approximant is accurate to unit roundoff.
const THETA_13: f64 = 5.371920351148152;

/// Computes `exp(scale * m)`.
pub fn expm(m: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "expm of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if !scale.is_finite() {
        return Err(Error::Contract(format!("expm scale {scale} is not finite")));
    }
    let n = m.rows();
    let a = m.scale_real(scale);
    let norm = a.norm_1();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale_real(0.5f64.powi(squarings));

    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::new(PADE13[k], 0.0);

    let u_inner = &(&(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9)));
    let u_tail = &(&(&(&a6.scale(b(7)) + &a4.scale(b(5))) + &a2.scale(b(3))) + &id.scale(b(1)));
    let u = &a * &(&(&a6 * u_inner) + u_tail);

    let v_inner = &(&(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8)));
    let v_tail = &(&(&(&a6.scale(b(6)) + &a4.scale(b(4))) + &a2.scale(b(2))) + &id.scale(b(0)));
    let v = &(&a6 * v_inner) + v_tail;

    let mut r = (&v - &u).solve(&(&v + &u))?;
    for k in 0..squarings {
        r = &r * &r;
        if !r.is_finite() {
            return Err(Error::Numerical(format!(
                "expm overflow after {} of {squarings} squarings (scaled 1-norm {norm:e})",
                k + 1
            )));
        }
    }
    Ok(r)
}
