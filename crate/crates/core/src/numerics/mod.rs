// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for 2x2 through 16x16 matrices.

mod eigen;
mod expm;
mod matrix;

pub use eigen::{
    eig_general, eigh, eigvals_general, herm_function, herm_sqrt, EigenDecomposition,
    HERMITIAN_TOL, PSD_CLIP, PSD_REJECT,
};
pub use expm::expm;
pub use matrix::{pauli, ComplexMatrix};
pub use num_complex::Complex64 as C64;

/// Kronecker product as a free function.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Matrix product as a free function; errors on inner-dimension mismatch.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    a.matmul(b)
}
