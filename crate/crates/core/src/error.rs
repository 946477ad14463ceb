// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    /// An input violated an operation's documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: String, reason: String },

    #[error("no spectral gap: every period-map eigenvalue is stationary (|mu| > 1 - {threshold:e})")]
    NoGap { threshold: f64 },

    #[error("degenerate steady space: eigenvalues {first} and {second} both within {tol:e} of 1")]
    DegenerateSteadyState { first: String, second: String, tol: f64 },

    #[error("numerical drift at period {period}: {detail}")]
    Drift { period: usize, detail: String },

    #[error("every sweep cell failed; first causes: {0}")]
    SweepFailed(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical machinery itself, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_)
                | Error::NoGap { .. }
                | Error::DegenerateSteadyState { .. }
                | Error::Drift { .. }
                | Error::SweepFailed(_)
        )
    }
}
