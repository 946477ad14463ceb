// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation and analysis of two coupled qubits under a two-segment Floquet
//! drive and a Markovian thermal bath.
//!
//! The pipeline is: [`model`] assembles Hamiltonians, jump channels and
//! vectorized Lindbladians; [`evolution`] propagates density matrices with
//! the one-period map (or an RK4 reference integrator); [`observables`]
//! reduces states to polarization, purity, entropy and concurrence;
//! [`spectral`] turns the period-map spectrum into equilibration times and
//! regime labels; [`sweep`] runs deterministic parallel grids and writes
//! tables; [`config`] backs the command-line front end.

pub mod config;
pub mod error;
pub mod evolution;
pub mod model;
pub mod numerics;
pub mod observables;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
