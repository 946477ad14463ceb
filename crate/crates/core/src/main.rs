// Copyright 2026 The driven-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::warn;

use driven_qubits::config::{parse_config, Command, Grid, RunConfig};
use driven_qubits::evolution::{evolve_stroboscopic, steady_state, NamedState};
use driven_qubits::observables::{concurrence, entanglement_entropy, polarization, purity, ObservableSeries};
use driven_qubits::spectral::{spectral_gap, teq_curve_with_workers, CurvePoint};
use driven_qubits::sweep::{
    concurrence_death_time, run_sweep, write_table, Axis, InitialState, SweepOutput, SweepSpec, Table,
};
use driven_qubits::{Error, Result};

/// Two Floquet-driven coupled qubits in a thermal bath.
///
/// Values are resolved as flag > config file > built-in default.
#[derive(Debug, Parser)]
#[command(name = "driven-qubits", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,

    /// JSON run configuration
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (standard output when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Worker threads for sweeps (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Pulse detuning; a start:stop:count grid for sweeping commands
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Qubit coupling; a start:stop:count grid for phase-diagram
    #[arg(long, global = true, allow_hyphen_values = true)]
    g: Option<String>,
    /// Relaxation rate
    #[arg(long, global = true, allow_hyphen_values = true)]
    g1: Option<f64>,
    /// Dephasing rate
    #[arg(long, global = true, allow_hyphen_values = true)]
    g2: Option<f64>,
    /// Thermal occupation
    #[arg(long, global = true, allow_hyphen_values = true)]
    nth: Option<f64>,
    /// Floquet period T
    #[arg(long, global = true, allow_hyphen_values = true)]
    period: Option<f64>,
    /// Fraction of the period spent in the flip pulse
    #[arg(long, global = true, allow_hyphen_values = true)]
    pulse_fraction: Option<f64>,
    /// Detuning of qubit 1
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta1: Option<f64>,
    /// Detuning of qubit 2
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta2: Option<f64>,
    /// Number of Floquet periods
    #[arg(long, global = true)]
    n_periods: Option<usize>,
    /// ground, both-excited or bell-phi-plus
    #[arg(long, global = true)]
    initial_state: Option<String>,
    /// Relative-slope threshold for regime labels
    #[arg(long, global = true, allow_hyphen_values = true)]
    threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// Stroboscopic trajectory: n,time,polarization,purity,entropy,concurrence
    Evolve,
    /// Spectral gap and equilibration time at one parameter point
    Spectrum,
    /// Equilibration time over an epsilon grid: eps,t_eq,gap,valid
    TeqCurve,
    /// Regime map over epsilon x g grids: eps,g,t_eq,label,valid
    PhaseDiagram,
    /// Observables versus period index for every epsilon on a grid
    ConcurrenceMap,
    /// Fixed point of the period map and its observables
    SteadyState,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Evolve => Command::Evolve,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::TeqCurve => Command::TeqCurve,
            Cmd::PhaseDiagram => Command::PhaseDiagram,
            Cmd::ConcurrenceMap => Command::ConcurrenceMap,
            Cmd::SteadyState => Command::SteadyState,
        }
    }
}

fn scalar(flag: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("--{flag} expects a number for this command, got `{s}`")))
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(c) = cli.command {
        cfg.command = c.into();
    }
    if let Some(s) = &cli.eps {
        if cfg.command.sweeps_eps() {
            cfg.grids.eps = Some(s.parse::<Grid>()?);
        } else {
            cfg.model.epsilon = scalar("eps", s)?;
        }
    }
    if let Some(s) = &cli.g {
        if cfg.command.sweeps_g() {
            cfg.grids.g = Some(s.parse::<Grid>()?);
        } else {
            cfg.model.g = scalar("g", s)?;
        }
    }
    let fields = [
        ("g1", cli.g1),
        ("g2", cli.g2),
        ("n_th", cli.nth),
        ("T", cli.period),
        ("pulse_fraction", cli.pulse_fraction),
        ("delta1", cli.delta1),
        ("delta2", cli.delta2),
    ];
    for (name, v) in fields {
        if let Some(v) = v {
            cfg.model.set(name, v)?;
        }
    }
    if let Some(n) = cli.n_periods {
        cfg.n_periods = n;
    }
    if let Some(s) = &cli.initial_state {
        cfg.initial_state = InitialState::Named(s.parse::<NamedState>()?);
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    if let Some(f) = &cli.format {
        cfg.output.format = f.parse()?;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(t) = cli.threshold {
        cfg.threshold = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<()> {
    match &cfg.output.path {
        Some(path) => write_table(table, path, cfg.output.format),
        None => {
            let text = table.render(cfg.output.format);
            std::io::stdout().write_all(text.as_bytes()).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn run(cfg: &RunConfig) -> Result<()> {
    let p = cfg.model;
    match cfg.command {
        Command::Evolve => {
            let rho0 = cfg.initial_state.density_matrix();
            let traj = evolve_stroboscopic(&p, &rho0, cfg.n_periods)?;
            let series = ObservableSeries::from_trajectory(&traj)?;
            if cfg.output.path.is_some() {
                match concurrence_death_time(&p, &rho0, cfg.n_periods)? {
                    Some(n) => println!("concurrence death period: {n}"),
                    None => println!("concurrence survives to period {}", cfg.n_periods),
                }
            }
            emit(cfg, &Table::from_series(&series, &p))
        }
        Command::Spectrum => {
            let r = spectral_gap(&p)?;
            println!("gap = {:.10e}", r.gap);
            println!("t_eq = {:.10e}", r.t_eq);
            println!("steady_count = {}", r.steady_count);
            if cfg.output.path.is_some() {
                let point = CurvePoint {
                    eps: p.epsilon,
                    t_eq: Some(r.t_eq),
                    gap: Some(r.gap),
                    error: None,
                };
                emit(cfg, &Table::from_curve(&[point], &p))?;
            }
            Ok(())
        }
        Command::TeqCurve => {
            let grid = cfg.eps_grid()?;
            let curve = teq_curve_with_workers(&p, grid.values(), cfg.workers)?;
            if curve.iter().all(|c| !c.is_valid()) {
                let causes: Vec<String> = curve.iter().filter_map(|c| c.error.clone()).take(3).collect();
                return Err(Error::SweepFailed(causes.join("; ")));
            }
            emit(cfg, &Table::from_curve(&curve, &p))
        }
        Command::PhaseDiagram => {
            let mut spec = SweepSpec::new(p, Axis::new("epsilon", cfg.eps_grid()?.into_values()));
            spec.axis2 = Some(Axis::new("g", cfg.g_grid()?.into_values()));
            spec.outputs = BTreeSet::from([SweepOutput::TEq, SweepOutput::Regime]);
            spec.slope_threshold = cfg.threshold;
            spec.workers = cfg.workers;
            let result = run_sweep(&spec)?;
            let map = result.regime_map.ok_or_else(|| Error::Numerical("sweep produced no regime map".into()))?;
            emit(cfg, &Table::from_regime_map(&map, &p))
        }
        Command::ConcurrenceMap => {
            let mut spec = SweepSpec::new(p, Axis::new("epsilon", cfg.eps_grid()?.into_values()));
            spec.outputs = BTreeSet::from([SweepOutput::ConcurrenceMap, SweepOutput::PolarizationMap]);
            spec.n_periods = cfg.n_periods;
            spec.initial_state = cfg.initial_state.clone();
            spec.workers = cfg.workers;
            let result = run_sweep(&spec)?;
            let map = result
                .trajectory_map
                .ok_or_else(|| Error::Numerical("sweep produced no trajectory map".into()))?;
            for (x, e) in map.axis1.values.iter().zip(&map.errors) {
                if let Some(e) = e {
                    warn!("eps = {x}: {e}");
                }
            }
            emit(cfg, &Table::from_trajectory_map(&map, &p))
        }
        Command::SteadyState => {
            let rho = steady_state(&p)?;
            println!("polarization = {:.10e}", polarization(&rho)?);
            println!("purity = {:.10e}", purity(&rho));
            println!("entropy = {:.10e}", entanglement_entropy(&rho)?);
            println!("concurrence = {:.10e}", concurrence(&rho)?);
            if cfg.output.path.is_some() {
                emit(cfg, &Table::from_density_matrix(&rho, &p))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = resolve(&cli).and_then(|cfg| {
        for w in cfg.warnings() {
            warn!("{w}");
        }
        run(&cfg)
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
