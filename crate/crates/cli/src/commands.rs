use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statebound::bounds::{exact_bound_from_spectra, spectrum, transfer_efficiency, unitary_bounds};
use statebound::expr::OperatorExpr;
use statebound::permutodesign::{operator_design, verify_design, DesignRecord};
use statebound::protocols::{
    ctg_run, lpps_conventional, lpps_optimal, ls_method, lss_method, pc_method, readout_spectrum, sa_method, ta_method, Axis,
    CtgOptions, LssOptions, PcOptions, ProtocolResult, SequenceStep,
};
use statebound::spinops::thermal_deviation;
use statebound::{HermitianOperator, SpinSystem};

use crate::args::{AxisArg, BoundArgs, DesignArgs, GlobalArgs, Method, ProtocolArgs};
use crate::montecarlo::haar_unitary;
use crate::{resolve_system, units, with_overrides, CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub samples: usize,
    pub seed: u64,
    pub min_eta: f64,
    pub max_eta: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub system: String,
    pub spins: usize,
    pub rho: String,
    pub sigma: String,
    pub units: String,
    pub eta_lower: f64,
    pub eta_upper: f64,
    pub exact_bound: f64,
    pub tight_partial_sums: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignEntryReport {
    pub weight: f64,
    pub permutation: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub system: String,
    pub spins: usize,
    pub units: String,
    pub experiments: usize,
    pub certified_minimal: bool,
    pub target_eta: f64,
    pub achieved_eta: f64,
    pub residual: f64,
    pub entries: Vec<DesignEntryReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    pub method: String,
    pub system: String,
    pub units: String,
    pub eta: f64,
    pub eta_lower: f64,
    pub eta_upper: f64,
    pub exact_bound: f64,
    pub residual_norm: f64,
    pub experiments_used: usize,
    pub final_populations: Vec<f64>,
    pub extras: BTreeMap<String, f64>,
    pub sequence: Vec<SequenceStep>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
}

fn parse_pair(rho: &str, sigma: &str) -> CliResult<(OperatorExpr, OperatorExpr)> {
    let wrap = |which: &str, text: &str| {
        OperatorExpr::parse(text).map_err(|e| CliError::usage(format!("--{which} '{text}': {e}")))
    };
    Ok((wrap("rho", rho)?, wrap("sigma", sigma)?))
}

fn operators(global: &GlobalArgs, rho: &str, sigma: &str) -> CliResult<(SpinSystem, HermitianOperator, HermitianOperator)> {
    let (re, se) = parse_pair(rho, sigma)?;
    let (system, n) = resolve_system(global, &[&re, &se])?;
    let r = re.evaluate(n, Some(&system))?;
    let s = se.evaluate(n, Some(&system))?.traceless_part();
    Ok((system, r, s))
}

pub fn bound(global: &GlobalArgs, args: &BoundArgs) -> CliResult<BoundReport> {
    let (system, rho, sigma) = operators(global, &args.rho, &args.sigma)?;
    let (label, scale) = units(global);
    let (lo, hi) = unitary_bounds(&rho, &sigma)?;
    let (exact, tight) = exact_bound_from_spectra(&spectrum(&rho), &spectrum(&sigma))?;
    let monte_carlo = (args.mc_samples > 0).then(|| -> CliResult<MonteCarloReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
        let (mut min, mut max, mut violations) = (f64::INFINITY, f64::NEG_INFINITY, 0);
        for _ in 0..args.mc_samples {
            let u = haar_unitary(&mut rng, rho.dim());
            let eta = transfer_efficiency(&rho.conjugate(&u), &sigma)?;
            min = min.min(eta);
            max = max.max(eta);
            if eta > hi + 1e-9 || eta < lo - 1e-9 {
                violations += 1;
            }
        }
        Ok(MonteCarloReport { samples: args.mc_samples, seed: global.seed, min_eta: min * scale, max_eta: max * scale, violations })
    });
    Ok(BoundReport {
        system: system.name.clone(),
        spins: system.n,
        rho: args.rho.clone(),
        sigma: args.sigma.clone(),
        units: label.into(),
        eta_lower: lo * scale,
        eta_upper: hi * scale,
        exact_bound: exact * scale,
        tight_partial_sums: tight,
        monte_carlo: monte_carlo.transpose()?,
    })
}

pub fn design(global: &GlobalArgs, args: &DesignArgs) -> CliResult<DesignReport> {
    let (system, rho, sigma) = operators(global, &args.rho, &args.sigma)?;
    let (label, scale) = units(global);
    let d = operator_design(&rho, &sigma)?;
    let report = verify_design(&d, &rho, &sigma)?;
    let record = DesignRecord::new(&d, report.residual_norm);
    Ok(DesignReport {
        system: system.name.clone(),
        spins: system.n,
        units: label.into(),
        experiments: record.experiments,
        certified_minimal: record.certified_minimal,
        target_eta: record.target_eta * scale,
        achieved_eta: report.eta * scale,
        residual: record.residual * scale,
        entries: record.entries.into_iter().map(|e| DesignEntryReport { weight: e.weight, permutation: e.permutation }).collect(),
    })
}

pub(crate) fn protocol_system(global: &GlobalArgs, method: Method) -> CliResult<SpinSystem> {
    let system = match (&global.system, method) {
        (Some(name), _) => SpinSystem::load(name)?,
        (None, Method::LppsConventional) => SpinSystem::alanine(),
        (None, _) => SpinSystem::chcl3(),
    };
    with_overrides(system, global)
}

fn axis(a: AxisArg) -> Axis {
    match a {
        AxisArg::X => Axis::X,
        AxisArg::Y => Axis::Y,
        AxisArg::MinusX => Axis::MinusX,
        AxisArg::MinusY => Axis::MinusY,
    }
}

/// Dispatches to the library protocol with the given parameters.
pub fn run_protocol(system: &SpinSystem, p: &ProtocolArgs) -> CliResult<ProtocolResult> {
    let result = match p.method {
        Method::Ta => ta_method(system)?,
        Method::Sa => sa_method(system, !p.no_gradients)?,
        Method::Ls => match (p.x1, p.x2) {
            (Some(a), Some(b)) => ls_method(system, Some(&[a, b]))?,
            _ => ls_method(system, None)?,
        },
        Method::Ctg => {
            let opts = CtgOptions { axis: axis(p.axis), relax_interval: p.relax_interval };
            ctg_run(system, &thermal_deviation(system), p.theta1, p.theta2, p.repeats, opts)?
        }
        Method::Pc => pc_method(system, p.tau, p.loops, PcOptions { cross_relaxation: p.cross_relaxation })?,
        Method::Lss => {
            let opts = LssOptions { cross_relaxation: p.cross_relaxation, slices_per_period: p.slices };
            lss_method(system, 2.0 * PI * p.amplitude_hz, p.duration, opts)?
        }
        Method::LppsConventional => lpps_conventional(system)?,
        Method::LppsOptimal => lpps_optimal(p.n.unwrap_or(system.n))?,
    };
    Ok(result)
}

/// Quantities measured in units of ε.
pub(crate) fn scales_with_epsilon(key: &str) -> bool {
    key.contains("eta") || key.starts_with("rho11") || key == "last_change"
}

pub fn protocol_report(method: &str, system: &SpinSystem, r: &ProtocolResult, scale: f64, units: &str) -> ProtocolReport {
    let extras = r.extras.iter().map(|(k, v)| (k.clone(), if scales_with_epsilon(k) { v * scale } else { *v })).collect();
    ProtocolReport {
        method: method.to_string(),
        system: system.name.clone(),
        units: units.to_string(),
        eta: r.report.eta * scale,
        eta_lower: r.report.eta_lower * scale,
        eta_upper: r.report.eta_upper * scale,
        exact_bound: r.report.exact_bound * scale,
        residual_norm: r.report.residual_norm * scale,
        experiments_used: r.experiments_used,
        final_populations: r.final_state.diagonal().iter().map(|p| p * scale).collect(),
        extras,
        sequence: r.sequence.clone(),
        files: Vec::new(),
    }
}

pub(crate) fn method_name(m: Method) -> &'static str {
    match m {
        Method::Ta => "ta",
        Method::Sa => "sa",
        Method::Ls => "ls",
        Method::Ctg => "ctg",
        Method::Pc => "pc",
        Method::Lss => "lss",
        Method::LppsConventional => "lpps-conventional",
        Method::LppsOptimal => "lpps-optimal",
    }
}

pub fn protocol(global: &GlobalArgs, p: &ProtocolArgs) -> CliResult<ProtocolReport> {
    let system = protocol_system(global, p.method)?;
    let (label, scale) = units(global);
    let result = run_protocol(&system, p)?;
    let name = method_name(p.method);
    let mut report = protocol_report(name, &system, &result, scale, label);
    if p.spectrum && global.out_dir.is_none() {
        return Err(CliError::usage("--spectrum needs --out-dir"));
    }
    if let Some(dir) = &global.out_dir {
        fs::create_dir_all(dir)?;
        if let Some(rows) = &result.trajectory {
            let path = dir.join(format!("{name}_trajectory.csv"));
            write_trajectory(&path, rows, scale)?;
            report.files.push(path.display().to_string());
        }
        if p.spectrum {
            let path = dir.join(format!("{name}_spectrum.csv"));
            write_spectrum(&path, &result.final_state, &system, scale)?;
            report.files.push(path.display().to_string());
        }
    }
    Ok(report)
}

fn csv_error(e: csv::Error) -> CliError {
    CliError { code: 1, message: e.to_string() }
}

fn write_trajectory(path: &Path, rows: &[statebound::protocols::TrajectoryRow], scale: f64) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    let levels = rows.first().map_or(0, |r| r.populations.len());
    let mut header = vec!["t".to_string(), "eta".to_string()];
    header.extend((1..=levels).map(|k| format!("p{k}")));
    w.write_record(&header).map_err(csv_error)?;
    for r in rows {
        let mut rec = vec![r.t.to_string(), (r.eta * scale).to_string()];
        rec.extend(r.populations.iter().map(|p| (p * scale).to_string()));
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn write_spectrum(path: &Path, state: &HermitianOperator, system: &SpinSystem, scale: f64) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(["spin", "frequency_hz", "re", "im"]).map_err(csv_error)?;
    for k in 0..system.n {
        for line in readout_spectrum(state, system, k)? {
            let rec = [
                (k + 1).to_string(),
                line.frequency.to_string(),
                (line.amplitude.re * scale).to_string(),
                (line.amplitude.im * scale).to_string(),
            ];
            w.write_record(&rec).map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}
