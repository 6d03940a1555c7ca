use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::args::{GlobalArgs, ProtocolArgs};
use crate::commands::{method_name, protocol_system, run_protocol, scales_with_epsilon};
use crate::{units, CliError, CliResult};

const MAX_WORKERS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Param {
    Tau,
    Loops,
    Theta1,
    Theta2,
    Repeats,
    X1,
    X2,
    AmplitudeHz,
    Duration,
    CrossRelaxation,
    RelaxInterval,
}

const PARAMS: [(&str, Param); 11] = [
    ("tau", Param::Tau),
    ("loops", Param::Loops),
    ("theta1", Param::Theta1),
    ("theta2", Param::Theta2),
    ("repeats", Param::Repeats),
    ("x1", Param::X1),
    ("x2", Param::X2),
    ("amplitude-hz", Param::AmplitudeHz),
    ("duration", Param::Duration),
    ("cross-relaxation", Param::CrossRelaxation),
    ("relax-interval", Param::RelaxInterval),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    param: Param,
    pub values: Vec<f64>,
}

/// Parses `param=start:stop:steps` into evenly spaced values.
pub fn parse_sweep(text: &str) -> CliResult<SweepSpec> {
    let bad = |why: &str| CliError::usage(format!("invalid sweep '{text}': {why}"));
    let (name, range) = text.split_once('=').ok_or_else(|| bad("expected param=start:stop:steps"))?;
    let name = name.trim();
    let param = PARAMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, p)| p)
        .ok_or_else(|| bad(&format!("unknown parameter, expected one of {}", PARAMS.map(|(n, _)| n).join(", "))))?;
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let [a, b, k] = parts[..] else {
        return Err(bad("expected start:stop:steps"));
    };
    let a: f64 = a.parse().map_err(|_| bad("start is not a number"))?;
    let b: f64 = b.parse().map_err(|_| bad("stop is not a number"))?;
    let k: usize = k.parse().map_err(|_| bad("steps is not a positive integer"))?;
    if k == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad("need finite bounds and at least one step"));
    }
    let integral = matches!(param, Param::Loops | Param::Repeats);
    if integral && (a < 0.0 || b < 0.0) {
        return Err(bad("counts cannot be negative"));
    }
    let values = (0..k)
        .map(|i| if k == 1 { a } else { a + (b - a) * i as f64 / (k - 1) as f64 })
        .map(|v| if integral { v.round() } else { v })
        .collect();
    Ok(SweepSpec { name: name.to_string(), param, values })
}

fn with_value(base: &ProtocolArgs, param: Param, v: f64) -> ProtocolArgs {
    let mut p = base.clone();
    match param {
        Param::Tau => p.tau = v,
        Param::Loops => p.loops = v as usize,
        Param::Theta1 => p.theta1 = v,
        Param::Theta2 => p.theta2 = v,
        Param::Repeats => p.repeats = v as usize,
        Param::X1 => {
            p.x1 = Some(v);
            p.x2 = p.x2.or(Some(46.50));
        }
        Param::X2 => {
            p.x2 = Some(v);
            p.x1 = p.x1.or(Some(31.78));
        }
        Param::AmplitudeHz => p.amplitude_hz = v,
        Param::Duration => p.duration = v,
        Param::CrossRelaxation => p.cross_relaxation = v,
        Param::RelaxInterval => p.relax_interval = Some(v),
    }
    p
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub eta: f64,
    pub extras: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub method: String,
    pub system: String,
    pub parameter: String,
    pub units: String,
    pub rows: Vec<SweepRow>,
}

/// Runs one protocol per sweep value on a bounded pool; rows keep sweep order.
pub fn run_sweep(global: &GlobalArgs, base: &ProtocolArgs, spec: &SweepSpec) -> CliResult<SweepReport> {
    let system = protocol_system(global, base.method)?;
    let (label, scale) = units(global);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(MAX_WORKERS);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError { code: 1, message: e.to_string() })?;
    let rows: Vec<CliResult<SweepRow>> = pool.install(|| {
        spec.values
            .par_iter()
            .enumerate()
            .map(|(index, &value)| {
                let r = run_protocol(&system, &with_value(base, spec.param, value))?;
                let extras =
                    r.extras.iter().map(|(k, v)| (k.clone(), if scales_with_epsilon(k) { v * scale } else { *v })).collect();
                Ok(SweepRow { index, value, eta: r.report.eta * scale, extras })
            })
            .collect()
    });
    Ok(SweepReport {
        method: method_name(base.method).to_string(),
        system: system.name.clone(),
        parameter: spec.name.clone(),
        units: label.into(),
        rows: rows.into_iter().collect::<CliResult<Vec<_>>>()?,
    })
}
