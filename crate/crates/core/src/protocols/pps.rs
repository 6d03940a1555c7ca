use serde::Serialize;

use super::gates::{self, Axis};
use super::{require_spins, run_sequence, ProtocolResult, SequenceStep, TrajectoryRow};
use crate::bounds::{exact_transfer_bound, transfer_efficiency};
use crate::channels::{apply_mixed_unitary, gradient_channel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::lindblad::{propagate, with_identity, LindbladModel};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::permutodesign::{minimal_design, perm, ExperimentDesign};
use crate::spinops::{ket_bra, pauli_string, pps_target, thermal_deviation, HermitianOperator, SpinSystem};

/// Temporal averaging: the thermal state averaged over level permutations that fix the ground state.
pub fn ta_method(system: &SpinSystem) -> Result<ProtocolResult> {
    let rho = thermal_deviation(system);
    let sigma = pps_target(system.n);
    let design = if system.n == 2 {
        let eta = exact_transfer_bound(&rho, &sigma)?;
        ExperimentDesign::from_permutations(&[(1.0, vec![0, 1, 2, 3]), (1.0, vec![0, 3, 1, 2]), (1.0, vec![0, 2, 3, 1])], eta)?
    } else {
        minimal_design(&rho.diagonal(), &sigma.diagonal())?
    };
    let out = apply_mixed_unitary(&rho, &design)?;
    let mut result = ProtocolResult::new("ta", &rho, out, sigma, design.len())?;
    result.sequence = design
        .entries()
        .iter()
        .map(|e| SequenceStep::Gate {
            label: e.permutation.as_deref().map_or_else(|| "unitary".into(), perm::cycle_notation),
            unitary: e.unitary.clone(),
        })
        .collect();
    Ok(result)
}

/// The spatial-averaging pulse sequence; `gradients = false` drops both gradient steps.
pub fn sa_sequence(system: &SpinSystem, gradients: bool) -> Vec<SequenceStep> {
    let j = system.coupling(0, 1);
    let both = vec![1, 2];
    let pulse = |axis, angle| SequenceStep::HardPulse { spins: both.clone(), axis, angle };
    let grad = SequenceStep::Gradient { weights: system.gamma.clone() };
    let mut steps = vec![
        pulse(Axis::X, 90.0),
        SequenceStep::Delay { duration: 1.0 / (4.0 * j) },
        pulse(Axis::Y, 90.0),
        SequenceStep::Delay { duration: 1.0 / (4.0 * j) },
        pulse(Axis::MinusX, 90.0),
        grad.clone(),
        pulse(Axis::X, 45.0),
        SequenceStep::Delay { duration: 1.0 / (2.0 * j) },
        pulse(Axis::MinusY, 30.0),
        grad,
    ];
    if !gradients {
        steps.retain(|s| !matches!(s, SequenceStep::Gradient { .. }));
    }
    steps
}

/// Spatial averaging with ideal pulses, delays and gradients.
pub fn sa_method(system: &SpinSystem, gradients: bool) -> Result<ProtocolResult> {
    require_spins(system, 2, "spatial averaging")?;
    let rho = thermal_deviation(system);
    let steps = sa_sequence(system, gradients);
    let out = run_sequence(&rho, system, &steps)?;
    let mut result = ProtocolResult::new("sa", &rho, out, pps_target(2), 1)?;
    result.sequence = steps;
    Ok(result)
}

#[derive(Debug, Clone, Serialize)]
pub struct LsSolution {
    pub angles_deg: Vec<f64>,
    pub residual: f64,
}

fn ls_generators(n: usize) -> Vec<CMat> {
    if n == 2 {
        let a = pauli_string(2, "IX").unwrap() - pauli_string(2, "ZX").unwrap();
        let b = pauli_string(2, "XI").unwrap() - pauli_string(2, "XZ").unwrap();
        return vec![a.into_matrix(), b.into_matrix()];
    }
    let dim = 1 << n;
    (1..dim - 1).map(|a| (ket_bra(dim, a, a + 1) + ket_bra(dim, a + 1, a)) * linalg::c(2.0)).collect()
}

fn ls_unitary(gens: &[CMat], radians: &[f64]) -> CMat {
    let dim = gens[0].nrows();
    let h = gens.iter().zip(radians).fold(CMat::zeros(dim, dim), |acc, (g, &x)| acc + g * linalg::c(x));
    linalg::unitary_from_generator(&h, 1.0)
}

/// Solves `diag(U ρ U†) = η_max σ` for the transition angles; smallest-norm solution wins.
pub fn ls_solve(system: &SpinSystem) -> Result<LsSolution> {
    let rho = thermal_deviation(system);
    let sigma = pps_target(system.n);
    let eta = exact_transfer_bound(&rho, &sigma)?;
    let target: Vec<f64> = sigma.diagonal().iter().map(|s| eta * s).collect();
    let gens = ls_generators(system.n);
    let m = gens.len();
    let objective = |x: &[f64]| -> f64 {
        let u = ls_unitary(&gens, x);
        let d = linalg::diag_real(&(&u * rho.matrix() * u.adjoint()));
        d.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum()
    };
    let starts: Vec<Vec<f64>> = if m == 2 {
        [0.2, 0.5, 0.8].iter().flat_map(|&a| [0.2, 0.5, 0.8].iter().map(move |&b| vec![a, b])).collect()
    } else {
        let golden = 0.618_033_988_749_895;
        (0..24).map(|k| (0..m).map(|j| 1.5 * ((k + 1) as f64 * golden * (j + 1) as f64).fract()).collect()).collect()
    };
    let opts = NelderMeadOptions { initial_step: 0.05, max_evals: 40_000, ..Default::default() };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut best_residual = f64::INFINITY;
    for s in &starts {
        let min = nelder_mead(objective, s, opts);
        let residual = min.value.max(0.0).sqrt();
        best_residual = best_residual.min(residual);
        if residual <= 1e-6 {
            let norm: f64 = min.x.iter().map(|v| v * v).sum();
            if best.as_ref().is_none_or(|(x, _)| norm < x.iter().map(|v| v * v).sum::<f64>() - 1e-12) {
                best = Some((min.x, residual));
            }
        }
    }
    let (x, residual) = best.ok_or(Error::SolverFailure { residual: best_residual })?;
    Ok(LsSolution { angles_deg: x.iter().map(|r| r.to_degrees()).collect(), residual })
}

/// Level selection: one joint transition-selective rotation, then a gradient.
pub fn ls_method(system: &SpinSystem, angles_deg: Option<&[f64]>) -> Result<ProtocolResult> {
    let gens = ls_generators(system.n);
    let (angles, residual) = match angles_deg {
        Some(a) => {
            if a.len() != gens.len() {
                return Err(Error::InvalidArgument(format!("expected {} angles, got {}", gens.len(), a.len())));
            }
            (a.to_vec(), f64::NAN)
        }
        None => {
            let s = ls_solve(system)?;
            (s.angles_deg, s.residual)
        }
    };
    let rho = thermal_deviation(system);
    let radians: Vec<f64> = angles.iter().map(|d| d.to_radians()).collect();
    let u = ls_unitary(&gens, &radians);
    let rotated = rho.conjugate(&u);
    let out = gradient_channel(&rotated, &system.gamma)?;
    let mut result = ProtocolResult::new("ls", &rho, out, pps_target(system.n), 1)?;
    result.stage("rotated", &rotated);
    result.sequence = vec![
        SequenceStep::Gate { label: format!("U_d({})", angles.iter().map(|a| format!("{a:.4}")).collect::<Vec<_>>().join(", ")), unitary: u },
        SequenceStep::Gradient { weights: system.gamma.clone() },
    ];
    for (k, a) in angles.iter().enumerate() {
        result.extras.insert(format!("x{}_deg", k + 1), *a);
    }
    if residual.is_finite() {
        result.extras.insert("solve_residual".into(), residual);
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy)]
pub struct CtgOptions {
    pub axis: Axis,
    /// Free relaxation after each repetition, seconds.
    pub relax_interval: Option<f64>,
}

impl Default for CtgOptions {
    fn default() -> Self {
        CtgOptions { axis: Axis::X, relax_interval: None }
    }
}

/// Controlled-transition gates from the thermal state.
pub fn ctg_method(system: &SpinSystem, theta1: f64, theta2: f64, repeats: usize) -> Result<ProtocolResult> {
    ctg_run(system, &thermal_deviation(system), theta1, theta2, repeats, CtgOptions::default())
}

/// Controlled-transition gates from an arbitrary deviation `rho0`.
pub fn ctg_run(
    system: &SpinSystem,
    rho0: &HermitianOperator,
    theta1: f64,
    theta2: f64,
    repeats: usize,
    opts: CtgOptions,
) -> Result<ProtocolResult> {
    require_spins(system, 2, "controlled-transition gates")?;
    let sigma = pps_target(2);
    let g1 = gates::controlled_rotation(2, 0, 1, opts.axis, theta1);
    let g2 = gates::controlled_rotation(2, 1, 0, opts.axis, theta2);
    let relax = match opts.relax_interval {
        Some(t) if t > 0.0 => Some((LindbladModel::relaxation(system)?, t)),
        _ => None,
    };
    let grad = SequenceStep::Gradient { weights: system.gamma.clone() };
    let mut steps = vec![
        SequenceStep::Gate { label: format!("CR[1→2]({theta1})"), unitary: g1 },
        grad.clone(),
        SequenceStep::Gate { label: format!("CR[2→1]({theta2})"), unitary: g2 },
        grad,
    ];
    let mut state = rho0.traceless_part();
    let mut rows = vec![TrajectoryRow::new(0.0, &state, &sigma)?];
    for k in 0..repeats {
        state = run_sequence(&state, system, &steps)?;
        if let Some((model, t)) = &relax {
            state = propagate(&with_identity(&state), model, *t, 1)?.traceless_part();
        }
        rows.push(TrajectoryRow::new((k + 1) as f64, &state, &sigma)?);
    }
    if let Some(t) = opts.relax_interval {
        steps.push(SequenceStep::Delay { duration: t });
    }
    let mut result = ProtocolResult::new("ctg", rho0, state, sigma.clone(), 1)?;
    result.sequence = steps;
    result.trajectory = Some(rows);
    result.extras.insert("initial_eta".into(), transfer_efficiency(rho0, &sigma)?);
    Ok(result)
}
