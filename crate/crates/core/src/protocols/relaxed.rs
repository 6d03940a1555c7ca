use std::f64::consts::PI;

use super::gates::level_cycle;
use super::{require_spins, ProtocolResult, SequenceStep, TrajectoryRow};
use crate::bounds::transfer_efficiency;
use crate::error::{Error, Result};
use crate::linalg::{self, I};
use crate::lindblad::{
    cross_relaxation, fixed_point, periodic_map, propagate_periodic, with_identity, Dissipator, LindbladModel, Schedule,
};
use crate::spinops::{ket_bra, pps_target, thermal_deviation, HermitianOperator, SpinSystem};

#[derive(Debug, Clone, Copy, Default)]
pub struct PcOptions {
    /// Double-quantum cross-relaxation rate applied to every spin pair, 1/s.
    pub cross_relaxation: f64,
}

fn cross_terms(n: usize, rate: f64) -> Vec<Dissipator> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.extend(cross_relaxation(n, a, b, rate));
        }
    }
    out
}

fn relaxation_model(system: &SpinSystem, cross: f64) -> Result<LindbladModel> {
    if cross < 0.0 {
        return Err(Error::InvalidArgument(format!("cross-relaxation rate must be non-negative, got {cross}")));
    }
    LindbladModel::relaxation(system)?.with_dissipators(cross_terms(system.n, cross))
}

/// Permutation cycling: `m` rounds of the level cycle `V` followed by free relaxation for `tau`.
pub fn pc_method(system: &SpinSystem, tau: f64, loops: usize, opts: PcOptions) -> Result<ProtocolResult> {
    let dim = system.dim();
    let sigma = pps_target(system.n);
    let rho = thermal_deviation(system);
    let model = relaxation_model(system, opts.cross_relaxation)?;
    let v = linalg::permutation_matrix(&level_cycle(dim));
    let map = periodic_map(&v, tau, &model)?;

    let mut state = with_identity(&rho).into_matrix();
    let mut rows = vec![TrajectoryRow::new(0.0, &rho, &sigma)?];
    for k in 0..loops {
        state = map.apply(&state);
        let s = HermitianOperator::from_matrix_unchecked(state.clone());
        rows.push(TrajectoryRow::new((k + 1) as f64 * tau, &s, &sigma)?);
    }
    let last = HermitianOperator::from_matrix_unchecked(state);
    let mut result = ProtocolResult::new("pc", &rho, last, sigma.clone(), 1)?;
    if loops >= 1 {
        let change = (rows[loops].eta - rows[loops - 1].eta).abs();
        result.extras.insert("last_change".into(), change);
    }
    match fixed_point(&map) {
        Ok(fp) => {
            result.extras.insert("fixed_point_eta".into(), transfer_efficiency(&fp, &sigma)?);
            result.stage("fixed_point", &fp.traceless_part());
        }
        Err(Error::NonUniqueFixedPoint(m)) => {
            result.extras.insert("fixed_point_multiplicity".into(), m as f64);
        }
        Err(e) => return Err(e),
    }
    result.extras.insert("tau".into(), tau);
    result.extras.insert("loops".into(), loops as f64);
    result.sequence = vec![
        SequenceStep::Gate { label: "V".into(), unitary: v },
        SequenceStep::Delay { duration: tau },
    ];
    result.trajectory = Some(rows);
    Ok(result)
}

#[derive(Debug, Clone, Copy)]
pub struct LssOptions {
    pub cross_relaxation: f64,
    /// Integrator slices per drive period.
    pub slices_per_period: usize,
}

impl Default for LssOptions {
    fn default() -> Self {
        LssOptions { cross_relaxation: 0.0, slices_per_period: 96 }
    }
}

/// Line-selective saturation: resonant drives on `|10⟩↔|11⟩` and `|01⟩↔|11⟩` under relaxation.
///
/// `amplitude` is the Rabi frequency Ω in rad/s; the drive is written in the frame
/// where the coupling Hamiltonian `πJ Z₁Z₂/2` is the drift, so both transitions
/// sit at `πJ` rad/s.
pub fn lss_method(system: &SpinSystem, amplitude: f64, duration: f64, opts: LssOptions) -> Result<ProtocolResult> {
    require_spins(system, 2, "line-selective saturation")?;
    let sigma = pps_target(2);
    let rho = thermal_deviation(system);
    let j = system.coupling(0, 1);
    let omega = PI * j;

    let x_part = ket_bra(4, 2, 3) + ket_bra(4, 3, 2) + ket_bra(4, 1, 3) + ket_bra(4, 3, 1);
    let y_part = (ket_bra(4, 2, 3) + ket_bra(4, 1, 3)) * (-I) + (ket_bra(4, 3, 2) + ket_bra(4, 3, 1)) * I;
    let controls = vec![
        (HermitianOperator::new(x_part)?, Schedule::Cosine { amplitude: amplitude / 2.0, omega, phase: 0.0 }),
        (HermitianOperator::new(y_part)?, Schedule::Cosine { amplitude: amplitude / 2.0, omega, phase: PI / 2.0 }),
    ];
    let model = relaxation_model(system, opts.cross_relaxation)?.with_controls(controls)?;
    let (last, points) = propagate_periodic(&with_identity(&rho), &model, duration, opts.slices_per_period)?;
    let rows = points.iter().map(|p| TrajectoryRow::new(p.t, &p.state, &sigma)).collect::<Result<Vec<_>>>()?;

    let mut result = ProtocolResult::new("lss", &rho, last, sigma, 1)?;
    let pops = result.final_state.diagonal();
    let excited = &pops[1..];
    let mean = excited.iter().sum::<f64>() / excited.len() as f64;
    let spread = excited.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p)) - excited.iter().fold(f64::INFINITY, |m, &p| m.min(p));
    result.extras.insert("rho11_start".into(), rho.diagonal()[0]);
    result.extras.insert("rho11_end".into(), pops[0]);
    result.extras.insert("saturation_spread".into(), spread / mean.abs());
    result.sequence = vec![SequenceStep::Saturation { transitions: vec![(3, 4), (2, 4)], amplitude, duration }];
    result.trajectory = Some(rows);
    Ok(result)
}
