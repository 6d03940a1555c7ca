//! Pseudopure-state preparation protocols and labelled-PPS pipelines.

pub mod gates;
mod lpps;
mod pps;
mod readout;
mod relaxed;

pub use gates::Axis;
pub use lpps::{lpps_conventional, lpps_optimal};
pub use pps::{ctg_method, ctg_run, ls_method, sa_method, sa_sequence, ta_method, CtgOptions, LsSolution};
pub use readout::{readout_spectrum, SpectrumLine};
pub use relaxed::{lss_method, pc_method, LssOptions, PcOptions};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bounds::{transfer_efficiency, TransferReport};
use crate::channels::{self, PhaseCycleScheme};
use crate::error::Result;
use crate::linalg::CMat;
use crate::spinops::{HermitianOperator, SpinSystem};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceStep {
    HardPulse { spins: Vec<usize>, axis: Axis, angle: f64 },
    Delay { duration: f64 },
    Gradient { weights: Vec<f64> },
    PhaseCycle { pairs: Vec<(f64, i8)> },
    Gate {
        label: String,
        #[serde(skip)]
        unitary: CMat,
    },
    Saturation { transitions: Vec<(usize, usize)>, amplitude: f64, duration: f64 },
}

/// Runs the coherent and dephasing steps of a sequence. Spins in `HardPulse` are 1-based.
pub fn run_sequence(rho: &HermitianOperator, system: &SpinSystem, steps: &[SequenceStep]) -> Result<HermitianOperator> {
    let n = system.n;
    let mut state = rho.clone();
    for step in steps {
        state = match step {
            SequenceStep::HardPulse { spins, axis, angle } => {
                let zero_based: Vec<usize> = spins.iter().map(|s| s - 1).collect();
                state.conjugate(&gates::rotation(n, &zero_based, *axis, *angle))
            }
            SequenceStep::Delay { duration } => state.conjugate(&gates::delay(system, *duration)),
            SequenceStep::Gradient { weights } => channels::gradient_channel(&state, weights)?,
            SequenceStep::PhaseCycle { pairs } => {
                channels::phase_cycle_channel(&state, &PhaseCycleScheme::from_pairs(pairs)?)?
            }
            SequenceStep::Gate { unitary, .. } => channels::apply_unitary(&state, unitary)?,
            SequenceStep::Saturation { .. } => {
                return Err(crate::Error::InvalidArgument("saturation steps need the Lindblad engine".into()))
            }
        };
    }
    Ok(state)
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub populations: Vec<f64>,
    pub eta: f64,
}

impl TrajectoryRow {
    pub fn new(t: f64, state: &HermitianOperator, target: &HermitianOperator) -> Result<Self> {
        Ok(TrajectoryRow { t, populations: state.traceless_part().diagonal(), eta: transfer_efficiency(state, target)? })
    }
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub name: String,
    pub state: HermitianOperator,
}

#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub method: String,
    /// Traceless deviation after the protocol.
    pub final_state: HermitianOperator,
    pub target: HermitianOperator,
    pub report: TransferReport,
    pub trajectory: Option<Vec<TrajectoryRow>>,
    pub experiments_used: usize,
    pub sequence: Vec<SequenceStep>,
    pub stages: Vec<Stage>,
    /// Method-specific scalar outputs (solved angles, fixed-point efficiency, ...).
    pub extras: BTreeMap<String, f64>,
}

impl ProtocolResult {
    fn new(
        method: &str,
        rho_in: &HermitianOperator,
        final_state: HermitianOperator,
        target: HermitianOperator,
        experiments_used: usize,
    ) -> Result<Self> {
        let final_state = final_state.traceless_part();
        let report = TransferReport::new(rho_in, &final_state, &target)?;
        Ok(ProtocolResult {
            method: method.to_string(),
            final_state,
            target,
            report,
            trajectory: None,
            experiments_used,
            sequence: Vec::new(),
            stages: Vec::new(),
            extras: BTreeMap::new(),
        })
    }

    fn stage(&mut self, name: &str, state: &HermitianOperator) {
        self.stages.push(Stage { name: name.to_string(), state: state.clone() });
    }

    pub fn stage_state(&self, name: &str) -> Option<&HermitianOperator> {
        self.stages.iter().find(|s| s.name == name).map(|s| &s.state)
    }
}

fn require_spins(system: &SpinSystem, n: usize, method: &str) -> Result<()> {
    if system.n != n {
        return Err(crate::Error::InvalidArgument(format!("{method} needs a {n}-spin system, got {}", system.n)));
    }
    Ok(())
}
