use super::gates::{self, level_reversal, Axis};
use super::{run_sequence, ProtocolResult, SequenceStep};
use crate::channels::{apply_mixed_unitary, PhaseCycleScheme};
use crate::error::{Error, Result};
use crate::linalg;
use crate::permutodesign::ExperimentDesign;
use crate::spinops::{kron_all, lpps_target, pauli_string, projector0, thermal_deviation, HermitianOperator, Pauli, SpinSystem};

fn pulse(spins: &[usize], axis: Axis, angle: f64) -> SequenceStep {
    SequenceStep::HardPulse { spins: spins.to_vec(), axis, angle }
}

fn gate(label: &str, unitary: linalg::CMat) -> SequenceStep {
    SequenceStep::Gate { label: label.to_string(), unitary }
}

/// `|0⟩⟨0| ⊗ X ⊗ |0⟩⟨0|`, the decoded form of the three-spin pipeline.
pub fn decoded_form() -> HermitianOperator {
    HermitianOperator::from_matrix_unchecked(kron_all(&[projector0(), Pauli::X.matrix(), projector0()]))
}

/// Phase-cycled labelled-PPS preparation.
///
/// Three spins follow the encode/decode gate sequence ending in `|0⟩⟨0|⊗X⊗|0⟩⟨0|`;
/// other sizes encode `Z₁ → X^{⊗n}` with a CNOT cascade and decode to `Z⊗|0⟩⟨0|^{⊗(n−1)}`.
pub fn lpps_conventional(system: &SpinSystem) -> Result<ProtocolResult> {
    let n = system.n;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("labelled PPS needs at least 2 spins, got {n}")));
    }
    let rho = thermal_deviation(system);
    let grad = SequenceStep::Gradient { weights: system.gamma.clone() };
    let scheme = PhaseCycleScheme::select_highest(n)?;
    let cycle = SequenceStep::PhaseCycle { pairs: scheme.to_pairs() };

    let (reduce, encode, decode, target) = if n == 3 {
        (
            vec![pulse(&[1, 3], Axis::X, 90.0), grad],
            vec![
                pulse(&[2], Axis::Y, 90.0),
                gate("ZZ(1,2)", gates::zz_gate(3, 0, 1)),
                pulse(&[1], Axis::Y, 90.0),
                gate("ZZ(1,3)", gates::zz_gate(3, 0, 2)),
                pulse(&[3], Axis::Y, 90.0),
            ],
            vec![
                pulse(&[3], Axis::MinusY, 90.0),
                gate("ZZ(1,3)", gates::zz_gate(3, 0, 2)),
                pulse(&[1], Axis::MinusY, 90.0),
                gate("ZZ(1,2)", gates::zz_gate(3, 0, 1)),
                pulse(&[1, 3], Axis::MinusX, 90.0),
            ],
            decoded_form(),
        )
    } else {
        let others: Vec<usize> = (2..=n).collect();
        (
            vec![pulse(&others, Axis::X, 90.0), grad],
            vec![pulse(&[1], Axis::Y, 90.0), gate("CNOT cascade", gates::cnot_cascade(n))],
            vec![gate("CNOT cascade", gates::cnot_cascade(n)), pulse(&[1], Axis::MinusY, 90.0)],
            lpps_target(n)?,
        )
    };

    let reduced = run_sequence(&rho, system, &reduce)?;
    let encoded = run_sequence(&reduced, system, &encode)?;
    let selected = run_sequence(&encoded, system, std::slice::from_ref(&cycle))?;
    let decoded = run_sequence(&selected, system, &decode)?;

    let mut result = ProtocolResult::new("lpps-conventional", &rho, decoded, target, scheme.len())?;
    result.stage("reduced", &reduced);
    result.stage("encoded", &encoded);
    result.stage("selected", &selected);
    result.sequence = [reduce, encode, vec![cycle], decode].concat();
    Ok(result)
}

/// Two-experiment labelled PPS: `Z⊗I` averaged with its image under the level reversal.
pub fn lpps_optimal(n: usize) -> Result<ProtocolResult> {
    let target = lpps_target(n)?;
    let spec: String = std::iter::once('Z').chain(std::iter::repeat_n('I', n - 1)).collect();
    let rho = pauli_string(n, &spec)?;
    let dim = 1 << n;
    let design = ExperimentDesign::from_permutations(&[(0.5, (0..dim).collect()), (0.5, level_reversal(dim))], 1.0)?;
    let out = apply_mixed_unitary(&rho, &design)?;
    let mut result = ProtocolResult::new("lpps-optimal", &rho, out, target, design.len())?;
    result.sequence = design
        .entries()
        .iter()
        .map(|e| gate(&crate::permutodesign::perm::cycle_notation(e.permutation.as_deref().unwrap_or(&[])), e.unitary.clone()))
        .collect();
    Ok(result)
}
