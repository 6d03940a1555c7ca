use super::Dissipator;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::spinops::{embed, kron_all, lowering, raising, HermitianOperator, Pauli, SpinSystem};

/// Per-spin longitudinal and transverse relaxation.
///
/// Each spin gets `σ⁻` and `σ⁺` at rate `1/(4T1)` and a `Z` dephasing term at
/// rate `1/(4T2) − 1/(8T1)`; with the factor-2 dissipator form this gives
/// population recovery at `1/T1` and coherence decay at `1/T2`. Infinite times
/// contribute nothing.
pub fn standard_relaxation(system: &SpinSystem) -> Result<Vec<Dissipator>> {
    let n = system.n;
    let mut out = Vec::new();
    for k in 0..n {
        let (t1, t2) = (system.t1[k], system.t2[k]);
        if !(t1 > 0.0 && t2 > 0.0) {
            return Err(Error::Unphysical(format!("spin {}: relaxation times must be positive", k + 1)));
        }
        if t2 > 2.0 * t1 {
            return Err(Error::Unphysical(format!("spin {}: T2 = {t2} exceeds 2·T1 = {}", k + 1, 2.0 * t1)));
        }
        let longitudinal = 1.0 / (4.0 * t1);
        if longitudinal > 0.0 {
            out.push(Dissipator { op: embed(&lowering(), k, n), rate: longitudinal });
            out.push(Dissipator { op: embed(&raising(), k, n), rate: longitudinal });
        }
        let dephasing = (1.0 / (4.0 * t2) - 1.0 / (8.0 * t1)).max(0.0);
        if dephasing > 0.0 {
            out.push(Dissipator { op: embed(&Pauli::Z.matrix(), k, n), rate: dephasing });
        }
    }
    Ok(out)
}

/// Double-quantum cross-relaxation between spins `a` and `b`: `σ⁻σ⁻` and `σ⁺σ⁺` at equal `rate`.
pub fn cross_relaxation(n: usize, a: usize, b: usize, rate: f64) -> Vec<Dissipator> {
    if rate <= 0.0 {
        return Vec::new();
    }
    let pair = |single: CMat| {
        let factors: Vec<CMat> =
            (0..n).map(|q| if q == a || q == b { single.clone() } else { Pauli::I.matrix() }).collect();
        kron_all(&factors)
    };
    vec![Dissipator { op: pair(lowering()), rate }, Dissipator { op: pair(raising()), rate }]
}

/// On-resonance coupling Hamiltonian `Σ_{i<j} π J_ij Z_i Z_j / 2` (rad/s).
pub fn scalar_coupling(system: &SpinSystem) -> HermitianOperator {
    let n = system.n;
    let dim = system.dim();
    let mut diag = vec![0.0; dim];
    for (idx, d) in diag.iter_mut().enumerate() {
        for i in 0..n {
            for j in i + 1..n {
                let zi = 1.0 - 2.0 * crate::spinops::spin_bit(idx, i, n) as f64;
                let zj = 1.0 - 2.0 * crate::spinops::spin_bit(idx, j, n) as f64;
                *d += std::f64::consts::PI * system.coupling(i, j) * zi * zj / 2.0;
            }
        }
    }
    HermitianOperator::from_diagonal(&diag)
}
