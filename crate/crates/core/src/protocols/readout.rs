use num_complex::Complex64;
use serde::Serialize;

use super::gates::{rotation, Axis};
use crate::error::{Error, Result};
use crate::spinops::{spin_bit, HermitianOperator, SpinSystem};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumLine {
    /// Offset from the observed spin's resonance, Hz.
    pub frequency: f64,
    pub amplitude: Complex64,
}

/// Stick spectrum of spin `observe` (0-based) after a 90° y readout pulse, weak coupling.
pub fn readout_spectrum(rho: &HermitianOperator, system: &SpinSystem, observe: usize) -> Result<Vec<SpectrumLine>> {
    let n = system.n;
    if observe >= n {
        return Err(Error::InvalidArgument(format!("spin index {observe} out of range for {n} spins")));
    }
    if rho.dim() != system.dim() {
        return Err(Error::DimensionMismatch { expected: system.dim(), got: rho.dim() });
    }
    let read = rho.conjugate(&rotation(n, &[observe], Axis::Y, 90.0));
    let mask = 1usize << (n - 1 - observe);
    let mut lines = Vec::new();
    for a in (0..system.dim()).filter(|a| a & mask == 0) {
        let b = a | mask;
        let amplitude = read.get(a, b);
        if amplitude.norm() <= 1e-12 {
            continue;
        }
        let frequency = (0..n)
            .filter(|&j| j != observe)
            .map(|j| {
                let sign = if spin_bit(a, j, n) == 0 { 1.0 } else { -1.0 };
                sign * system.coupling(observe, j) / 2.0
            })
            .sum();
        lines.push(SpectrumLine { frequency, amplitude });
    }
    Ok(lines)
}
