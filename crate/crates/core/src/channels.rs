//! Unitary, mixed unitary, gradient and phase-cycling channels.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};
use crate::permutodesign::ExperimentDesign;
use crate::spinops::{coherence_order, collective_z, HermitianOperator};

pub const UNITARY_TOL: f64 = 1e-10;
const ORDER_TOL: f64 = 1e-9;

fn check_dim(rho: &HermitianOperator, dim: usize) -> Result<()> {
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: rho.dim() });
    }
    Ok(())
}

fn spins_for(dim: usize) -> Result<usize> {
    if !linalg::is_power_of_two(dim) {
        return Err(Error::InvalidArgument(format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub fn apply_unitary(rho: &HermitianOperator, u: &CMat) -> Result<HermitianOperator> {
    check_dim(rho, u.nrows())?;
    linalg::check_unitary(u, UNITARY_TOL)?;
    Ok(rho.conjugate(u))
}

/// `Σ_k μ_k U_k ρ U_k†`.
pub fn apply_mixed_unitary(rho: &HermitianOperator, design: &ExperimentDesign) -> Result<HermitianOperator> {
    check_dim(rho, design.dim())?;
    let dim = rho.dim();
    let sum = design.entries().iter().fold(CMat::zeros(dim, dim), |acc, e| {
        acc + (&e.unitary * rho.matrix() * e.unitary.adjoint()) * c(e.weight)
    });
    Ok(HermitianOperator::from_matrix_unchecked(sum))
}

/// Ideal field-gradient dephasing: keeps only elements of zero weighted coherence order.
pub fn gradient_channel(rho: &HermitianOperator, weights: &[f64]) -> Result<HermitianOperator> {
    check_dim(rho, 1 << weights.len())?;
    let m = CMat::from_fn(rho.dim(), rho.dim(), |i, j| {
        if coherence_order(i, j, weights).abs() < ORDER_TOL {
            rho.get(i, j)
        } else {
            linalg::ZERO
        }
    });
    Ok(HermitianOperator::from_matrix_unchecked(m))
}

/// Collective phase shifts `θ_k` with receiver signs and weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCycleScheme {
    phases: Vec<f64>,
    signs: Vec<i8>,
    weights: Vec<f64>,
}

impl PhaseCycleScheme {
    pub fn new(phases: Vec<f64>, signs: Vec<i8>, weights: Option<Vec<f64>>) -> Result<Self> {
        let k = phases.len();
        if k == 0 || signs.len() != k {
            return Err(Error::InvalidArgument(format!("{k} phases with {} signs", signs.len())));
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidArgument("receiver signs must be ±1".into()));
        }
        let weights = weights.unwrap_or_else(|| vec![1.0 / k as f64; k]);
        if weights.len() != k || weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidArgument("weights must be positive, one per phase".into()));
        }
        if (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("weights must sum to one".into()));
        }
        Ok(PhaseCycleScheme { phases, signs, weights })
    }

    /// `θ_k = 2πk/K` with all signs positive.
    pub fn uniform(k: usize) -> Result<Self> {
        let phases = (0..k).map(|i| 2.0 * PI * i as f64 / k as f64).collect();
        Self::new(phases, vec![1; k], None)
    }

    /// `θ_k = 2πk/K` with receiver signs `(−1)^k`.
    pub fn alternating(k: usize) -> Result<Self> {
        let phases = (0..k).map(|i| 2.0 * PI * i as f64 / k as f64).collect();
        let signs = (0..k).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        Self::new(phases, signs, None)
    }

    /// Scheme selecting the `±n` coherences of an `n`-spin register.
    pub fn select_highest(n: usize) -> Result<Self> {
        if n % 2 == 1 {
            Self::uniform(n)
        } else {
            Self::alternating(2 * n)
        }
    }

    /// `(degrees, sign)` pairs.
    pub fn from_pairs(pairs: &[(f64, i8)]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| p.0.to_radians()).collect(), pairs.iter().map(|p| p.1).collect(), None)
    }

    pub fn to_pairs(&self) -> Vec<(f64, i8)> {
        self.phases.iter().zip(&self.signs).map(|(p, &s)| (p.to_degrees(), s)).collect()
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Multiplier applied to the order-`ν` component: `Σ_k w_k s_k e^{−iνθ_k}`.
    pub fn factor(&self, order: f64) -> Complex64 {
        self.phases
            .iter()
            .zip(&self.signs)
            .zip(&self.weights)
            .map(|((&th, &s), &w)| Complex64::from_polar(w * s as f64, -order * th))
            .sum()
    }

    pub fn trace_factor(&self) -> f64 {
        self.signs.iter().zip(&self.weights).map(|(&s, w)| s as f64 * w).sum()
    }
}

/// `Σ_k w_k s_k R_k ρ R_k†` with `R_k = exp(−iθ_k Σ_j Z_j/2)`.
pub fn phase_cycle_channel(rho: &HermitianOperator, scheme: &PhaseCycleScheme) -> Result<HermitianOperator> {
    let n = spins_for(rho.dim())?;
    phase_cycle_weighted(rho, scheme, &vec![1.0; n])
}

/// Phase cycle about the weighted collective axis `Σ_j w_j Z_j/2`.
pub fn phase_cycle_weighted(rho: &HermitianOperator, scheme: &PhaseCycleScheme, weights: &[f64]) -> Result<HermitianOperator> {
    check_dim(rho, 1 << weights.len())?;
    let gen = collective_z(weights);
    let dim = rho.dim();
    let mut sum = CMat::zeros(dim, dim);
    for ((&th, &s), &w) in scheme.phases.iter().zip(&scheme.signs).zip(&scheme.weights) {
        let r = linalg::unitary_from_generator(gen.matrix(), th);
        sum += (&r * rho.matrix() * r.adjoint()) * c(w * s as f64);
    }
    Ok(HermitianOperator::from_matrix_unchecked(sum))
}
