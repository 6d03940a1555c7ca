//! Spectral bounds on state transfer.
//!
//! The efficiency of moving `ρ` onto a traceless target `σ` is the coefficient
//! `η = Tr(ρσ)/Tr(σ²)`. Unitary dynamics confine `η` to an interval fixed by
//! sorted eigenvalue dot products; mixed unitary channels reach `ησ` exactly
//! up to the largest `η` allowed by majorization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::spinops::{HermitianOperator, HERMITIAN_TOL};

pub const MAJORIZATION_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const TIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumVector {
    pub ascending: Vec<f64>,
    pub descending: Vec<f64>,
    pub trace: f64,
}

impl SpectrumVector {
    pub fn from_values(values: &[f64]) -> Self {
        let mut ascending = values.to_vec();
        ascending.sort_by(f64::total_cmp);
        let descending: Vec<f64> = ascending.iter().rev().copied().collect();
        let trace = values.iter().sum();
        SpectrumVector { ascending, descending, trace }
    }

    pub fn len(&self) -> usize {
        self.ascending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ascending.is_empty()
    }

    /// Spectrum with the mean removed.
    pub fn centered(&self) -> Self {
        let shift = self.trace / self.len() as f64;
        let v: Vec<f64> = self.ascending.iter().map(|x| x - shift).collect();
        SpectrumVector::from_values(&v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub eta: f64,
    pub residual_norm: f64,
    pub eta_upper: f64,
    pub eta_lower: f64,
    pub exact_bound: f64,
}

impl TransferReport {
    /// Report for an output state `rho_out` obtained from `rho_in`.
    pub fn new(rho_in: &HermitianOperator, rho_out: &HermitianOperator, sigma: &HermitianOperator) -> Result<Self> {
        let eta = transfer_efficiency(rho_out, sigma)?;
        let (eta_lower, eta_upper) = unitary_bounds(rho_in, sigma)?;
        let exact_bound = exact_transfer_bound(rho_in, sigma)?;
        let residual = rho_out.traceless_part() - sigma.scale(eta);
        Ok(TransferReport { eta, residual_norm: residual.frobenius_norm(), eta_upper, eta_lower, exact_bound })
    }
}

pub fn spectrum(op: &HermitianOperator) -> SpectrumVector {
    if op.is_diagonal(0.0) {
        return SpectrumVector::from_values(&op.diagonal());
    }
    let (vals, _) = linalg::hermitian_eigen(op.matrix());
    SpectrumVector::from_values(&vals)
}

/// Spectrum of a raw matrix, rejecting non-Hermitian input.
pub fn spectrum_of_matrix(m: &CMat) -> Result<SpectrumVector> {
    Ok(spectrum(&HermitianOperator::new(m.clone())?))
}

fn check_lengths(a: &SpectrumVector, b: &SpectrumVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(())
}

/// True when `a` majorizes `b`: every descending partial sum of `b` is at most that of `a`.
pub fn majorizes(a: &SpectrumVector, b: &SpectrumVector) -> Result<bool> {
    check_lengths(a, b)?;
    if (a.trace - b.trace).abs() > TRACE_TOL {
        return Err(Error::Incomparable(a.trace, b.trace));
    }
    let mut sa = 0.0;
    let mut sb = 0.0;
    for (x, y) in a.descending.iter().zip(&b.descending) {
        sa += x;
        sb += y;
        if sb > sa + MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_target(sigma: &HermitianOperator) -> Result<f64> {
    let norm2 = sigma.inner(sigma);
    if norm2 <= f64::MIN_POSITIVE || sigma.max_abs() <= HERMITIAN_TOL {
        return Err(Error::ZeroTarget);
    }
    if sigma.trace().abs() > TRACE_TOL * sigma.max_abs().max(1.0) {
        return Err(Error::InvalidArgument(format!("target must be traceless, trace is {}", sigma.trace())));
    }
    Ok(norm2)
}

fn check_dims(a: &HermitianOperator, b: &HermitianOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), got: a.dim() });
    }
    Ok(())
}

/// `Tr(ρ₀σ)/Tr(σ²)` with `ρ₀` the traceless part of `rho_out`.
pub fn transfer_efficiency(rho_out: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    check_dims(rho_out, sigma)?;
    let norm2 = check_target(sigma)?;
    Ok(rho_out.traceless_part().inner(sigma) / norm2)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Range `(η_lower, η_upper)` of efficiencies reachable from `rho` by a single unitary.
pub fn unitary_bounds(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<(f64, f64)> {
    check_dims(rho, sigma)?;
    check_target(sigma)?;
    Ok(unitary_bounds_from_spectra(&spectrum(rho).centered(), &spectrum(sigma).centered()))
}

pub fn unitary_bounds_from_spectra(rho: &SpectrumVector, sigma: &SpectrumVector) -> (f64, f64) {
    let norm2 = dot(&sigma.descending, &sigma.descending);
    (dot(&rho.ascending, &sigma.descending) / norm2, dot(&rho.descending, &sigma.descending) / norm2)
}

/// Largest `η` with `ησ + (Trρ/N)·I` reachable from `rho` by a mixed unitary channel.
pub fn exact_transfer_bound(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    check_dims(rho, sigma)?;
    check_target(sigma)?;
    Ok(exact_bound_from_spectra(&spectrum(rho), &spectrum(sigma))?.0)
}

/// The bound together with the 1-based partial-sum indices `k` that attain it.
pub fn exact_bound_from_spectra(rho: &SpectrumVector, sigma: &SpectrumVector) -> Result<(f64, Vec<usize>)> {
    check_lengths(rho, sigma)?;
    let n = rho.len();
    let sigma = sigma.centered();
    let shift = rho.trace / n as f64;
    let scale = sigma.descending.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut candidates = Vec::new();
    let (mut sr, mut ss) = (0.0, 0.0);
    for k in 1..n {
        sr += rho.descending[k - 1];
        ss += sigma.descending[k - 1];
        if ss > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            candidates.push((k, (sr - k as f64 * shift) / ss));
        }
    }
    if candidates.is_empty() {
        return Err(Error::Unreachable { index: None, reason: "target has no positive partial sum".into() });
    }
    let eta = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let tight = candidates.iter().filter(|c| c.1 - eta <= TIGHT_TOL * eta.abs().max(1.0)).map(|c| c.0).collect();
    Ok((eta, tight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinops::{pauli_string, pps_target, thermal_deviation, SpinSystem};
    use proptest::prelude::*;

    fn sv(v: &[f64]) -> SpectrumVector {
        SpectrumVector::from_values(v)
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&HermitianOperator::from_diagonal(&[5.0, -3.0, 3.0, -5.0]));
        assert_eq!(s.descending, vec![5.0, 3.0, -3.0, -5.0]);
        assert_eq!(s.ascending, vec![-5.0, -3.0, 3.0, 5.0]);
        let mixed = spectrum(&HermitianOperator::identity(4).scale(0.25));
        assert!(mixed.ascending.iter().all(|x| (x - 0.25).abs() < 1e-15));
        let bad = CMat::from_fn(2, 2, |i, j| linalg::c((i + 2 * j) as f64));
        assert!(matches!(spectrum_of_matrix(&bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn majorization_examples() {
        let pure = sv(&[1.0, 0.0, 0.0, 0.0]);
        let mixed = sv(&[0.25; 4]);
        assert!(majorizes(&pure, &mixed).unwrap());
        assert!(!majorizes(&mixed, &pure).unwrap());
        assert!(majorizes(&pure, &pure).unwrap());
        let target: Vec<f64> = [0.75, -0.25, -0.25, -0.25].iter().map(|x| 20.0 / 3.0 * x).collect();
        assert!(majorizes(&sv(&[5.0, 3.0, -3.0, -5.0]), &sv(&target)).unwrap());
        assert!(matches!(majorizes(&pure, &sv(&[1.0, 1.0, 0.0, 0.0])), Err(Error::Incomparable(..))));
    }

    #[test]
    fn efficiency_examples() {
        let sigma = pps_target(2);
        assert!((transfer_efficiency(&sigma, &sigma).unwrap() - 1.0).abs() < 1e-15);
        let zz = pauli_string(2, "ZZ").unwrap();
        let zi = pauli_string(2, "ZI").unwrap();
        let iz = pauli_string(2, "IZ").unwrap();
        let ta = (&(&zi + &iz) + &zz).scale(5.0 / 3.0);
        assert!((transfer_efficiency(&ta, &sigma).unwrap() - 20.0 / 3.0).abs() < 1e-12);
        let orth = pauli_string(2, "XY").unwrap();
        assert!((transfer_efficiency(&(&sigma + &orth), &sigma).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(transfer_efficiency(&sigma, &HermitianOperator::zeros(4)), Err(Error::ZeroTarget));
    }

    #[test]
    fn chcl3_bounds() {
        let rho = thermal_deviation(&SpinSystem::chcl3());
        let sigma = pps_target(2);
        let (lo, hi) = unitary_bounds(&rho, &sigma).unwrap();
        assert!((hi - 20.0 / 3.0).abs() < 1e-12);
        assert!((lo + 20.0 / 3.0).abs() < 1e-12);
        let (eta, tight) = exact_bound_from_spectra(&spectrum(&rho), &spectrum(&sigma)).unwrap();
        assert!((eta - 20.0 / 3.0).abs() < 1e-12);
        assert_eq!(tight, vec![1]);
        let (lo, hi) = unitary_bounds(&sigma, &sigma).unwrap();
        assert!((hi - 1.0).abs() < 1e-15 && lo <= 1.0);
        assert!((exact_transfer_bound(&sigma, &sigma).unwrap() - 1.0).abs() < 1e-12);
    }

    fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-5.0f64..5.0, n)
    }

    fn centered(v: &[f64]) -> Vec<f64> {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| x - m).collect()
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn bound_ordering(rho in vec_strategy(5), sigma in vec_strategy(5)) {
            let sigma = centered(&sigma);
            prop_assume!(sigma.iter().any(|x| x.abs() > 1e-3));
            let r = HermitianOperator::from_diagonal(&rho);
            let s = HermitianOperator::from_diagonal(&sigma);
            let (lo, hi) = unitary_bounds(&r, &s).unwrap();
            let ex = exact_transfer_bound(&r, &s).unwrap();
            prop_assert!(lo <= ex + 1e-9 && ex <= hi + 1e-9);
        }

        #[test]
        fn rearrangement_attains_upper(rho in vec_strategy(5), sigma in vec_strategy(5)) {
            let sigma = centered(&sigma);
            prop_assume!(sigma.iter().any(|x| x.abs() > 1e-3));
            let s = HermitianOperator::from_diagonal(&sigma);
            let best = all_permutations(5).iter().map(|p| {
                let permuted: Vec<f64> = p.iter().map(|&i| rho[i]).collect();
                transfer_efficiency(&HermitianOperator::from_diagonal(&permuted), &s).unwrap()
            }).fold(f64::NEG_INFINITY, f64::max);
            let (_, hi) = unitary_bounds(&HermitianOperator::from_diagonal(&rho), &s).unwrap();
            prop_assert!((best - hi).abs() < 1e-9);
        }

        #[test]
        fn scaling_covariance(rho in vec_strategy(4), sigma in vec_strategy(4), c in 0.1f64..10.0) {
            let sigma = centered(&sigma);
            prop_assume!(sigma.iter().any(|x| x.abs() > 1e-3));
            let s = HermitianOperator::from_diagonal(&sigma);
            let r = HermitianOperator::from_diagonal(&rho);
            let (lo, hi) = unitary_bounds(&r, &s).unwrap();
            let (lo_c, hi_c) = unitary_bounds(&r.scale(c), &s).unwrap();
            prop_assert!((lo_c - c * lo).abs() < 1e-9 * c.max(1.0) && (hi_c - c * hi).abs() < 1e-9 * c.max(1.0));
        }

        #[test]
        fn degenerate_spectra_are_tie_invariant(a in -3.0f64..3.0, b in -3.0f64..3.0, sigma in vec_strategy(4)) {
            let sigma = centered(&sigma);
            prop_assume!(sigma.iter().any(|x| x.abs() > 1e-3));
            let s = HermitianOperator::from_diagonal(&sigma);
            let one = exact_transfer_bound(&HermitianOperator::from_diagonal(&[a, b, a, b]), &s).unwrap();
            let two = exact_transfer_bound(&HermitianOperator::from_diagonal(&[b, a, b, a]), &s).unwrap();
            prop_assert!((one - two).abs() < 1e-12);
        }

        #[test]
        fn majorization_is_a_partial_order(a in vec_strategy(4), b in vec_strategy(4), c in vec_strategy(4)) {
            let (a, b, c) = (sv(&centered(&a)), sv(&centered(&b)), sv(&centered(&c)));
            prop_assert!(majorizes(&a, &a).unwrap());
            if majorizes(&a, &b).unwrap() && majorizes(&b, &a).unwrap() {
                for (x, y) in a.descending.iter().zip(&b.descending) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
            }
            if majorizes(&a, &b).unwrap() && majorizes(&b, &c).unwrap() {
                prop_assert!(majorizes(&a, &c).unwrap());
            }
        }
    }
}
