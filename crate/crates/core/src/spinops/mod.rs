//! Operator algebra for systems of spin-½ nuclei: Pauli products, thermal and
//! target states, and coherence-order bookkeeping.

mod operator;
mod system;

pub use operator::{HermitianOperator, HERMITIAN_TOL};
pub use system::SpinSystem;

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> CMat {
        match self {
            Pauli::I => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
            Pauli::X => CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            Pauli::Y => CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
            Pauli::Z => CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Bit of spin `k` (0-based, spin 0 most significant) in basis index `index`.
pub fn spin_bit(index: usize, k: usize, n: usize) -> usize {
    (index >> (n - 1 - k)) & 1
}

/// Kronecker product of single-spin matrices, one per spin in index order.
pub fn kron_all(factors: &[CMat]) -> CMat {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| linalg::kron(&acc, f))
}

/// Places a 2×2 matrix on spin `k` of an `n`-spin register.
pub fn embed(single: &CMat, k: usize, n: usize) -> CMat {
    let factors: Vec<CMat> =
        (0..n).map(|q| if q == k { single.clone() } else { Pauli::I.matrix() }).collect();
    kron_all(&factors)
}

/// Kronecker product of the named Pauli labels, e.g. `"ZI"` for Z⊗I.
pub fn pauli_string(n: usize, spec: &str) -> Result<HermitianOperator> {
    let labels: Vec<Pauli> = spec
        .chars()
        .enumerate()
        .map(|(pos, ch)| {
            Pauli::from_char(ch).ok_or_else(|| Error::InvalidSpec(format!("label {ch:?} at position {pos}")))
        })
        .collect::<Result<_>>()?;
    pauli_product(n, &labels)
}

pub fn pauli_product(n: usize, labels: &[Pauli]) -> Result<HermitianOperator> {
    if labels.len() != n {
        return Err(Error::InvalidSpec(format!("{} labels for {n} spins", labels.len())));
    }
    let factors: Vec<CMat> = labels.iter().map(|p| p.matrix()).collect();
    Ok(HermitianOperator::from_matrix_unchecked(kron_all(&factors)))
}

/// Single-spin Pauli `p` acting on spin `k` (0-based).
pub fn single_spin(n: usize, k: usize, p: Pauli) -> HermitianOperator {
    HermitianOperator::from_matrix_unchecked(embed(&p.matrix(), k, n))
}

/// Traceless thermal deviation `Σ_i ε_i γ_i Z_i`, in units of the symbolic ε.
pub fn thermal_deviation(system: &SpinSystem) -> HermitianOperator {
    let n = system.n;
    let diag: Vec<f64> = (0..system.dim())
        .map(|idx| {
            (0..n)
                .map(|k| {
                    let z = 1.0 - 2.0 * spin_bit(idx, k, n) as f64;
                    system.polarization[k] * system.gamma[k] * z
                })
                .sum()
        })
        .collect();
    HermitianOperator::from_diagonal(&diag)
}

/// Traceless pseudopure target `|0…0⟩⟨0…0| − I/2ⁿ`.
pub fn pps_target(n: usize) -> HermitianOperator {
    let dim = 1usize << n;
    let mut diag = vec![-1.0 / dim as f64; dim];
    diag[0] += 1.0;
    HermitianOperator::from_diagonal(&diag)
}

/// Labelled pseudopure target `Z ⊗ |0⟩⟨0|^{⊗(n−1)}`.
pub fn lpps_target(n: usize) -> Result<HermitianOperator> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("labelled PPS needs at least 2 spins, got {n}")));
    }
    let dim = 1usize << n;
    let mut diag = vec![0.0; dim];
    diag[0] = 1.0;
    diag[dim / 2] = -1.0;
    Ok(HermitianOperator::from_diagonal(&diag))
}

/// Weighted coherence order of the element `|i⟩⟨j|`: `Σ_k w_k (b_k(j) − b_k(i))`.
pub fn coherence_order(i: usize, j: usize, weights: &[f64]) -> f64 {
    let n = weights.len();
    weights
        .iter()
        .enumerate()
        .map(|(k, w)| w * (spin_bit(j, k, n) as f64 - spin_bit(i, k, n) as f64))
        .sum()
}

const ORDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct CoherenceComponent {
    pub order: f64,
    pub matrix: CMat,
}

/// Split of an operator into its coherence-order components, sorted by order.
#[derive(Debug, Clone)]
pub struct CoherenceDecomposition {
    components: Vec<CoherenceComponent>,
}

impl CoherenceDecomposition {
    pub fn components(&self) -> &[CoherenceComponent] {
        &self.components
    }

    pub fn orders(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.order).collect()
    }

    pub fn get(&self, order: f64) -> Option<&CMat> {
        self.components.iter().find(|c| (c.order - order).abs() < ORDER_TOL).map(|c| &c.matrix)
    }

    pub fn reconstruct(&self) -> CMat {
        let dim = self.components.first().map_or(0, |c| c.matrix.nrows());
        self.components.iter().fold(CMat::zeros(dim, dim), |acc, c| acc + &c.matrix)
    }
}

/// Splits `op` by weighted coherence order. Components that vanish (`≤ 1e-14`) are omitted.
pub fn coherence_decompose(op: &HermitianOperator, weights: &[f64]) -> Result<CoherenceDecomposition> {
    let n = weights.len();
    let dim = op.dim();
    if dim != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: dim });
    }
    let mut components: Vec<CoherenceComponent> = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let v = op.get(i, j);
            if v.norm() <= 1e-14 {
                continue;
            }
            let order = coherence_order(i, j, weights);
            let slot = match components.iter().position(|c| (c.order - order).abs() < ORDER_TOL) {
                Some(p) => p,
                None => {
                    components.push(CoherenceComponent { order, matrix: CMat::zeros(dim, dim) });
                    components.len() - 1
                }
            };
            components[slot].matrix[(i, j)] = v;
        }
    }
    components.sort_by(|a, b| a.order.total_cmp(&b.order));
    Ok(CoherenceDecomposition { components })
}

/// Collective z generator `Σ_k w_k Z_k / 2`.
pub fn collective_z(weights: &[f64]) -> HermitianOperator {
    let n = weights.len();
    let diag: Vec<f64> = (0..1usize << n)
        .map(|idx| {
            weights.iter().enumerate().map(|(k, w)| w * 0.5 * (1.0 - 2.0 * spin_bit(idx, k, n) as f64)).sum()
        })
        .collect();
    HermitianOperator::from_diagonal(&diag)
}

/// `|a⟩⟨b|` in a `dim`-level space.
pub fn ket_bra(dim: usize, a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(dim, dim);
    m[(a, b)] = ONE;
    m
}

/// Single-spin lowering operator `|0⟩⟨1|` (toward the low-energy state).
pub fn lowering() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn raising() -> CMat {
    lowering().adjoint()
}

pub fn projector0() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])
}

pub fn projector1() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE])
}
