use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};

/// Relative Hermiticity tolerance applied at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix. States, targets and Hamiltonians all use this type.
///
/// States are usually handled as a traceless deviation plus an identity
/// coefficient; see [`HermitianOperator::traceless_part`] and
/// [`HermitianOperator::identity_coefficient`].
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMat,
}

impl HermitianOperator {
    /// Validates Hermiticity to `1e-12 * max|A|` and stores the symmetrized matrix.
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL * linalg::max_abs(&matrix) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    /// Symmetrizes `(A + A†)/2` without validation. Callers must know the input is Hermitian
    /// up to rounding.
    pub fn from_matrix_unchecked(matrix: CMat) -> Self {
        let sym = (&matrix + matrix.adjoint()) * c(0.5);
        Self { matrix: sym }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMat::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: linalg::identity(dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self { matrix: linalg::from_diag(diag) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Coefficient `c` of the identity in `A = c·I + traceless`.
    pub fn identity_coefficient(&self) -> f64 {
        self.trace() / self.dim() as f64
    }

    pub fn traceless_part(&self) -> Self {
        let shift = self.identity_coefficient();
        let mut m = self.matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= c(shift);
        }
        Self { matrix: m }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        linalg::diag_real(&self.matrix)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }

    /// `Tr(A·B)`, real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> f64 {
        self.matrix.iter().zip(other.matrix.transpose().iter()).map(|(a, b)| a * b).sum::<Complex64>().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius(&self.matrix)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    /// `max |A_ij - B_ij|`.
    pub fn distance(&self, other: &Self) -> f64 {
        linalg::max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: &self.matrix * c(factor) }
    }

    /// `U A U†` for any square `U` of matching size.
    pub fn conjugate(&self, u: &CMat) -> Self {
        Self::from_matrix_unchecked(u * &self.matrix * u.adjoint())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { matrix: linalg::kron(&self.matrix, &other.matrix) }
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianOperator(dim={}, diag={:?})", self.dim(), self.diagonal())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix - &rhs.matrix }
    }
}

impl Add for HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        &self + &rhs
    }
}

impl Sub for HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        &self - &rhs
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

impl Mul<f64> for HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

impl Neg for HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}
