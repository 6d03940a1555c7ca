//! Dense complex matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(a: &CMat) -> Complex64 {
    a.trace()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry of `|A - A†|`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn check_unitary(u: &CMat, tol: f64) -> Result<()> {
    if !u.is_square() {
        return Err(Error::NotUnitary(f64::INFINITY));
    }
    let d = unitarity_defect(u);
    if d > tol {
        return Err(Error::NotUnitary(d));
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix (eigenvalues unsorted).
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let sym = (a + a.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `exp(-i * angle * H)` for Hermitian `H`, evaluated through the spectral decomposition.
pub fn unitary_from_generator(h: &CMat, angle: f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(h);
    let phases = CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&l| Complex64::from_polar(1.0, -angle * l)),
    );
    let scaled = CMat::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * phases[j]);
    scaled * vecs.adjoint()
}

/// Permutation matrix `P` with `(P x)_i = x_{perm[i]}`, so `P diag(x) P†` has diagonal `x[perm[i]]`.
pub fn permutation_matrix(perm: &[usize]) -> CMat {
    let n = perm.len();
    let mut p = CMat::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = ONE;
    }
    p
}

pub fn diag_real(a: &CMat) -> Vec<f64> {
    (0..a.nrows()).map(|i| a[(i, i)].re).collect()
}

pub fn from_diag(d: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(d.len(), d.iter().map(|&x| c(x))))
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}
