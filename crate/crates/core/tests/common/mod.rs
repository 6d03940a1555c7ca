#![allow(dead_code)]

pub mod lp;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use statebound::linalg::CMat;
use statebound::HermitianOperator;

/// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let z = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianOperator {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    HermitianOperator::from_matrix_unchecked((&g + g.adjoint()) * Complex64::new(0.5, 0.0))
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()
}

/// Random traceless vector with at least one positive entry.
pub fn random_traceless<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let v = random_vector(rng, n);
    let mean = v.iter().sum::<f64>() / n as f64;
    v.iter().map(|x| x - mean).collect()
}
