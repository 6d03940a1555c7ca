//! Haar-random unitaries for empirical bound checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use statebound::linalg::CMat;

pub fn haar_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let z = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_and_reproducible() {
        let a = haar_unitary(&mut ChaCha8Rng::seed_from_u64(4), 5);
        let b = haar_unitary(&mut ChaCha8Rng::seed_from_u64(4), 5);
        assert_eq!(a, b);
        assert!(statebound::linalg::unitarity_defect(&a) < 1e-12);
    }
}
