mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statebound::bounds::{
    exact_bound_from_spectra, exact_transfer_bound, majorizes, spectrum, transfer_efficiency, unitary_bounds, SpectrumVector,
};
use statebound::permutodesign::ray_intersection;
use statebound::spinops::{pauli_string, pps_target, thermal_deviation};
use statebound::{Error, HermitianOperator, SpinSystem};

use common::{haar_unitary, lp, random_hermitian, random_traceless, random_vector};

fn chcl3_rho() -> HermitianOperator {
    &pauli_string(2, "ZI").unwrap() + &pauli_string(2, "IZ").unwrap().scale(4.0)
}

#[test]
fn two_spin_pps_efficiency() {
    let averaged =
        (&(&pauli_string(2, "ZI").unwrap() + &pauli_string(2, "IZ").unwrap()) + &pauli_string(2, "ZZ").unwrap()).scale(5.0 / 3.0);
    assert!((transfer_efficiency(&averaged, &pps_target(2)).unwrap() - 20.0 / 3.0).abs() < 1e-12);
    let (_, hi) = unitary_bounds(&chcl3_rho(), &pps_target(2)).unwrap();
    assert!((hi - 20.0 / 3.0).abs() < 1e-12);
    assert!((exact_transfer_bound(&chcl3_rho(), &pps_target(2)).unwrap() - 20.0 / 3.0).abs() < 1e-12);
    let (eta, tight) = exact_bound_from_spectra(&spectrum(&chcl3_rho()), &spectrum(&pps_target(2))).unwrap();
    assert!((eta - 20.0 / 3.0).abs() < 1e-12);
    assert_eq!(tight, vec![1]);
    assert_eq!(thermal_deviation(&SpinSystem::chcl3()).distance(&chcl3_rho()), 0.0);
}

#[test]
fn majorization_against_scaled_pps() {
    let a = SpectrumVector::from_values(&[5.0, 3.0, -3.0, -5.0]);
    let b = SpectrumVector::from_values(&[5.0, -5.0 / 3.0, -5.0 / 3.0, -5.0 / 3.0]);
    assert!(majorizes(&a, &b).unwrap());
    assert!(!majorizes(&b, &a).unwrap());
    let c = SpectrumVector::from_values(&[5.0 + 1e-6, -5.0 / 3.0, -5.0 / 3.0, -5.0 / 3.0 - 1e-6]);
    assert!(!majorizes(&a, &c).unwrap());
    let pure = SpectrumVector::from_values(&[1.0, 0.0, 0.0, 0.0]);
    assert!(majorizes(&pure, &SpectrumVector::from_values(&[0.25; 4])).unwrap());
    assert!(matches!(majorizes(&pure, &a), Err(Error::Incomparable(..))));
}

#[test]
fn orthogonal_residual_is_invisible() {
    let sigma = pps_target(2);
    let residual = pauli_string(2, "XY").unwrap().scale(3.0);
    let mixed = &sigma + &residual;
    assert!((transfer_efficiency(&mixed, &sigma).unwrap() - 1.0).abs() < 1e-12);
    assert!(matches!(transfer_efficiency(&mixed, &HermitianOperator::zeros(4)), Err(Error::ZeroTarget)));
}

#[test]
fn monte_carlo_unitaries_stay_inside_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        (chcl3_rho(), pps_target(2)),
        (random_hermitian(&mut rng, 4), random_hermitian(&mut rng, 4).traceless_part()),
        (random_hermitian(&mut rng, 5), random_hermitian(&mut rng, 5).traceless_part()),
    ];
    for (rho, sigma) in &cases {
        let (lo, hi) = unitary_bounds(rho, sigma).unwrap();
        let mut seen = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..1000 {
            let u = haar_unitary(&mut rng, rho.dim());
            let eta = transfer_efficiency(&rho.conjugate(&u), sigma).unwrap();
            assert!(lo - 1e-9 <= eta && eta <= hi + 1e-9, "{lo} {eta} {hi}");
            seen = (seen.0.min(eta), seen.1.max(eta));
        }
        assert!(seen.0 < seen.1);
    }
}

#[test]
fn exact_bound_matches_linear_program() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [3, 4, 5] {
        for _ in 0..6 {
            let rho = random_vector(&mut rng, n);
            let sigma = random_traceless(&mut rng, n);
            let oracle = lp::permutation_hull_max_eta(&rho, &sigma);
            let got = exact_transfer_bound(&HermitianOperator::from_diagonal(&rho), &HermitianOperator::from_diagonal(&sigma)).unwrap();
            assert!((got - oracle).abs() < 1e-8, "n={n} {got} {oracle}");
            let (ray, _) = ray_intersection(&SpectrumVector::from_values(&rho), &sigma).unwrap();
            assert!((ray - got).abs() < 1e-12);
        }
    }
    let pps = lp::permutation_hull_max_eta(&[5.0, 3.0, -3.0, -5.0], &[0.75, -0.25, -0.25, -0.25]);
    assert!((pps - 20.0 / 3.0).abs() < 1e-9);
}

#[test]
fn identical_spectra_give_unit_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sigma = random_hermitian(&mut rng, 4).traceless_part();
    let rotated = sigma.conjugate(&haar_unitary(&mut rng, 4));
    assert!((exact_transfer_bound(&rotated, &sigma).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn unreachable_target() {
    let sigma = HermitianOperator::from_diagonal(&[0.0; 3]);
    assert!(exact_transfer_bound(&HermitianOperator::from_diagonal(&[1.0, 0.0, -1.0]), &sigma).is_err());
    let degenerate = SpectrumVector::from_values(&[0.0, 0.0]);
    assert!(matches!(
        exact_bound_from_spectra(&SpectrumVector::from_values(&[1.0, -1.0]), &degenerate),
        Err(Error::Unreachable { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bounds_are_unitarily_invariant(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_hermitian(&mut rng, n);
        let sigma = random_hermitian(&mut rng, n).traceless_part();
        let (lo, hi) = unitary_bounds(&rho, &sigma).unwrap();
        let u = haar_unitary(&mut rng, n);
        let v = haar_unitary(&mut rng, n);
        let (lo2, hi2) = unitary_bounds(&rho.conjugate(&u), &sigma.conjugate(&v)).unwrap();
        prop_assert!((lo - lo2).abs() < 1e-9 && (hi - hi2).abs() < 1e-9);
        let exact = exact_transfer_bound(&rho, &sigma).unwrap();
        prop_assert!(lo - 1e-9 <= exact && exact <= hi + 1e-9);
    }

    #[test]
    fn exact_bound_output_is_majorized(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_vector(&mut rng, n);
        let sigma = random_traceless(&mut rng, n);
        let eta = exact_transfer_bound(&HermitianOperator::from_diagonal(&rho), &HermitianOperator::from_diagonal(&sigma)).unwrap();
        let shift = rho.iter().sum::<f64>() / n as f64;
        let at: Vec<f64> = sigma.iter().map(|s| eta * s + shift).collect();
        prop_assert!(majorizes(&SpectrumVector::from_values(&rho), &SpectrumVector::from_values(&at)).unwrap());
        let beyond: Vec<f64> = sigma.iter().map(|s| (eta + 1e-6) * s + shift).collect();
        prop_assert!(!majorizes(&SpectrumVector::from_values(&rho), &SpectrumVector::from_values(&beyond)).unwrap());
    }
}
