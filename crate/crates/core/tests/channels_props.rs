mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statebound::bounds::{majorizes, spectrum};
use statebound::channels::{apply_mixed_unitary, apply_unitary, gradient_channel, phase_cycle_channel, phase_cycle_weighted, PhaseCycleScheme};
use statebound::linalg;
use statebound::permutodesign::{DesignEntry, ExperimentDesign};
use statebound::spinops::{coherence_decompose, pauli_string, thermal_deviation};
use statebound::{Error, HermitianOperator, SpinSystem};

use common::{haar_unitary, random_hermitian};

fn random_design(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ExperimentDesign {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut entries: Vec<DesignEntry> =
        raw.iter().map(|w| DesignEntry { weight: w / total, unitary: haar_unitary(rng, n), permutation: None }).collect();
    let drift: f64 = 1.0 - entries.iter().map(|e| e.weight).sum::<f64>();
    entries[0].weight += drift;
    ExperimentDesign::new(entries, 0.0).unwrap()
}

#[test]
fn pauli_conjugation_and_rejection() {
    let z = pauli_string(1, "Z").unwrap();
    let x = pauli_string(1, "X").unwrap();
    assert!(apply_unitary(&z, x.matrix()).unwrap().distance(&z.scale(-1.0)) < 1e-15);
    assert!(apply_unitary(&z, &linalg::identity(2)).unwrap().distance(&z) < 1e-15);
    let bad = linalg::identity(2) * linalg::c(1.1);
    assert!(matches!(apply_unitary(&z, &bad), Err(Error::NotUnitary(..))));
}

#[test]
fn three_experiment_average() {
    let rho = thermal_deviation(&SpinSystem::chcl3());
    let perms = [vec![0, 1, 2, 3], vec![0, 3, 1, 2], vec![0, 2, 3, 1]];
    let items: Vec<(f64, Vec<usize>)> = perms.iter().map(|p| (1.0, p.clone())).collect();
    let d = ExperimentDesign::from_permutations(&items, 20.0 / 3.0).unwrap();
    let expected =
        (&(&pauli_string(2, "ZI").unwrap() + &pauli_string(2, "IZ").unwrap()) + &pauli_string(2, "ZZ").unwrap()).scale(5.0 / 3.0);
    assert!(apply_mixed_unitary(&rho, &d).unwrap().distance(&expected) < 1e-12);
}

#[test]
fn heteronuclear_zero_quantum_dephases() {
    let mut m = linalg::from_diag(&[0.0; 4]);
    m[(1, 2)] = linalg::c(1.0);
    m[(2, 1)] = linalg::c(1.0);
    let zq = HermitianOperator::new(m).unwrap();
    assert!(gradient_channel(&zq, &[1.0, 4.0]).unwrap().max_abs() < 1e-15);
    assert!(gradient_channel(&zq, &[1.0, 1.0]).unwrap().distance(&zq) < 1e-15);
    assert!(gradient_channel(&pauli_string(2, "XI").unwrap(), &[1.0, 4.0]).unwrap().max_abs() < 1e-15);
}

#[test]
fn phase_cycles_select_highest_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [2usize, 3] {
        let rho = random_hermitian(&mut rng, 1 << n);
        let w = vec![1.0; n];
        let scheme = PhaseCycleScheme::select_highest(n).unwrap();
        let out = phase_cycle_channel(&rho, &scheme).unwrap();
        let dec = coherence_decompose(&out, &w).unwrap();
        let orders: Vec<f64> = dec.orders().into_iter().filter(|&o| dec.get(o).is_some_and(|c| linalg::max_abs(c) > 1e-12)).collect();
        let expected = if n == 2 { vec![-2.0, 2.0] } else { vec![-3.0, 0.0, 3.0] };
        assert_eq!(orders, expected);
        let src = coherence_decompose(&rho, &w).unwrap();
        let top = src.get(n as f64).unwrap();
        assert!(linalg::max_abs(&(dec.get(n as f64).unwrap() - top)) < 1e-12);
        assert!(src.orders().contains(&1.0));
        assert!(dec.get(1.0).is_none_or(|c| linalg::max_abs(c) < 1e-12));
        assert!((scheme.trace_factor() - if n == 2 { 0.0 } else { 1.0 }).abs() < 1e-12);
    }
    let one = PhaseCycleScheme::uniform(1).unwrap();
    let rho = random_hermitian(&mut rng, 4);
    assert!(phase_cycle_channel(&rho, &one).unwrap().distance(&rho) < 1e-12);
}

#[test]
fn dense_phase_average_matches_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let scheme = PhaseCycleScheme::uniform(360).unwrap();
    for weights in [vec![1.0, 4.0], vec![1.0, 1.0], vec![1.0, 1.0, 1.0]] {
        let rho = random_hermitian(&mut rng, 1 << weights.len());
        let dense = phase_cycle_weighted(&rho, &scheme, &weights).unwrap();
        let ideal = gradient_channel(&rho, &weights).unwrap();
        assert!(dense.distance(&ideal) < 1e-3);
    }
}

#[test]
fn mixed_unitary_outputs_are_majorized() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..500 {
        let n = 2 + i % 4;
        let rho = random_hermitian(&mut rng, n);
        let k = 1 + i % 5;
        let d = random_design(&mut rng, n, k);
        let out = apply_mixed_unitary(&rho, &d).unwrap();
        assert!((out.trace() - rho.trace()).abs() < 1e-10);
        assert!(majorizes(&spectrum(&rho), &spectrum(&out)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_preserves_spectrum(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_hermitian(&mut rng, n);
        let out = apply_unitary(&rho, &haar_unitary(&mut rng, n)).unwrap();
        let (a, b) = (spectrum(&rho), spectrum(&out));
        for (x, y) in a.ascending.iter().zip(&b.ascending) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn gradient_is_idempotent(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_hermitian(&mut rng, 1 << n);
        let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..4.0)).collect();
        let once = gradient_channel(&rho, &w).unwrap();
        prop_assert!(gradient_channel(&once, &w).unwrap().distance(&once) < 1e-15);
        prop_assert!((once.trace() - rho.trace()).abs() < 1e-12);
    }

    #[test]
    fn mixture_commutes_with_channel(seed in any::<u64>(), c in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_hermitian(&mut rng, 4);
        let a = random_design(&mut rng, 4, 2);
        let b = random_design(&mut rng, 4, 3);
        let mix = ExperimentDesign::mixture(&[(c, &a), (1.0 - c, &b)]).unwrap();
        let lhs = apply_mixed_unitary(&rho, &mix).unwrap();
        let rhs = &apply_mixed_unitary(&rho, &a).unwrap().scale(c) + &apply_mixed_unitary(&rho, &b).unwrap().scale(1.0 - c);
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn phase_cycle_trace_factor(seed in any::<u64>(), k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_hermitian(&mut rng, 8);
        for scheme in [PhaseCycleScheme::uniform(k).unwrap(), PhaseCycleScheme::alternating(2 * k).unwrap()] {
            let out = phase_cycle_channel(&rho, &scheme).unwrap();
            prop_assert!((out.trace() - scheme.trace_factor() * rho.trace()).abs() < 1e-10);
        }
    }
}
