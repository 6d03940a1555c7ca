//! Ideal gates on an `n`-spin register. Spin indices are 0-based.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat};
use crate::lindblad::scalar_coupling;
use crate::spinops::{embed, kron_all, projector0, projector1, Pauli, SpinSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    MinusX,
    MinusY,
}

impl Axis {
    fn pauli_and_sign(self) -> (Pauli, f64) {
        match self {
            Axis::X => (Pauli::X, 1.0),
            Axis::Y => (Pauli::Y, 1.0),
            Axis::MinusX => (Pauli::X, -1.0),
            Axis::MinusY => (Pauli::Y, -1.0),
        }
    }
}

/// `exp(−iθ/2 Σ_{k∈spins} σ_axis^k)` with `θ` in degrees.
pub fn rotation(n: usize, spins: &[usize], axis: Axis, degrees: f64) -> CMat {
    let (p, sign) = axis.pauli_and_sign();
    let gen = spins.iter().fold(CMat::zeros(1 << n, 1 << n), |acc, &k| acc + embed(&p.matrix(), k, n));
    linalg::unitary_from_generator(&gen, sign * degrees.to_radians() / 2.0)
}

/// `exp(−iπ Z_a Z_b / 4)`.
pub fn zz_gate(n: usize, a: usize, b: usize) -> CMat {
    let z = Pauli::Z.matrix();
    let gen = embed(&z, a, n) * embed(&z, b, n);
    linalg::unitary_from_generator(&gen, PI / 4.0)
}

/// Free evolution under the scalar couplings for `t` seconds.
pub fn delay(system: &SpinSystem, t: f64) -> CMat {
    linalg::unitary_from_generator(scalar_coupling(system).matrix(), t)
}

/// Rotation of `target` applied only when `control` is in `|1⟩`.
pub fn controlled_rotation(n: usize, control: usize, target: usize, axis: Axis, degrees: f64) -> CMat {
    let r = rotation(1, &[0], axis, degrees);
    let on = (0..n)
        .map(|q| {
            if q == control {
                projector1()
            } else if q == target {
                r.clone()
            } else {
                Pauli::I.matrix()
            }
        })
        .collect::<Vec<_>>();
    kron_all(&on) + embed(&projector0(), control, n)
}

pub fn cnot(n: usize, control: usize, target: usize) -> CMat {
    let flip = (0..n)
        .map(|q| {
            if q == control {
                projector1()
            } else if q == target {
                Pauli::X.matrix()
            } else {
                Pauli::I.matrix()
            }
        })
        .collect::<Vec<_>>();
    kron_all(&flip) + embed(&projector0(), control, n)
}

/// CNOTs from spin 0 onto every other spin.
pub fn cnot_cascade(n: usize) -> CMat {
    (1..n).fold(linalg::identity(1 << n), |acc, k| cnot(n, 0, k) * acc)
}

/// Permutation fixing level 1 and cycling levels 2..N: `V[2][N] = 1`, `V[i][i−1] = 1`.
pub fn level_cycle(dim: usize) -> Vec<usize> {
    (0..dim).map(|i| if i == 0 { 0 } else if i == 1 { dim - 1 } else { i - 1 }).collect()
}

/// Permutation fixing level 1 and reversing levels 2..N.
pub fn level_reversal(dim: usize) -> Vec<usize> {
    (0..dim).map(|i| if i == 0 { 0 } else { dim - i }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinops::pauli_string;

    fn conj(u: &CMat, spec: &str, n: usize) -> CMat {
        let p = pauli_string(n, spec).unwrap();
        u * p.matrix() * u.adjoint()
    }

    fn close(a: &CMat, spec: &str, scale: f64, n: usize) -> bool {
        linalg::max_abs(&(a - pauli_string(n, spec).unwrap().matrix() * linalg::c(scale))) < 1e-12
    }

    #[test]
    fn rotation_conventions() {
        assert!(close(&conj(&rotation(1, &[0], Axis::Y, 90.0), "Z", 1), "X", 1.0, 1));
        assert!(close(&conj(&rotation(1, &[0], Axis::MinusY, 90.0), "X", 1), "Z", 1.0, 1));
        assert!(close(&conj(&rotation(1, &[0], Axis::X, 90.0), "Z", 1), "Y", -1.0, 1));
        assert!(close(&conj(&cnot(2, 0, 1), "XI", 2), "XX", 1.0, 2));
    }

    #[test]
    fn controlled_rotation_is_block_diagonal() {
        let u = controlled_rotation(2, 0, 1, Axis::X, 73.0);
        assert!(linalg::unitarity_defect(&u) < 1e-14);
        assert_eq!(u[(0, 0)], linalg::ONE);
        assert_eq!(u[(1, 1)], linalg::ONE);
        assert!(u[(2, 3)].norm() > 0.1);
    }

    #[test]
    fn cycle_has_order_n_minus_one() {
        for n in 1..=4 {
            let dim = 1 << n;
            let v = linalg::permutation_matrix(&level_cycle(dim));
            let mut acc = linalg::identity(dim);
            for k in 1..dim {
                acc = &v * acc;
                let is_id = linalg::max_abs(&(&acc - linalg::identity(dim))) == 0.0;
                assert_eq!(is_id, k == dim - 1, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn printed_decomposition_cycles_levels() {
        let s = SpinSystem::chcl3();
        let d = delay(&s, 1.0 / (2.0 * s.coupling(0, 1)));
        let seq = [
            rotation(2, &[1], Axis::Y, 90.0),
            d.clone(),
            rotation(2, &[1], Axis::X, 90.0),
            rotation(2, &[0], Axis::Y, 90.0),
            d,
            rotation(2, &[0], Axis::X, 90.0),
        ];
        let u = seq.iter().fold(linalg::identity(4), |acc, g| g * acc);
        let out = linalg::diag_real(&(&u * linalg::from_diag(&[1.0, 2.0, 3.0, 4.0]) * u.adjoint()));
        let v = linalg::permutation_matrix(&level_cycle(4));
        let v_inv = linalg::diag_real(&(v.adjoint() * linalg::from_diag(&[1.0, 2.0, 3.0, 4.0]) * &v));
        for (a, b) in out.iter().zip(&v_inv) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
