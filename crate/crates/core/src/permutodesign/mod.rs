//! Permutohedron geometry and minimal mixed-unitary experiment designs.
//!
//! For diagonal states the set reachable by mixed unitary channels is the
//! permutohedron spanned by the permutations of `λ^ρ`. The best exact transfer
//! sits where the ray `t ↦ tσ` leaves that polytope, and any point of the
//! exit face is a convex combination of the face's vertices.

mod birkhoff;
mod design;
mod nnls;
pub mod perm;

pub use birkhoff::birkhoff_design;
pub use design::{minimal_design, minimal_design_with_budget, DEFAULT_SEARCH_BUDGET};
pub use nnls::nnls;

use serde::Serialize;

use crate::bounds::{self, SpectrumVector, TransferReport};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::spinops::HermitianOperator;

/// Largest dimension for which vertices are materialized.
pub const MAX_VERTEX_DIM: usize = 8;

const WEIGHT_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct DesignEntry {
    pub weight: f64,
    pub unitary: CMat,
    pub permutation: Option<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct ExperimentDesign {
    entries: Vec<DesignEntry>,
    pub target_eta: f64,
    /// Set when an exhaustive search confirmed no smaller design exists.
    pub certified_minimal: bool,
}

impl ExperimentDesign {
    pub fn new(entries: Vec<DesignEntry>, target_eta: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDesign("design has no entries".into()));
        }
        let dim = entries[0].unitary.nrows();
        let mut total = 0.0;
        for (k, e) in entries.iter().enumerate() {
            if !(e.weight > 0.0) {
                return Err(Error::InvalidDesign(format!("entry {k} has weight {}", e.weight)));
            }
            if e.unitary.nrows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: e.unitary.nrows() });
            }
            linalg::check_unitary(&e.unitary, UNITARY_TOL)?;
            total += e.weight;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidDesign(format!("weights sum to {total}")));
        }
        Ok(ExperimentDesign { entries, target_eta, certified_minimal: false })
    }

    /// Design from permutations; weights are normalized to sum to one.
    pub fn from_permutations(items: &[(f64, Vec<usize>)], target_eta: f64) -> Result<Self> {
        let total: f64 = items.iter().map(|(w, _)| w).sum();
        let entries = items
            .iter()
            .map(|(w, p)| DesignEntry {
                weight: w / total,
                unitary: linalg::permutation_matrix(p),
                permutation: Some(p.clone()),
            })
            .collect();
        Self::new(entries, target_eta)
    }

    pub fn uniform(unitaries: Vec<CMat>, target_eta: f64) -> Result<Self> {
        let w = 1.0 / unitaries.len().max(1) as f64;
        let entries = unitaries.into_iter().map(|u| DesignEntry { weight: w, unitary: u, permutation: None }).collect();
        Self::new(entries, target_eta)
    }

    pub fn entries(&self) -> &[DesignEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].unitary.nrows()
    }

    /// Mixture of designs `Σ_i c_i D_i`, with `c_i > 0` summing to one.
    pub fn mixture(parts: &[(f64, &ExperimentDesign)]) -> Result<Self> {
        let entries: Vec<DesignEntry> = parts
            .iter()
            .flat_map(|(c, d)| d.entries.iter().map(move |e| DesignEntry { weight: c * e.weight, ..e.clone() }))
            .collect();
        let eta = parts.iter().map(|(c, d)| c * d.target_eta).sum();
        Self::new(entries, eta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRecordEntry {
    pub weight: f64,
    pub permutation: String,
}

/// Serializable summary of a permutation design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignRecord {
    pub experiments: usize,
    pub entries: Vec<DesignRecordEntry>,
    pub target_eta: f64,
    pub residual: f64,
    pub certified_minimal: bool,
}

impl DesignRecord {
    pub fn new(design: &ExperimentDesign, residual: f64) -> Self {
        let entries = design
            .entries()
            .iter()
            .map(|e| DesignRecordEntry {
                weight: e.weight,
                permutation: e.permutation.as_deref().map_or_else(|| "unitary".to_string(), perm::cycle_notation),
            })
            .collect();
        DesignRecord {
            experiments: design.len(),
            entries,
            target_eta: design.target_eta,
            residual,
            certified_minimal: design.certified_minimal,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Permutohedron {
    pub generator: SpectrumVector,
    pub vertices: Vec<Vec<f64>>,
}

/// Distinct permutations of the generator, in lexicographic order of value classes.
pub fn build_permutohedron(lambda: &SpectrumVector) -> Result<Permutohedron> {
    let n = lambda.len();
    if n > MAX_VERTEX_DIM {
        return Err(Error::Capacity { dim: n, max: MAX_VERTEX_DIM });
    }
    let scale = lambda.descending.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let (mut ids, reps) = perm::value_classes(&lambda.ascending, 1e-12 * scale);
    ids.sort_unstable();
    let mut vertices = vec![ids.iter().map(|&c| reps[c]).collect::<Vec<f64>>()];
    while perm::next_permutation(&mut ids) {
        vertices.push(ids.iter().map(|&c| reps[c]).collect());
    }
    Ok(Permutohedron { generator: lambda.clone(), vertices })
}

/// Exit point of the ray `tσ` from the permutohedron centre, with the active partial-sum indices.
pub fn ray_intersection(lambda_rho: &SpectrumVector, sigma_diag: &[f64]) -> Result<(f64, Vec<usize>)> {
    let sigma = SpectrumVector::from_values(sigma_diag);
    let (eta, tight) = bounds::exact_bound_from_spectra(lambda_rho, &sigma)?;
    if eta <= 1e-12 {
        return Err(Error::Unreachable {
            index: tight.first().copied(),
            reason: "the reachable set collapses to its centre along this direction".into(),
        });
    }
    Ok((eta, tight))
}

/// Applies the design to `rho` and reports the achieved efficiency against `sigma`.
pub fn verify_design(design: &ExperimentDesign, rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<TransferReport> {
    let out = crate::channels::apply_mixed_unitary(rho, design)?;
    TransferReport::new(rho, &out, sigma)
}

/// Design for arbitrary Hermitian `rho` and traceless `sigma`.
///
/// Diagonal pairs get permutation designs directly (minimal up to
/// `MAX_VERTEX_DIM`, Birkhoff beyond it). Otherwise both operators are
/// diagonalized and each permutation `P` becomes `V_σ P V_ρ†`.
pub fn operator_design(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExperimentDesign> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let solve = |r: &[f64], s: &[f64]| {
        if r.len() <= MAX_VERTEX_DIM {
            minimal_design(r, s)
        } else {
            birkhoff_design(r, s)
        }
    };
    if rho.is_diagonal(1e-12) && sigma.is_diagonal(1e-12) {
        return solve(&rho.diagonal(), &sigma.diagonal());
    }
    let (lr, vr) = linalg::hermitian_eigen(rho.matrix());
    let (ls, vs) = linalg::hermitian_eigen(sigma.matrix());
    let base = solve(&lr, &ls)?;
    let vr_dag = linalg::dagger(&vr);
    let entries = base
        .entries()
        .iter()
        .map(|e| DesignEntry { weight: e.weight, unitary: &vs * &e.unitary * &vr_dag, permutation: None })
        .collect();
    let mut design = ExperimentDesign::new(entries, base.target_eta)?;
    design.certified_minimal = base.certified_minimal;
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinops::{pps_target, thermal_deviation, SpinSystem};

    #[test]
    fn rotated_operators() {
        use crate::spinops::pauli_string;
        let rho = &pauli_string(2, "XI").unwrap() + &pauli_string(2, "IY").unwrap().scale(4.0);
        let sigma = pps_target(2);
        let d = operator_design(&rho, &sigma).unwrap();
        assert_eq!(d.len(), 3);
        let report = verify_design(&d, &rho, &sigma).unwrap();
        assert!((report.eta - 20.0 / 3.0).abs() < 1e-9);
        assert!(report.residual_norm < 1e-9);
        let wide = operator_design(&pps_target(4).scale(-1.0), &pps_target(4)).unwrap();
        assert!((wide.target_eta - 1.0 / 15.0).abs() < 1e-9);
    }

    #[test]
    fn vertex_counts() {
        let count = |v: &[f64]| build_permutohedron(&SpectrumVector::from_values(v)).unwrap().vertices.len();
        assert_eq!(count(&[1.0, 0.0]), 2);
        assert_eq!(count(&[2.0, 2.0, -1.0]), 3);
        assert_eq!(count(&[5.0, 3.0, -3.0, -5.0]), 24);
        assert_eq!(count(&[1.0, 1.0, -1.0, -1.0]), 6);
        let big = SpectrumVector::from_values(&[0.0; 9]);
        assert!(matches!(build_permutohedron(&big), Err(Error::Capacity { dim: 9, max: 8 })));
    }

    #[test]
    fn vertices_share_the_trace_hyperplane() {
        let p = build_permutohedron(&SpectrumVector::from_values(&[4.0, 1.0, 1.0, -2.0, 0.5])).unwrap();
        assert_eq!(p.vertices.len(), 60);
        for v in &p.vertices {
            assert!((v.iter().sum::<f64>() - 4.5).abs() < 1e-12);
        }
    }

    #[test]
    fn ray_examples() {
        let lambda = SpectrumVector::from_values(&[5.0, 3.0, -3.0, -5.0]);
        let (eta, tight) = ray_intersection(&lambda, &[0.75, -0.25, -0.25, -0.25]).unwrap();
        assert!((eta - 20.0 / 3.0).abs() < 1e-12);
        assert_eq!(tight, vec![1]);
        let (eta, _) = ray_intersection(&lambda, &[-3.0, 5.0, -5.0, 3.0]).unwrap();
        assert!((eta - 1.0).abs() < 1e-12);
        let flat = SpectrumVector::from_values(&[1.0; 4]);
        assert!(matches!(ray_intersection(&flat, &[0.75, -0.25, -0.25, -0.25]), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn design_invariants() {
        assert!(matches!(ExperimentDesign::new(vec![], 1.0), Err(Error::InvalidDesign(_))));
        let bad = ExperimentDesign::from_permutations(&[(1.0, vec![0, 1])], 1.0).map(|mut d| {
            d.entries[0].weight = 0.5;
            ExperimentDesign::new(d.entries, 1.0)
        });
        assert!(matches!(bad, Ok(Err(Error::InvalidDesign(_)))));
        let skew = CMat::from_diagonal_element(2, 2, linalg::c(2.0));
        assert!(matches!(ExperimentDesign::uniform(vec![skew], 1.0), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn ta_design_verifies() {
        let rho = thermal_deviation(&SpinSystem::chcl3());
        let d = ExperimentDesign::from_permutations(
            &[(1.0, vec![0, 1, 2, 3]), (1.0, vec![0, 3, 1, 2]), (1.0, vec![0, 2, 3, 1])],
            20.0 / 3.0,
        )
        .unwrap();
        let report = verify_design(&d, &rho, &pps_target(2)).unwrap();
        assert!((report.eta - 20.0 / 3.0).abs() < 1e-12);
        assert!(report.residual_norm < 1e-9);
    }
}
