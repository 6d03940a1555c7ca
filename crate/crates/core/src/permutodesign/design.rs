use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::perm::{self, transposition_count};
use super::{nnls, ray_intersection, ExperimentDesign, MAX_VERTEX_DIM};
use crate::bounds::SpectrumVector;
use crate::error::{Error, Result};

/// Subset count above which the exhaustive minimality search is skipped.
pub const DEFAULT_SEARCH_BUDGET: usize = 50_000;

#[derive(Debug, Clone)]
struct Vertex {
    values: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

/// Fewest permutations whose weighted average maps `rho_diag` to `η_max·σ + (Trρ/N)·1`.
pub fn minimal_design(rho_diag: &[f64], sigma_diag: &[f64]) -> Result<ExperimentDesign> {
    minimal_design_with_budget(rho_diag, sigma_diag, DEFAULT_SEARCH_BUDGET)
}

pub fn minimal_design_with_budget(rho_diag: &[f64], sigma_diag: &[f64], budget: usize) -> Result<ExperimentDesign> {
    let n = rho_diag.len();
    if sigma_diag.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sigma_diag.len() });
    }
    if n > MAX_VERTEX_DIM {
        return Err(Error::Capacity { dim: n, max: MAX_VERTEX_DIM });
    }
    let lambda = SpectrumVector::from_values(rho_diag);
    let (eta, tight) = ray_intersection(&lambda, sigma_diag)?;
    let sigma_mean = sigma_diag.iter().sum::<f64>() / n as f64;
    let shift = lambda.trace / n as f64;
    let target: Vec<f64> = sigma_diag.iter().map(|s| eta * (s - sigma_mean) + shift).collect();
    let scale = rho_diag.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-9 * scale;

    let face = face_vertices(rho_diag, &lambda, &target, &tight, tol);
    let a = DMatrix::from_fn(n + 1, face.len(), |i, j| if i < n { face[j].values[i] } else { 1.0 });
    let mut b = DVector::from_vec(target.clone());
    b = b.push(1.0);

    let (x, residual) = nnls(&a, &b);
    if residual > tol {
        return Err(Error::SolverFailure { residual });
    }
    let mut support: Vec<usize> = (0..face.len()).filter(|&j| x[j] > 1e-14).collect();
    let mut weights: Vec<f64> = support.iter().map(|&j| x[j]).collect();
    prune(&a, &mut support, &mut weights);

    let mut best: Option<(Vec<usize>, Vec<f64>)> = None;
    let mut certified = false;
    for k in 1..=support.len() {
        if binomial(face.len(), k) > budget as f64 {
            break;
        }
        let mut found: Option<(Vec<usize>, Vec<f64>)> = None;
        for_each_subset(face.len(), k, &mut |subset| {
            let sub = DMatrix::from_fn(n + 1, k, |i, j| a[(i, subset[j])]);
            let (w, r) = nnls(&sub, &b);
            if r <= tol && w.iter().all(|&v| v > 1e-12) {
                let better = match &found {
                    None => true,
                    Some((cur, _)) => rank_key(&face, subset) < rank_key(&face, cur),
                };
                if better {
                    found = Some((subset.to_vec(), w.iter().copied().collect()));
                }
            }
        });
        if found.is_some() {
            best = found;
            certified = true;
            break;
        }
    }
    let (chosen, chosen_w) = best.unwrap_or((support, weights));

    let mut items: Vec<(f64, Vec<usize>)> = chosen.iter().zip(&chosen_w).map(|(&j, &w)| (w, face[j].perm.clone())).collect();
    items.sort_by(|x, y| (transposition_count(&x.1), &x.1).cmp(&(transposition_count(&y.1), &y.1)));
    let mut design = ExperimentDesign::from_permutations(&items, eta)?;
    design.certified_minimal = certified;
    Ok(design)
}

/// Distinct vertices on the face cut out by the active partial-sum constraints.
fn face_vertices(rho: &[f64], lambda: &SpectrumVector, target: &[f64], tight: &[usize], tol: f64) -> Vec<Vertex> {
    let n = rho.len();
    let mut active: Vec<(u32, f64)> = Vec::new();
    for &k in tight {
        let top: f64 = lambda.descending[..k].iter().sum();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k && (subset_sum(target, mask) - top).abs() <= tol {
                active.push((mask, top));
            }
        }
    }
    let scale = rho.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let (classes, _) = perm::value_classes(rho, 1e-12 * scale);
    let mut best: HashMap<Vec<usize>, Vertex> = HashMap::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        let values = perm::apply(&p, rho);
        if active.iter().all(|&(mask, top)| (subset_sum(&values, mask) - top).abs() <= tol) {
            let key: Vec<usize> = p.iter().map(|&j| classes[j]).collect();
            let swaps = transposition_count(&p);
            let replace = best.get(&key).is_none_or(|v| (swaps, &p) < (v.swaps, &v.perm));
            if replace {
                best.insert(key, Vertex { values, perm: p.clone(), swaps });
            }
        }
        if !perm::next_permutation(&mut p) {
            break;
        }
    }
    let mut out: Vec<Vertex> = best.into_values().collect();
    out.sort_by(|a, b| (a.swaps, &a.perm).cmp(&(b.swaps, &b.perm)));
    out
}

fn subset_sum(x: &[f64], mask: u32) -> f64 {
    x.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum()
}

/// Carathéodory reduction: drops columns while the support is affinely dependent.
fn prune(a: &DMatrix<f64>, support: &mut Vec<usize>, weights: &mut Vec<f64>) {
    loop {
        let k = support.len();
        if k <= 1 {
            return;
        }
        // zero rows keep the SVD square so a null vector is always returned
        let rows = a.nrows().max(k);
        let sub = DMatrix::from_fn(rows, k, |i, j| if i < a.nrows() { a[(i, support[j])] } else { 0.0 });
        let svd = sub.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let (row, min_sv) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
        if min_sv >= 1e-10 * svd.singular_values.max() {
            return;
        }
        let mut dir: Vec<f64> = (0..k).map(|j| v_t[(row, j)]).collect();
        if !dir.iter().any(|&d| d > 1e-14) {
            dir.iter_mut().for_each(|d| *d = -*d);
        }
        let (drop, step) = dir
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 1e-14)
            .map(|(j, &d)| (j, weights[j] / d))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        for j in 0..k {
            weights[j] -= step * dir[j];
        }
        support.remove(drop);
        weights.remove(drop);
        let mut j = 0;
        while j < support.len() {
            if weights[j] <= 1e-14 {
                support.remove(j);
                weights.remove(j);
            } else {
                j += 1;
            }
        }
    }
}

fn rank_key(face: &[Vertex], subset: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut members: Vec<&Vertex> = subset.iter().map(|&j| &face[j]).collect();
    members.sort_by(|a, b| (a.swaps, &a.perm).cmp(&(b.swaps, &b.perm)));
    (members.iter().map(|v| v.swaps).collect(), members.iter().map(|v| v.perm.clone()).collect())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
