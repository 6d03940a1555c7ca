use super::{ray_intersection, ExperimentDesign};
use crate::bounds::SpectrumVector;
use crate::error::{Error, Result};

/// Design for any `N`: a doubly stochastic matrix built from T-transforms, split into permutations
/// by repeated bottleneck matchings. Exact but not necessarily minimal.
pub fn birkhoff_design(rho_diag: &[f64], sigma_diag: &[f64]) -> Result<ExperimentDesign> {
    let n = rho_diag.len();
    if sigma_diag.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: sigma_diag.len() });
    }
    let lambda = SpectrumVector::from_values(rho_diag);
    let (eta, _) = ray_intersection(&lambda, sigma_diag)?;
    let sigma_mean = sigma_diag.iter().sum::<f64>() / n as f64;
    let shift = lambda.trace / n as f64;
    let target: Vec<f64> = sigma_diag.iter().map(|s| eta * (s - sigma_mean) + shift).collect();

    let d = doubly_stochastic(rho_diag, &target);
    let mut items = decompose(d);
    items.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    ExperimentDesign::from_permutations(&items, eta)
}

fn descending_order(x: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    idx
}

/// `D` with `D·rho = target`, assuming `target` is majorized by `rho`.
pub(crate) fn doubly_stochastic(rho: &[f64], target: &[f64]) -> Vec<Vec<f64>> {
    let n = rho.len();
    let order_r = descending_order(rho);
    let order_t = descending_order(target);
    let mut x: Vec<f64> = order_r.iter().map(|&i| rho[i]).collect();
    let y: Vec<f64> = order_t.iter().map(|&i| target[i]).collect();
    let scale = rho.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-13 * scale;

    let mut ds: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&j| x[j] > y[j] + tol) else { break };
        let Some(k) = (j + 1..n).find(|&k| x[k] < y[k] - tol) else { break };
        let delta = (x[j] - y[j]).min(y[k] - x[k]);
        let mix = delta / (x[j] - x[k]);
        let (xj, xk) = (x[j], x[k]);
        x[j] = (1.0 - mix) * xj + mix * xk;
        x[k] = mix * xj + (1.0 - mix) * xk;
        let (rj, rk) = (ds[j].clone(), ds[k].clone());
        for c in 0..n {
            ds[j][c] = (1.0 - mix) * rj[c] + mix * rk[c];
            ds[k][c] = mix * rj[c] + (1.0 - mix) * rk[c];
        }
    }
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            d[order_t[i]][order_r[j]] = ds[i][j];
        }
    }
    d
}

/// Birkhoff–von Neumann split; each step removes the permutation whose smallest entry is largest.
pub(crate) fn decompose(mut d: Vec<Vec<f64>>) -> Vec<(f64, Vec<usize>)> {
    let n = d.len();
    let limit = (n - 1) * (n - 1) + 1;
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut mass = 1.0;
    while mass > 1e-12 && out.len() < limit {
        let mut levels: Vec<f64> = d.iter().flatten().copied().filter(|&v| v > 1e-14).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let (mut lo, mut hi) = (0usize, levels.len());
        let mut best = None;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match perfect_matching(&d, levels[mid]) {
                Some(m) => {
                    best = Some(m);
                    lo = mid + 1;
                }
                None => hi = mid,
            }
        }
        let Some(p) = best else { break };
        let weight = (0..n).map(|i| d[i][p[i]]).fold(f64::INFINITY, f64::min);
        for i in 0..n {
            d[i][p[i]] -= weight;
        }
        mass -= weight;
        match out.iter_mut().find(|(_, q)| *q == p) {
            Some(entry) => entry.0 += weight,
            None => out.push((weight, p)),
        }
    }
    out
}

/// Row-to-column perfect matching using only entries `≥ threshold` (Kuhn's augmenting paths).
fn perfect_matching(d: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = d.len();
    let mut col_owner: Vec<Option<usize>> = vec![None; n];
    fn augment(row: usize, d: &[Vec<f64>], t: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for col in 0..d.len() {
            if d[row][col] >= t && !seen[col] {
                seen[col] = true;
                if owner[col].is_none_or(|r| augment(r, d, t, seen, owner)) {
                    owner[col] = Some(row);
                    return true;
                }
            }
        }
        false
    }
    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(row, d, threshold, &mut seen, &mut col_owner) {
            return None;
        }
    }
    let mut p = vec![0; n];
    for (col, owner) in col_owner.iter().enumerate() {
        p[owner.expect("perfect")] = col;
    }
    Some(p)
}
