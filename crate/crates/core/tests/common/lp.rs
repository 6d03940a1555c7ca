//! Small dense two-phase simplex used as an independent oracle in tests.

#![allow(dead_code)]

const EPS: f64 = 1e-11;

/// Maximizes `c·x` subject to `A x = b`, `x ≥ 0`. Returns `None` when infeasible or unbounded.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<(f64, Vec<f64>)> {
    let m = a.len();
    let n = c.len();
    // tableau columns: n structural, m artificial, rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width];
        for j in 0..n {
            row[j] = sign * a[i][j];
        }
        row[n + i] = 1.0;
        row[width - 1] = sign * b[i];
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { -1.0 } else { 0.0 }).collect();
    run(&mut t, &mut basis, &phase1, n + m)?;
    let infeasibility: f64 = basis.iter().zip(&t).filter(|(&bj, _)| bj >= n).map(|(_, r)| r[width - 1]).sum();
    if infeasibility > 1e-8 {
        return None;
    }
    // drive artificials out of the basis, deleting redundant rows
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            match (0..n).find(|&j| t[i][j].abs() > 1e-9) {
                Some(j) => pivot(&mut t, &mut basis, i, j),
                None => {
                    t.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let phase2: Vec<f64> = (0..n + m).map(|j| if j < n { c[j] } else { 0.0 }).collect();
    run(&mut t, &mut basis, &phase2, n)?;
    let mut x = vec![0.0; n];
    for (r, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[r][width - 1];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Some((value, x))
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, col: usize) {
    let p = t[r][col];
    for v in t[r].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && row[col] != 0.0 {
            let f = row[col];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
    }
    basis[r] = col;
}

/// Bland's rule on columns `0..allowed`.
fn run(t: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], allowed: usize) -> Option<()> {
    let width = t.first().map_or(0, |r| r.len());
    for _ in 0..100_000 {
        let reduced = |j: usize, t: &[Vec<f64>], basis: &[usize]| -> f64 {
            cost[j] - basis.iter().zip(t).map(|(&bj, row)| cost[bj] * row[j]).sum::<f64>()
        };
        let entering = (0..allowed).find(|&j| !basis.contains(&j) && reduced(j, t, basis) > EPS);
        let Some(col) = entering else { return Some(()) };
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col] > EPS {
                let ratio = row[width - 1] / row[col];
                let better = match best {
                    None => true,
                    Some((bi, br)) => ratio < br - 1e-12 || (ratio <= br + 1e-12 && basis[i] < basis[bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let (r, _) = best?;
        pivot(t, basis, r, col);
    }
    None
}

/// Every permutation of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Largest `η` such that `η σ + (Σρ/N)·1` lies in the convex hull of all permutations of `ρ`.
pub fn permutation_hull_max_eta(rho: &[f64], sigma: &[f64]) -> f64 {
    let n = rho.len();
    let perms = all_permutations(n);
    let v = perms.len();
    let shift = rho.iter().sum::<f64>() / n as f64;
    // variables: μ_1..μ_V, η
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n - 1 {
        let mut row: Vec<f64> = perms.iter().map(|p| rho[p[i]]).collect();
        row.push(-sigma[i]);
        a.push(row);
        b.push(shift);
    }
    let mut norm = vec![1.0; v];
    norm.push(0.0);
    a.push(norm);
    b.push(1.0);
    let mut c = vec![0.0; v];
    c.push(1.0);
    maximize(&c, &a, &b).expect("hull LP is feasible at η = 0").0
}
