//! Permutation helpers. A permutation `p` acts on vectors by `(p·x)_i = x[p[i]]`.

/// Minimum number of transpositions composing `p`.
pub fn transposition_count(p: &[usize]) -> usize {
    p.len() - cycles(p).len()
}

/// Cycles of the level map `p[i] ↦ i`, including fixed points.
pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut image = vec![0; n];
    for (i, &j) in p.iter().enumerate() {
        image[j] = i;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = image[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = image[cur];
        }
        out.push(cycle);
    }
    out
}

/// One-line cycle notation with 1-based levels, fixed points omitted; `()` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let parts: Vec<String> = cycles(p)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| format!("({})", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    if parts.is_empty() {
        "()".to_string()
    } else {
        parts.concat()
    }
}

/// Inverse of [`cycle_notation`] for a permutation of `n` levels.
pub fn parse_cycle_notation(text: &str, n: usize) -> Option<Vec<usize>> {
    let mut image: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let body = text.trim();
    if body != "()" {
        for chunk in body.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let inner = chunk.strip_prefix('(')?;
            let levels: Vec<usize> = inner
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().filter(|&v| v >= 1 && v <= n).map(|v| v - 1))
                .collect::<Option<_>>()?;
            for (k, &a) in levels.iter().enumerate() {
                if seen[a] {
                    return None;
                }
                seen[a] = true;
                image[a] = levels[(k + 1) % levels.len()];
            }
        }
    }
    let mut p = vec![0; n];
    for (j, &i) in image.iter().enumerate() {
        p[i] = j;
    }
    Some(p)
}

pub fn apply(p: &[usize], x: &[f64]) -> Vec<f64> {
    p.iter().map(|&j| x[j]).collect()
}

/// Advances `a` to its next lexicographic permutation; false once the last one is reached.
pub fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Labels equal values (within `tol`) with a shared class id; classes are numbered by value.
pub fn value_classes(x: &[f64], tol: f64) -> (Vec<usize>, Vec<f64>) {
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut reps: Vec<f64> = Vec::new();
    for v in sorted {
        if reps.last().is_none_or(|r| (v - r).abs() > tol) {
            reps.push(v);
        }
    }
    let ids = x
        .iter()
        .map(|v| reps.iter().position(|r| (v - r).abs() <= tol).expect("value has a class"))
        .collect();
    (ids, reps)
}
