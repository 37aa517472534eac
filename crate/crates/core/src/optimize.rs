//! Small derivative-free maximizers for min-of-smooth objectives.

/// The `keep` best points of a uniform grid with `n` nodes per axis.
pub fn grid_best<F: Fn(&[f64]) -> f64>(f: &F, lo: &[f64], hi: &[f64], n: usize, keep: usize) -> Vec<(Vec<f64>, f64)> {
    let dim = lo.len();
    let n = n.max(2);
    let total = n.pow(dim as u32);
    let mut pts = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let x: Vec<f64> = (0..dim)
            .map(|i| {
                let k = rem % n;
                rem /= n;
                lo[i] + (hi[i] - lo[i]) * k as f64 / (n - 1) as f64
            })
            .collect();
        let v = f(&x);
        if v.is_finite() {
            pts.push((x, v));
        }
    }
    pts.sort_by(|a, b| b.1.total_cmp(&a.1));
    pts.truncate(keep);
    pts
}

/// Compass search for a local maximum inside the box.
pub fn pattern_search<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], lo: &[f64], hi: &[f64], step: f64, tol: f64) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut h = step;
    while h > tol {
        let mut moved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] = (y[i] + dir * h * (hi[i] - lo[i])).clamp(lo[i], hi[i]);
                let fy = f(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (x, fx)
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let k = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= k * a[col][c];
            }
            b[row] -= k * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Newton iteration making the candidate lengths listed in `active` equal.
///
/// `active` has one more entry than the number of parameters; the Jacobian
/// is taken by central differences.
pub fn equalize<G: Fn(&[f64]) -> Vec<f64>>(cands: &G, x0: &[f64], active: &[usize]) -> Option<Vec<f64>> {
    let n = x0.len();
    if active.len() != n + 1 {
        return None;
    }
    let resid = |x: &[f64]| -> Vec<f64> {
        let c = cands(x);
        (1..=n).map(|i| c[active[i]] - c[active[0]]).collect()
    };
    let mut x = x0.to_vec();
    for _ in 0..60 {
        let r = resid(&x);
        if r.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let norm = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if norm < 1e-14 {
            return Some(x);
        }
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let h = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (resid(&xp), resid(&xm));
            for i in 0..n {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let dx = solve_dense(jac, r.iter().map(|v| -v).collect())?;
        for j in 0..n {
            x[j] += dx[j];
        }
    }
    let r = resid(&x);
    (r.iter().fold(0.0_f64, |m, v| m.max(v.abs())) < 1e-10).then_some(x)
}

/// Indices of the `k` smallest entries, in increasing order of value.
pub fn smallest(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx.truncate(k);
    idx
}
