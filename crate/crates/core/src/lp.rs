//! Dense two-phase simplex for the tiny programs of the eutaxy test.
//!
//! Solves: maximize c·x subject to A x = b, x ≥ 0. Bland's rule throughout.

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

const TOL: f64 = 1e-12;

struct Tableau {
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    rows: usize,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.t[r][col];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r && row[col] != 0.0 {
                let k = row[col];
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= k * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Runs simplex iterations on columns `< ncols`. Returns false if unbounded.
    fn run(&mut self, ncols: usize) -> bool {
        let obj = self.rows;
        for _ in 0..10_000 {
            let Some(col) = (0..ncols).find(|&j| self.t[obj][j] < -TOL) else {
                return true;
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..self.rows {
                let a = self.t[i][col];
                if a > TOL {
                    let ratio = self.t[i][self.rhs] / a;
                    let better = match best {
                        None => true,
                        Some((r, _, b)) => ratio < r - TOL || (ratio <= r + TOL && self.basis[i] < b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
        true
    }
}

pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpResult {
    let m = b.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = n + m;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][rhs] = sign * b[i];
    }
    // phase 1: maximize −Σ artificials
    for j in 0..n {
        t[m][j] = -(0..m).map(|i| t[i][j]).sum::<f64>();
    }
    t[m][rhs] = -(0..m).map(|i| t[i][rhs]).sum::<f64>();
    let mut tab = Tableau { t, basis: (n..n + m).collect(), rows: m, rhs };
    tab.run(n + m);
    if tab.t[m][rhs] < -1e-9 {
        return LpResult::Infeasible;
    }
    // drive artificials out of the basis where possible
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| tab.t[r][j].abs() > 1e-9) {
                tab.pivot(r, col);
            }
        }
    }
    // phase 2
    for j in 0..width {
        let cb: f64 = (0..m).map(|i| if tab.basis[i] < n { c[tab.basis[i]] * tab.t[i][j] } else { 0.0 }).sum();
        tab.t[m][j] = if j < n { cb - c[j] } else if j == rhs { cb } else { 0.0 };
    }
    if !tab.run(n) {
        return LpResult::Unbounded;
    }
    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.t[i][rhs];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpResult::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_programs() {
        // max x + y, x + 2y + s = 4, 3x + y + u = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        match solve(&a, &[4.0, 6.0], &[1.0, 1.0, 0.0, 0.0]) {
            LpResult::Optimal { x, value } => {
                assert!((value - 2.8).abs() < 1e-12);
                assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
            }
            r => panic!("{r:?}"),
        }
        assert_eq!(solve(&[vec![1.0, 1.0]], &[-1.0], &[0.0, 0.0]), LpResult::Infeasible);
        assert_eq!(solve(&[vec![1.0, -1.0]], &[0.0], &[1.0, 0.0]), LpResult::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        match solve(&a, &[1.0, 2.0], &[1.0, 0.0]) {
            LpResult::Optimal { value, .. } => assert!((value - 1.0).abs() < 1e-12),
            r => panic!("{r:?}"),
        }
    }
}
