use crate::error::{Error, Result};

/// Backward-error bound used to accept a solve.
pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum PatankarMatrix {
    /// `sub[i] = M[i][i-1]`, `sup[i] = M[i][i+1]`. With `periodic`, `sub[0]`
    /// is `M[0][n-1]` and `sup[n-1]` is `M[n-1][0]`; otherwise both are ignored.
    Tridiagonal { sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, periodic: bool },
    /// Row-major `n x n`.
    Dense { n: usize, data: Vec<f64> },
}

impl PatankarMatrix {
    pub fn identity_tridiagonal(n: usize, periodic: bool) -> Self {
        PatankarMatrix::Tridiagonal { sub: vec![0.0; n], diag: vec![1.0; n], sup: vec![0.0; n], periodic }
    }

    pub fn identity_dense(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        PatankarMatrix::Dense { n, data }
    }

    pub fn dim(&self) -> usize {
        match self {
            PatankarMatrix::Tridiagonal { diag, .. } => diag.len(),
            PatankarMatrix::Dense { n, .. } => *n,
        }
    }

    /// Nonzero entries as `(row, col, value)`, duplicates summed by the caller.
    fn for_each_entry(&self, mut f: impl FnMut(usize, usize, f64)) {
        match self {
            PatankarMatrix::Tridiagonal { sub, diag, sup, periodic } => {
                let n = diag.len();
                for i in 0..n {
                    f(i, i, diag[i]);
                    if i > 0 {
                        f(i, i - 1, sub[i]);
                    } else if *periodic && n > 1 {
                        f(0, n - 1, sub[0]);
                    }
                    if i + 1 < n {
                        f(i, i + 1, sup[i]);
                    } else if *periodic && n > 1 {
                        f(n - 1, 0, sup[n - 1]);
                    }
                }
            }
            PatankarMatrix::Dense { n, data } => {
                for i in 0..*n {
                    for j in 0..*n {
                        f(i, j, data[i * n + j]);
                    }
                }
            }
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        self.for_each_entry(|i, j, v| m[i][j] += v);
        m
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.for_each_entry(|i, j, v| y[i] += v * x[j]);
        y
    }

    fn abs_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.for_each_entry(|i, j, v| y[i] += (v * x[j]).abs());
        y
    }

    /// Off-diagonals nonpositive, diagonal at least one, columns diagonally dominant.
    pub fn is_patankar(&self) -> bool {
        let dense = self.to_dense();
        let n = dense.len();
        (0..n).all(|j| {
            let off: f64 = (0..n).filter(|&i| i != j).map(|i| dense[i][j]).sum();
            dense[j][j] >= 1.0 - 1e-14
                && (0..n).all(|i| i == j || dense[i][j] <= 0.0)
                && dense[j][j] + off >= -1e-12 * dense[j][j]
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatankarLinearSystem {
    pub matrix: PatankarMatrix,
    pub rhs: Vec<f64>,
    /// Column sums of the matrix. When given, pivots are rebuilt from these
    /// instead of the stored diagonal, which avoids cancellation when the
    /// diagonal is huge compared with the column sum.
    pub column_sums: Option<Vec<f64>>,
}

impl PatankarLinearSystem {
    pub fn new(matrix: PatankarMatrix, rhs: Vec<f64>) -> Self {
        Self { matrix, rhs, column_sums: None }
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    /// `max_i |M x - b|_i`
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.matrix.mul(x).iter().zip(&self.rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    fn excess(&self) -> Vec<f64> {
        if let Some(sums) = &self.column_sums {
            return sums.clone();
        }
        let mut sums = vec![0.0; self.dim()];
        self.matrix.for_each_entry(|_, j, v| sums[j] += v);
        sums
    }
}

/// Solves a Patankar system by Gaussian elimination without pivoting.
///
/// Pivots are formed as column sum minus the remaining off-diagonals of the
/// column, and the column sums are carried through the elimination. For an
/// M-matrix with nonnegative column sums and right-hand side every update
/// then adds nonnegative numbers, so the solution is componentwise accurate
/// and keeps its sign. Periodic couplings are eliminated through a bordered
/// last row and column.
pub fn solve_banded(system: &PatankarLinearSystem) -> Result<Vec<f64>> {
    let n = system.dim();
    if system.matrix.dim() != n || system.column_sums.as_ref().is_some_and(|s| s.len() != n) {
        return Err(Error::param("matrix and right-hand side sizes differ"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let excess = system.excess();
    let x = match &system.matrix {
        PatankarMatrix::Tridiagonal { sub, sup, periodic, .. } => {
            if *periodic && n >= 3 {
                cyclic(sub, sup, excess, &system.rhs)
            } else if *periodic && n > 1 {
                // couplings wrap onto the regular band; go through the dense path
                dense(&system.matrix.to_dense(), excess, &system.rhs)
            } else {
                thomas(sub, sup, excess, &system.rhs)
            }
        }
        PatankarMatrix::Dense { .. } => dense(&system.matrix.to_dense(), excess, &system.rhs),
    };
    let x = x.ok_or(Error::SolverFailure { residual: f64::NAN, bound: 0.0, n })?;
    let residual = system.residual(&x);
    let scale = system
        .matrix
        .abs_mul(&x)
        .iter()
        .zip(&system.rhs)
        .map(|(a, b)| a.max(b.abs()))
        .fold(0.0, f64::max);
    let bound = RESIDUAL_TOL * scale;
    if !(residual <= bound) {
        return Err(Error::SolverFailure { residual, bound, n });
    }
    Ok(x)
}

fn pivot_ok(p: f64) -> bool {
    p.is_finite() && p != 0.0
}

fn thomas(sub: &[f64], sup: &[f64], mut ex: Vec<f64>, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = ex.len();
    let mut piv = vec![0.0; n];
    let mut b = rhs.to_vec();
    for i in 0..n {
        let below = if i + 1 < n { sub[i + 1] } else { 0.0 };
        piv[i] = ex[i] - below;
        if !pivot_ok(piv[i]) {
            return None;
        }
        if i + 1 < n {
            ex[i + 1] -= sup[i] * ex[i] / piv[i];
            b[i + 1] -= below / piv[i] * b[i];
        }
    }
    let mut x = b;
    x[n - 1] /= piv[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (x[i] - sup[i] * x[i + 1]) / piv[i];
    }
    Some(x)
}

/// Cyclic tridiagonal elimination keeping the fill in the last column
/// (`last_col`) and the last row (`last_row`).
fn cyclic(sub: &[f64], sup: &[f64], mut ex: Vec<f64>, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = ex.len();
    let last = n - 1;
    let mut b = rhs.to_vec();
    let mut piv = vec![0.0; n];
    let mut last_col = vec![0.0; n];
    last_col[0] = sub[0];
    last_col[last - 1] += sup[last - 1];
    let mut last_row = vec![0.0; n];
    last_row[0] = sup[last];
    last_row[last - 1] += sub[last];
    for i in 0..last {
        let has_up = i + 1 < last;
        let below = if has_up { sub[i + 1] } else { 0.0 };
        let p = ex[i] - below - last_row[i];
        if !pivot_ok(p) {
            return None;
        }
        piv[i] = p;
        let scale = ex[i] / p;
        if has_up {
            ex[i + 1] -= sup[i] * scale;
        }
        ex[last] -= last_col[i] * scale;
        if has_up {
            let l = below / p;
            last_col[i + 1] -= l * last_col[i];
            b[i + 1] -= l * b[i];
        }
        let r = last_row[i] / p;
        if has_up {
            last_row[i + 1] -= r * sup[i];
        }
        b[last] -= r * b[i];
    }
    piv[last] = ex[last];
    if !pivot_ok(piv[last]) {
        return None;
    }
    let mut x = vec![0.0; n];
    x[last] = b[last] / piv[last];
    for i in (0..last).rev() {
        let mut v = b[i] - last_col[i] * x[last];
        if i + 1 < last {
            v -= sup[i] * x[i + 1];
        }
        x[i] = v / piv[i];
    }
    Some(x)
}

fn dense(m: &[Vec<f64>], mut ex: Vec<f64>, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let below: f64 = (k + 1..n).map(|i| a[i][k]).sum();
        let piv = ex[k] - below;
        if !pivot_ok(piv) {
            return None;
        }
        a[k][k] = piv;
        let scale = ex[k] / piv;
        for j in k + 1..n {
            ex[j] -= a[k][j] * scale;
        }
        for i in k + 1..n {
            let l = a[i][k] / piv;
            if l == 0.0 {
                continue;
            }
            for j in k + 1..n {
                if j != i {
                    a[i][j] -= l * a[k][j];
                }
            }
            b[i] -= l * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}
