//! Small dense linear algebra used by the regression-style estimators.
//!
//! Everything here operates on row-major `Vec<f64>` buffers. The systems
//! involved are tiny (ADF designs top out around 30 columns), so plain
//! Gaussian elimination with partial pivoting is both adequate and exactly
//! reproducible.

/// Row-major dense matrix.
#[derive(Debug, Clone)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    #[cfg(test)]
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            debug_assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot collapses below `1e-12` relative
/// to the largest entry (singular or numerically unusable system).
pub(crate) fn solve(a: &Mat, b: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(a.rows, a.cols);
    debug_assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = m.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);

    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if m.get(r, col).abs() > m.get(pivot, col).abs() {
                pivot = r;
            }
        }
        if m.get(pivot, col).abs() < 1e-12 * scale {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot, j));
                m.set(pivot, j, tmp);
            }
            rhs.swap(col, pivot);
        }
        let diag = m.get(col, col);
        for r in col + 1..n {
            let factor = m.get(r, col) / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m.get(r, j) - factor * m.get(col, j);
                m.set(r, j, v);
            }
            rhs[r] -= factor * rhs[col];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            acc -= m.get(i, j) * xj;
        }
        x[i] = acc / m.get(i, i);
    }
    Some(x)
}

/// Ordinary least squares via the normal equations.
///
/// Returns the coefficient vector and the inverse of `XᵀX` (needed for
/// coefficient standard errors). `None` when `XᵀX` is singular.
pub(crate) fn least_squares(design: &Mat, response: &[f64]) -> Option<(Vec<f64>, Mat)> {
    let k = design.cols;
    let mut xtx = Mat::zeros(k, k);
    let mut xty = vec![0.0; k];
    for (r, &y) in response.iter().enumerate() {
        let row = design.row(r);
        debug_assert!(r < design.rows);
        for i in 0..k {
            xty[i] += row[i] * y;
            for j in i..k {
                let v = xtx.get(i, j) + row[i] * row[j];
                xtx.set(i, j, v);
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            xtx.set(i, j, xtx.get(j, i));
        }
    }

    let coef = solve(&xtx, &xty)?;
    // invert XᵀX column by column
    let mut inv = Mat::zeros(k, k);
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        let col = solve(&xtx, &e)?;
        for (i, &v) in col.iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    Some((coef, inv))
}
