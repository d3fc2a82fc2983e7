//! Dense LU factorization with partial pivoting.

use std::ops::{Index, IndexMut};

use thiserror::Error;

/// Largest dimension accepted by [`condition_1norm`].
pub const MAX_CONDITION_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular: pivot {pivot:e} in column {column} is below tolerance")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("condition estimate supports at most {MAX_CONDITION_DIM} rows, got {0}")]
    TooLarge(usize),
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zeros(m, m);
        for i in 0..m {
            out[(i, i)] = 1.0;
        }
        out
    }

    /// Builds a matrix from equal-length rows.
    ///
    /// # Panics
    /// If the rows have different lengths.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn check_square(&self) -> Result<(), LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Packed factors of `P·A = L·U`: strictly lower part of `packed` holds `L`
/// (unit diagonal implied), upper part holds `U`. `perm[i]` is the row of
/// `A` that ended up in row `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactors {
    packed: DenseMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `+1` for an even number of row swaps, `−1` for odd.
    pub fn parity(&self) -> i32 {
        if self.swaps.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn swaps(&self) -> usize {
        self.swaps
    }

    pub fn lower(&self) -> DenseMatrix {
        let m = self.dim();
        let mut l = DenseMatrix::identity(m);
        for i in 0..m {
            for j in 0..i {
                l[(i, j)] = self.packed[(i, j)];
            }
        }
        l
    }

    pub fn upper(&self) -> DenseMatrix {
        let m = self.dim();
        let mut u = DenseMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                u[(i, j)] = self.packed[(i, j)];
            }
        }
        u
    }

    /// Determinant of the factored matrix.
    pub fn determinant(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.packed[(i, i)])
            .product::<f64>()
            * self.parity() as f64
    }
}

/// Default pivot tolerance, `1e-13·‖A‖∞`.
pub fn default_pivot_tol(a: &DenseMatrix) -> f64 {
    1e-13 * a.norm_inf()
}

/// Factors `a` with row pivoting on the largest magnitude in each column.
/// `pivot_tol` defaults to [`default_pivot_tol`].
pub fn lu_factor(a: &DenseMatrix, pivot_tol: Option<f64>) -> Result<LuFactors, LinalgError> {
    a.check_square()?;
    if let Some(pos) = a.data.iter().position(|v| !v.is_finite()) {
        return Err(LinalgError::NonFinite {
            row: pos / a.cols,
            col: pos % a.cols,
        });
    }
    let tol = pivot_tol.unwrap_or_else(|| default_pivot_tol(a));
    let m = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut swaps = 0;
    for k in 0..m {
        let (pivot_row, pivot) =
            (k..m)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot <= tol {
            return Err(LinalgError::SingularMatrix { column: k, pivot });
        }
        if pivot_row != k {
            for j in 0..m {
                lu.data.swap(k * m + j, pivot_row * m + j);
            }
            perm.swap(k, pivot_row);
            swaps += 1;
        }
        let diag = lu[(k, k)];
        for i in k + 1..m {
            let factor = lu[(i, k)] / diag;
            lu[(i, k)] = factor;
            if factor != 0.0 {
                for j in k + 1..m {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
    }
    Ok(LuFactors {
        packed: lu,
        perm,
        swaps,
    })
}

/// Solves `A·x = b` from the factors of `A`.
pub fn lu_solve(factors: &LuFactors, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let m = factors.dim();
    if b.len() != m {
        return Err(LinalgError::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    let lu = &factors.packed;
    let mut x: Vec<f64> = factors.perm.iter().map(|&p| b[p]).collect();
    for i in 0..m {
        let s: f64 = (0..i).map(|j| lu[(i, j)] * x[j]).sum();
        x[i] -= s;
    }
    for i in (0..m).rev() {
        let s: f64 = (i + 1..m).map(|j| lu[(i, j)] * x[j]).sum();
        x[i] = (x[i] - s) / lu[(i, i)];
    }
    Ok(x)
}

/// Convenience wrapper: factor with the default tolerance, then solve.
pub fn solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    lu_solve(&lu_factor(a, None)?, b)
}

/// `‖A‖₁·‖A⁻¹‖₁`, with the inverse formed column by column from the LU
/// factors.
pub fn condition_1norm(a: &DenseMatrix) -> Result<f64, LinalgError> {
    a.check_square()?;
    if a.rows > MAX_CONDITION_DIM {
        return Err(LinalgError::TooLarge(a.rows));
    }
    let factors = lu_factor(a, None)?;
    let m = a.rows;
    let mut inv_norm: f64 = 0.0;
    let mut e = vec![0.0; m];
    for j in 0..m {
        e.fill(0.0);
        e[j] = 1.0;
        let col = lu_solve(&factors, &e)?;
        inv_norm = inv_norm.max(col.iter().map(|v| v.abs()).sum());
    }
    Ok(a.norm_1() * inv_norm)
}
