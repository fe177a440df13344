//! Dense vectors and matrices over [`Scalar`], with the decompositions the
//! rest of the crate needs: determinants, linear solves, kernels, ranks,
//! cofactor sums, and definiteness of quadratic forms on subspaces.
//!
//! Exact-mode algorithms never round: determinants use fraction-free
//! (Bareiss) elimination, everything else reduced row echelon form over the
//! rationals. Float-mode algorithms use partial pivoting and count a pivot
//! only when it exceeds `tol * max|entry|`.

use crate::scalar::{Mode, Scalar};
use itertools::Itertools;
use num::rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinAlgError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entries mix exact and float modes")]
    MixedModes,
    #[error("matrix or vector must be nonempty")]
    Empty,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("row count {rows} exceeds column count {cols}")]
    RowsExceedCols { rows: usize, cols: usize },
}

type Result<T> = std::result::Result<T, LinAlgError>;

/// Column vector with a single numeric mode throughout.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    entries: Vec<Scalar>,
    mode: Mode,
}

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(LinAlgError::Empty);
        }
        let mode = entries[0].mode();
        if entries.iter().any(|e| e.mode() != mode) {
            return Err(LinAlgError::MixedModes);
        }
        Ok(Vector { entries, mode })
    }

    pub fn zeros(n: usize, mode: Mode) -> Self {
        Vector {
            entries: vec![Scalar::zero(mode); n],
            mode,
        }
    }

    pub fn ones(n: usize, mode: Mode) -> Self {
        Vector {
            entries: vec![Scalar::one(mode); n],
            mode,
        }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Vector::new(v.iter().map(|&x| Scalar::from_int(x)).collect()).unwrap()
    }

    pub fn from_f64s(v: &[f64]) -> Self {
        Vector::new(v.iter().map(|&x| Scalar::from_f64(x)).collect()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn to_float(&self) -> Vector {
        Vector {
            entries: self.entries.iter().map(|e| e.to_float()).collect(),
            mode: Mode::Float,
        }
    }

    pub fn dot(&self, other: &Vector) -> Result<Scalar> {
        if self.dim() != other.dim() {
            return Err(LinAlgError::DimensionMismatch(format!(
                "dot of lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut acc = Scalar::zero(self.mode);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = &acc + &(a * b);
        }
        Ok(acc)
    }

    pub fn sum(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for a in &self.entries {
            acc = &acc + a;
        }
        acc
    }

    pub fn l1_norm(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for a in &self.entries {
            acc = &acc + &a.abs();
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector {
            entries: self.entries.iter().map(|e| e * c).collect(),
            mode: self.mode,
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        if self.dim() != other.dim() {
            return Err(LinAlgError::DimensionMismatch("vector add".into()));
        }
        Ok(Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            mode: self.mode,
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        if self.dim() != other.dim() {
            return Err(LinAlgError::DimensionMismatch("vector sub".into()));
        }
        Ok(Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            mode: self.mode,
        })
    }

    pub fn is_zero_with(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.is_zero_with(tol))
    }
}

/// Row-major dense matrix with a single numeric mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    mode: Mode,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(LinAlgError::Empty);
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::DimensionMismatch("ragged rows".into()));
        }
        let mode = rows[0][0].mode();
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.mode() != mode) {
            return Err(LinAlgError::MixedModes);
        }
        Ok(Matrix {
            rows: entries.len() / cols,
            cols,
            entries,
            mode,
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_f64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                out.push(f(i, j));
            }
        }
        let grouped: Vec<Vec<Scalar>> = out.chunks(cols).map(|c| c.to_vec()).collect();
        Matrix::from_rows(grouped)
    }

    pub fn identity(n: usize, mode: Mode) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Scalar::one(mode)
            } else {
                Scalar::zero(mode)
            }
        })
        .unwrap()
    }

    pub fn zeros(rows: usize, cols: usize, mode: Mode) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(mode); rows * cols],
            mode,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.mode(), self.mode, "mixed numeric modes in matrix");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).unwrap()
    }

    pub fn to_float(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_float()).collect(),
            mode: Mode::Float,
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).unwrap()
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
            mode: self.mode,
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Scalar::zero(self.mode);
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        if self.cols != v.dim() {
            return Err(LinAlgError::DimensionMismatch(format!(
                "matvec {}x{} by length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Scalar::zero(self.mode);
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * v.get(k));
            }
            out.push(acc);
        }
        Vector::new(out)
    }

    /// `<A x, x>`.
    pub fn quadratic_form(&self, x: &Vector) -> Result<Scalar> {
        self.matvec(x)?.dot(x)
    }

    /// Submatrix with row `i` and column `j` deleted.
    pub fn minor(&self, i: usize, j: usize) -> Matrix {
        let mut rows = Vec::with_capacity(self.rows - 1);
        for r in 0..self.rows {
            if r == i {
                continue;
            }
            let mut row = Vec::with_capacity(self.cols - 1);
            for c in 0..self.cols {
                if c == j {
                    continue;
                }
                row.push(self.get(r, c).clone());
            }
            rows.push(row);
        }
        Matrix::from_rows(rows).unwrap()
    }

    /// Columns selected by `cols` (used for Cauchy-Binet submatrices).
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone()).unwrap()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.to_f64().abs())
            .fold(0.0, f64::max)
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(LinAlgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    fn rat_rows(&self) -> Vec<Vec<BigRational>> {
        self.entries
            .chunks(self.cols)
            .map(|row| {
                row.iter()
                    .map(|e| e.as_rational().expect("exact-mode matrix").clone())
                    .collect()
            })
            .collect()
    }

    fn f64_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.cols)
            .map(|row| row.iter().map(|e| e.to_f64()).collect())
            .collect()
    }

    /// Determinant: fraction-free elimination in exact mode, partial-pivot
    /// LU in float mode.
    pub fn det(&self) -> Result<Scalar> {
        self.require_square()?;
        Ok(match self.mode {
            Mode::Exact => Scalar::Exact(dense::det_bareiss(self.rat_rows())),
            Mode::Float => Scalar::Float(dense::det_lu(self.f64_rows())),
        })
    }

    /// Solves `A b = y` when `A` is invertible; `None` when it is singular,
    /// even if the system happens to be consistent.
    pub fn solve(&self, y: &Vector, tol: f64) -> Result<Option<Vector>> {
        self.require_square()?;
        if y.dim() != self.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "solve with rhs length {} for {}x{} matrix",
                y.dim(),
                self.rows,
                self.cols
            )));
        }
        match self.mode {
            Mode::Exact => {
                let rhs: Vec<BigRational> = y
                    .entries()
                    .iter()
                    .map(|e| e.as_rational().expect("exact rhs").clone())
                    .collect();
                Ok(dense::solve_exact(self.rat_rows(), rhs)
                    .map(|sol| Vector::new(sol.into_iter().map(Scalar::Exact).collect()).unwrap()))
            }
            Mode::Float => {
                let thr = (tol * self.max_abs_f64()).max(1e-300);
                let rhs: Vec<f64> = y.entries().iter().map(|e| e.to_f64()).collect();
                Ok(dense::solve_f64(self.f64_rows(), rhs, thr)
                    .map(|sol| Vector::new(sol.into_iter().map(Scalar::Float).collect()).unwrap()))
            }
        }
    }

    /// A particular solution of `A b = y` for possibly singular `A`
    /// (free variables pinned at zero), or `None` when inconsistent.
    pub fn solve_any(&self, y: &Vector, tol: f64) -> Result<Option<Vector>> {
        if y.dim() != self.rows {
            return Err(LinAlgError::DimensionMismatch("solve_any rhs".into()));
        }
        let mut aug = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row: Vec<Scalar> = (0..self.cols).map(|j| self.get(i, j).clone()).collect();
            row.push(y.get(i).clone());
            aug.push(row);
        }
        let aug = Matrix::from_rows(aug)?;
        let r = aug.rref(tol);
        // a pivot in the rhs column means the system is inconsistent
        if r.pivot_cols.contains(&self.cols) {
            return Ok(None);
        }
        let mut sol = vec![Scalar::zero(self.mode); self.cols];
        for (rank_row, &pc) in r.pivot_cols.iter().enumerate() {
            sol[pc] = r.matrix.get(rank_row, self.cols).clone();
        }
        Ok(Some(Vector::new(sol).unwrap()))
    }

    fn rref(&self, tol: f64) -> RrefResult {
        match self.mode {
            Mode::Exact => {
                let (rows, pivots) = dense::rref_exact(self.rat_rows());
                RrefResult {
                    matrix: Matrix::from_rows(
                        rows.into_iter()
                            .map(|r| r.into_iter().map(Scalar::Exact).collect())
                            .collect(),
                    )
                    .unwrap(),
                    pivot_cols: pivots,
                }
            }
            Mode::Float => {
                let thr = (tol * self.max_abs_f64()).max(1e-300);
                let (rows, pivots) = dense::rref_f64(self.f64_rows(), thr);
                RrefResult {
                    matrix: Matrix::from_rows(
                        rows.into_iter()
                            .map(|r| r.into_iter().map(Scalar::Float).collect())
                            .collect(),
                    )
                    .unwrap(),
                    pivot_cols: pivots,
                }
            }
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).pivot_cols.len()
    }

    /// Basis of the kernel, one vector per free column of the reduced
    /// echelon form, scaled so the first nonzero entry is 1.
    pub fn kernel_basis(&self, tol: f64) -> Vec<Vector> {
        let r = self.rref(tol);
        let pivot_cols = &r.pivot_cols;
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(self.mode); self.cols];
            v[free] = Scalar::one(self.mode);
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -r.matrix.get(row, free);
            }
            // canonical scaling: first nonzero entry becomes 1
            if let Some(first) = v.iter().find(|e| !e.is_zero_with(tol)).cloned() {
                v = v.into_iter().map(|e| &e / &first).collect();
            }
            basis.push(Vector::new(v).unwrap());
        }
        basis
    }

    /// `sum_{i,j} (-1)^{i+j} det(A_{i|j})`. Uses `det(A) * <A^{-1} 1, 1>`
    /// when `A` is invertible and falls back to the n^2 minors otherwise.
    pub fn cofactor_sum(&self, tol: f64) -> Result<Scalar> {
        self.require_square()?;
        if self.rows == 1 {
            // the single minor is the empty matrix, whose determinant is 1
            return Ok(Scalar::one(self.mode));
        }
        let ones = Vector::ones(self.rows, self.mode);
        if let Some(b) = self.solve(&ones, tol)? {
            let det = self.det()?;
            return Ok(&det * &b.dot(&ones)?);
        }
        let mut acc = Scalar::zero(self.mode);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let m = self.minor(i, j).det()?;
                if (i + j) % 2 == 0 {
                    acc = &acc + &m;
                } else {
                    acc = &acc - &m;
                }
            }
        }
        Ok(acc)
    }

    /// Whether the quadratic form `x^T A x` restricted to the span of
    /// `basis` is negative semidefinite (negative definite when `strict`).
    ///
    /// With `P` the matrix whose rows are the basis vectors this decides
    /// definiteness of `Q = P A P^T`: by exact pivot counting on `-Q` in
    /// exact mode, by a symmetric eigenvalue routine with threshold
    /// `tol * max|Q|` in float mode.
    pub fn nsd_on_subspace(&self, basis: &[Vector], strict: bool, tol: f64) -> Result<bool> {
        self.require_square()?;
        if !self.is_symmetric() {
            return Err(LinAlgError::NotSymmetric);
        }
        if basis.is_empty() {
            return Ok(true);
        }
        if basis.iter().any(|v| v.dim() != self.cols) {
            return Err(LinAlgError::DimensionMismatch(
                "basis vectors must match matrix dimension".into(),
            ));
        }
        let p = Matrix::from_rows(basis.iter().map(|v| v.entries().to_vec()).collect())?;
        let q = p.matmul(self)?.matmul(&p.transpose())?;
        match self.mode {
            Mode::Exact => {
                let neg: Vec<Vec<BigRational>> = q
                    .rat_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| -x).collect())
                    .collect();
                let (psd, pd) = dense::psd_status_exact(neg);
                Ok(if strict { pd } else { psd })
            }
            Mode::Float => {
                let thr = tol * q.max_abs_f64().max(1.0);
                let (eigs, _) = dense::sym_eigen_f64(q.f64_rows(), false);
                let max_eig = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Ok(if strict {
                    max_eig < -thr
                } else {
                    max_eig <= thr
                })
            }
        }
    }

    /// Both sides of `det(A A^T) = sum_{|S|=m} det(A_S)^2` for an `m x n`
    /// matrix with `m <= n`.
    pub fn cauchy_binet_check(&self) -> Result<CauchyBinet> {
        if self.rows > self.cols {
            return Err(LinAlgError::RowsExceedCols {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let lhs = self.matmul(&self.transpose())?.det()?;
        let mut rhs = Scalar::zero(self.mode);
        for subset in (0..self.cols).combinations(self.rows) {
            let d = self.select_columns(&subset).det()?;
            rhs = &rhs + &(&d * &d);
        }
        Ok(CauchyBinet { lhs, rhs })
    }

    /// Symmetric eigenvalues and eigenvectors in float mode (Jacobi).
    /// Returns `(values, vectors)` where `vectors[k]` pairs with `values[k]`.
    pub fn sym_eigen_f64(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        self.require_square()?;
        let (vals, vecs) = dense::sym_eigen_f64(self.f64_rows(), true);
        Ok((vals, vecs.expect("vectors requested")))
    }
}

struct RrefResult {
    matrix: Matrix,
    pivot_cols: Vec<usize>,
}

/// Both sides of the Cauchy-Binet identity; the contract is `lhs == rhs`.
#[derive(Clone, Debug)]
pub struct CauchyBinet {
    pub lhs: Scalar,
    pub rhs: Scalar,
}

pub(crate) mod dense {
    use num::rational::BigRational;
    use num::{One, Signed, Zero};

    /// Fraction-free (Bareiss) determinant over the rationals.
    pub fn det_bareiss(mut a: Vec<Vec<BigRational>>) -> BigRational {
        let n = a.len();
        if n == 0 {
            return BigRational::one();
        }
        let mut sign = 1i32;
        let mut prev = BigRational::one();
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigRational::zero(),
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Partial-pivot LU determinant.
    pub fn det_lu(mut a: Vec<Vec<f64>>) -> f64 {
        let n = a.len();
        let mut det = 1.0f64;
        for k in 0..n {
            let (piv, piv_val) = (k..n)
                .map(|r| (r, a[r][k].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if piv_val == 0.0 {
                return 0.0;
            }
            if piv != k {
                a.swap(k, piv);
                det = -det;
            }
            det *= a[k][k];
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        det
    }

    /// Gauss-Jordan solve for invertible exact systems.
    pub fn solve_exact(
        a: Vec<Vec<BigRational>>,
        rhs: Vec<BigRational>,
    ) -> Option<Vec<BigRational>> {
        let n = a.len();
        let mut aug = a;
        for (row, r) in aug.iter_mut().zip(rhs) {
            row.push(r);
        }
        for k in 0..n {
            let piv = (k..n).find(|&r| !aug[r][k].is_zero())?;
            aug.swap(k, piv);
            let d = aug[k][k].clone();
            for j in k..=n {
                aug[k][j] = &aug[k][j] / &d;
            }
            for i in 0..n {
                if i == k || aug[i][k].is_zero() {
                    continue;
                }
                let f = aug[i][k].clone();
                for j in k..=n {
                    let delta = &f * &aug[k][j];
                    aug[i][j] = &aug[i][j] - &delta;
                }
            }
        }
        Some(aug.into_iter().map(|row| row[n].clone()).collect())
    }

    /// Partial-pivot solve; `None` when the best pivot falls below `thr`.
    pub fn solve_f64(a: Vec<Vec<f64>>, rhs: Vec<f64>, thr: f64) -> Option<Vec<f64>> {
        let n = a.len();
        let mut aug = a;
        for (row, r) in aug.iter_mut().zip(rhs) {
            row.push(r);
        }
        for k in 0..n {
            let (piv, piv_val) = (k..n)
                .map(|r| (r, aug[r][k].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if piv_val <= thr {
                return None;
            }
            aug.swap(k, piv);
            let d = aug[k][k];
            for j in k..=n {
                aug[k][j] /= d;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = aug[i][k];
                if f == 0.0 {
                    continue;
                }
                for j in k..=n {
                    aug[i][j] -= f * aug[k][j];
                }
            }
        }
        Some(aug.into_iter().map(|row| row[n]).collect())
    }

    /// Reduced row echelon form over the rationals: `(rows, pivot_cols)`.
    pub fn rref_exact(mut a: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, piv);
            let d = a[r][c].clone();
            for j in c..cols {
                a[r][j] = &a[r][j] / &d;
            }
            for i in 0..rows {
                if i == r || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Float reduced echelon form with an absolute pivot threshold.
    pub fn rref_f64(mut a: Vec<Vec<f64>>, thr: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let (piv, piv_val) = (r..rows)
                .map(|i| (i, a[i][c].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if piv_val <= thr {
                continue;
            }
            a.swap(r, piv);
            let d = a[r][c];
            for j in c..cols {
                a[r][j] /= d;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = a[i][c];
                if f == 0.0 {
                    continue;
                }
                for j in c..cols {
                    a[i][j] -= f * a[r][j];
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Exact definiteness of a symmetric matrix by pivoting on positive
    /// diagonal entries and taking Schur complements. Returns
    /// `(is_psd, is_pd)`.
    pub fn psd_status_exact(mut s: Vec<Vec<BigRational>>) -> (bool, bool) {
        let n = s.len();
        let mut active: Vec<usize> = (0..n).collect();
        let mut pivots = 0usize;
        loop {
            if active.is_empty() {
                return (true, pivots == n);
            }
            if active.iter().any(|&i| s[i][i].is_negative()) {
                return (false, false);
            }
            let Some(pos) = active.iter().position(|&i| s[i][i].is_positive()) else {
                // all remaining diagonal entries vanish: PSD only if the
                // whole remaining block is zero, and then never PD
                let zero_block = active
                    .iter()
                    .all(|&i| active.iter().all(|&j| s[i][j].is_zero()));
                return (zero_block, false);
            };
            let piv = active.remove(pos);
            pivots += 1;
            let d = s[piv][piv].clone();
            for &i in &active {
                for &j in &active {
                    let delta = &s[i][piv] * &s[piv][j] / &d;
                    let v = &s[i][j] - &delta;
                    s[i][j] = v;
                }
            }
        }
    }

    /// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
    pub fn sym_eigen_f64(
        mut a: Vec<Vec<f64>>,
        want_vectors: bool,
    ) -> (Vec<f64>, Option<Vec<Vec<f64>>>) {
        let n = a.len();
        let mut v = if want_vectors {
            let mut id = vec![vec![0.0; n]; n];
            for (i, row) in id.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            Some(id)
        } else {
            None
        };
        let scale = a
            .iter()
            .flatten()
            .map(|x| x.abs())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a[i][j] * a[i][j];
                }
            }
            if off.sqrt() <= 1e-14 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q].abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                    if let Some(vm) = v.as_mut() {
                        for row in vm.iter_mut() {
                            let vp = row[p];
                            let vq = row[q];
                            row[p] = c * vp - s * vq;
                            row[q] = s * vp + c * vq;
                        }
                    }
                }
            }
        }
        let vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        let vectors = v.map(|vm| {
            (0..n)
                .map(|k| vm.iter().map(|row| row[k]).collect())
                .collect()
        });
        (vals, vectors)
    }
}
